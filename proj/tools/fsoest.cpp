#include "fsoest/cli.hpp"

int main(int argc, char** argv) { return fsoest::run_cli(argc, argv); }
