#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsoest/channel.hpp"
#include "fsoest/errors.hpp"
#include "fsoest/montecarlo.hpp"
#include "fsoest/optimize.hpp"
#include "fsoest/scenario.hpp"
#include "fsoest/secrecy.hpp"

namespace fsoest {

using ScenarioConfig = Scenario;
using json = nlohmann::ordered_json;

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_solver = 2, exit_validation = 3 };

namespace detail {

inline void read_number(const json& obj, const std::string& prefix, const char* key, double& dst)
{
    if (!obj.contains(key)) {
        return;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(prefix + key, "must be a number");
    }
    dst = v.get<double>();
}

inline void read_int(const json& obj, const std::string& prefix, const char* key, int& dst)
{
    if (!obj.contains(key)) {
        return;
    }
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(prefix + key, "must be an integer");
    }
    const auto n = v.get<std::int64_t>();
    if (n < 1 || n > 1024) {
        throw ConfigError(prefix + key, "must be an integer in [1, 1024]");
    }
    dst = static_cast<int>(n);
}

inline void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> known)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            ok = ok || it.key() == k;
        }
        if (!ok) {
            throw ConfigError(prefix + it.key(), "unknown field");
        }
    }
}

inline const json& section(const json& root, const char* key)
{
    static const json empty = json::object();
    if (!root.contains(key)) {
        return empty;
    }
    const auto& v = root.at(key);
    if (!v.is_object()) {
        throw ConfigError(key, "must be an object");
    }
    return v;
}

} // namespace detail

// Parses a JSON scenario; every missing field keeps its baseline default.
inline Scenario parse_config(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("<document>", "top level must be an object");
    }
    detail::reject_unknown(root, "", {"geometry", "nodes", "sigma_s", "s_th", "epsilon", "omega_adj"});
    Scenario s;
    const auto& g = detail::section(root, "geometry");
    detail::reject_unknown(g, "geometry.", {"wavelength_m", "distance_bob_m", "distance_eve_m", "cn2", "beam_waist_wb",
                                            "aperture_radius_rho"});
    detail::read_number(g, "geometry.", "wavelength_m", s.geometry.wavelength_m);
    detail::read_number(g, "geometry.", "distance_bob_m", s.geometry.distance_bob_m);
    detail::read_number(g, "geometry.", "distance_eve_m", s.geometry.distance_eve_m);
    detail::read_number(g, "geometry.", "cn2", s.geometry.cn2);
    detail::read_number(g, "geometry.", "beam_waist_wb", s.geometry.beam_waist_wb);
    detail::read_number(g, "geometry.", "aperture_radius_rho", s.geometry.aperture_radius_rho);
    const auto& n = detail::section(root, "nodes");
    detail::reject_unknown(n, "nodes.", {"n_a", "n_b", "n_e", "gamma0"});
    detail::read_int(n, "nodes.", "n_a", s.nodes.n_a);
    detail::read_int(n, "nodes.", "n_b", s.nodes.n_b);
    detail::read_int(n, "nodes.", "n_e", s.nodes.n_e);
    detail::read_number(n, "nodes.", "gamma0", s.nodes.gamma0);
    detail::read_number(root, "", "sigma_s", s.sigma_s);
    detail::read_number(root, "", "s_th", s.s_th);
    detail::read_number(root, "", "epsilon", s.epsilon);
    detail::read_number(root, "", "omega_adj", s.omega_adj);
    s.validate();
    return s;
}

inline Scenario load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("--config", "cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 10);
    return std::string(buf, r.ptr);
}

namespace detail {

inline constexpr std::string_view num_tag = "@num:";

} // namespace detail

// JSON number printed with 10 significant digits; render() unquotes it.
inline json num(double v)
{
    if (!std::isfinite(v)) {
        return format_number(v);
    }
    return std::string(detail::num_tag) + format_number(v);
}

inline std::string render(const json& j)
{
    const std::string raw = j.dump(2);
    const std::string tag = "\"" + std::string(detail::num_tag);
    std::string out;
    out.reserve(raw.size());
    std::size_t pos = 0;
    for (std::size_t at = raw.find(tag); at != std::string::npos; at = raw.find(tag, pos)) {
        out.append(raw, pos, at - pos);
        const std::size_t end = raw.find('"', at + tag.size());
        out.append(raw, at + tag.size(), end - at - tag.size());
        pos = end + 1;
    }
    out.append(raw, pos);
    return out + "\n";
}

inline std::string cmd_params(const Scenario& s)
{
    const LinkModel m(s);
    json j;
    auto node = [&](const TurbulenceParams& t, const GammaApprox& ga, int n) {
        json o;
        o["rytov_variance"] = num(t.rytov_var);
        o["alpha"] = num(t.alpha);
        o["beta_single"] = num(t.beta_single);
        o["beta"] = num(t.beta_single * n);
        o["k_ap"] = num(ga.k_ap);
        o["theta_ap"] = num(ga.theta_ap);
        return o;
    };
    j["bob"] = node(m.turb_bob, m.approx_bob, s.nodes.n_b);
    j["eve"] = node(m.turb_eve, m.approx_eve, s.nodes.n_e);
    json p;
    p["nu"] = num(m.pointing.nu);
    p["a0"] = num(m.pointing.a0);
    p["omega_e"] = num(m.pointing.omega_e);
    p["sigma_s"] = num(m.pointing.sigma_s);
    if (m.pointing_free()) {
        p["xi"] = "pointing_free";
    } else {
        p["xi"] = num(m.pointing.xi);
    }
    j["pointing"] = p;
    return render(j);
}

struct Range {
    double lo = 0;
    double hi = 0;
};

inline Range parse_range(const std::string& text, const char* flag)
{
    const auto colon = text.find(':');
    Range r;
    auto parse = [&](std::string_view sv, double& dst) {
        const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), dst);
        return res.ec == std::errc() && res.ptr == sv.data() + sv.size();
    };
    if (colon == std::string::npos || !parse(std::string_view(text).substr(0, colon), r.lo)
        || !parse(std::string_view(text).substr(colon + 1), r.hi)) {
        throw ConfigError(flag, "expected lo:hi, got '" + text + "'");
    }
    if (!(r.hi >= r.lo) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
        throw ConfigError(flag, "need finite lo <= hi");
    }
    return r;
}

enum class SweepAxis { r_e, r_b, r_e_r_b, s_th, n, sigma_s };

inline SweepAxis parse_axis(const std::string& s)
{
    if (s == "r_e") {
        return SweepAxis::r_e;
    }
    if (s == "r_b") {
        return SweepAxis::r_b;
    }
    if (s == "r_e×r_b" || s == "r_e_r_b" || s == "r_exr_b") {
        return SweepAxis::r_e_r_b;
    }
    if (s == "s_th") {
        return SweepAxis::s_th;
    }
    if (s == "n") {
        return SweepAxis::n;
    }
    if (s == "sigma_s") {
        return SweepAxis::sigma_s;
    }
    throw ConfigError("--axis", "unknown axis '" + s + "'");
}

inline Scheme parse_scheme(const std::string& s)
{
    if (s == "adaptive") {
        return Scheme::adaptive;
    }
    if (s == "fixed") {
        return Scheme::fixed;
    }
    throw ConfigError("--scheme", "expected adaptive or fixed, got '" + s + "'");
}

struct SweepOptions {
    SweepAxis axis = SweepAxis::r_e;
    Scheme scheme = Scheme::adaptive;
    Range range{0.0, 4.0};
    // second axis of r_e×r_b sweeps
    Range range_b{0.0, 6.0};
    int steps = 61;
    // c_b for the adaptive scheme; r_b for fixed-scheme r_e sweeps
    double c_b = 4.0;
    // r_e for fixed-scheme r_b sweeps
    double r_e = 1.0;
    // s_th for every axis except s_th itself; defaults to the scenario's
    std::optional<double> s_th;
    bool with_mc = false;
    SimConfig sim{100'000, 1, 64, 0};
};

namespace detail {

inline std::vector<double> axis_points(const Range& r, int steps)
{
    std::vector<double> v;
    for (int i = 0; i < steps; ++i) {
        v.push_back(steps == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (steps - 1));
    }
    return v;
}

struct SweepRow {
    double est = 0;
    std::optional<Estimate> mc;
    double sop = 1;
    double outage = 0;
    bool met = false;
};

inline void write_row(std::ostringstream& os, const std::vector<double>& keys, const SweepRow& r)
{
    for (double k : keys) {
        os << format_number(k) << ',';
    }
    os << format_number(r.est) << ',';
    if (r.mc) {
        os << format_number(r.mc->mean) << ',' << format_number(r.mc->ci_halfwidth) << ',';
    } else {
        os << ",,";
    }
    os << format_number(r.sop) << ',' << format_number(r.outage) << ',' << (r.met ? 1 : 0) << '\n';
}

inline SweepRow rate_point(const LinkModel& m, const SweepOptions& o, double s_th, RatePair rates)
{
    SweepRow row;
    const SecrecyConstraint con{s_th};
    if (o.scheme == Scheme::adaptive) {
        const auto rep = est_adaptive(m, rates.r_b, rates.r_e, con);
        row.est = rep.est;
        row.sop = rep.sop;
        row.met = rep.constraint_met;
    } else {
        const auto rep = est_fixed(m, rates, con);
        row.est = rep.est;
        row.sop = rep.sop;
        row.outage = 1.0 - rep.reliability_factor;
        row.met = rep.constraint_met;
    }
    if (o.with_mc) {
        row.mc = estimate_est(m, rates, o.scheme, s_th, o.sim);
    }
    return row;
}

// Solver optimum for one scenario; the closed-form columns are evaluated at the returned rates.
inline SweepRow optimum_point(const Scenario& s, const SweepOptions& o, double s_th)
{
    const LinkModel m(s);
    SweepRow row;
    if (o.scheme == Scheme::adaptive) {
        const auto opt = adaptive_optimal(m, o.c_b, s_th);
        row.est = opt.est;
        row.sop = opt.sop;
        row.met = opt.feasible;
        if (o.with_mc && opt.feasible) {
            row.mc = estimate_est(m, opt.rates, Scheme::adaptive, s_th, o.sim);
        }
    } else {
        const auto opt = fixed_optimal(m, s_th);
        row.est = opt.est;
        row.sop = opt.sop;
        row.outage = reliability_outage(m, opt.rates.r_b, CdfModel::gamma_approx);
        row.met = opt.sop <= s_th;
        if (o.with_mc) {
            row.mc = estimate_est(m, opt.rates, Scheme::fixed, s_th, o.sim);
        }
    }
    return row;
}

} // namespace detail

inline std::string cmd_sweep(const Scenario& s, const SweepOptions& o)
{
    if (o.steps < 0) {
        throw ConfigError("--steps", "must be non-negative");
    }
    const double s_th = o.s_th.value_or(s.s_th);
    SecrecyConstraint{s_th}.validate();
    std::ostringstream os;
    const char* tail = "est_closed,est_mc,ci,sop,reliability_outage,constraint_met\n";
    const LinkModel m(s);
    const auto pts = detail::axis_points(o.range, o.steps);
    switch (o.axis) {
    case SweepAxis::r_e: {
        os << "r_e," << tail;
        for (double re : pts) {
            if (re < 0 || re > o.c_b) {
                throw ConfigError("--range", "r_e must lie in [0, c_b]");
            }
            detail::write_row(os, {re}, detail::rate_point(m, o, s_th, {o.c_b, re}));
        }
        break;
    }
    case SweepAxis::r_b: {
        if (o.scheme != Scheme::fixed) {
            throw ConfigError("--axis", "r_b sweeps need --scheme fixed");
        }
        os << "r_b," << tail;
        for (double rb : pts) {
            if (rb < o.r_e) {
                throw ConfigError("--range", "r_b must not be below r_e");
            }
            detail::write_row(os, {rb}, detail::rate_point(m, o, s_th, {rb, o.r_e}));
        }
        break;
    }
    case SweepAxis::r_e_r_b: {
        if (o.scheme != Scheme::fixed) {
            throw ConfigError("--axis", "r_e×r_b sweeps need --scheme fixed");
        }
        if (o.range.lo < 0 || o.range_b.lo < 0) {
            throw ConfigError("--range", "rates must be non-negative");
        }
        os << "r_e,r_b," << tail;
        for (double re : pts) {
            for (double rb : detail::axis_points(o.range_b, o.steps)) {
                if (re <= rb) {
                    detail::write_row(os, {re, rb}, detail::rate_point(m, o, s_th, {rb, re}));
                }
            }
        }
        break;
    }
    case SweepAxis::s_th: {
        os << "s_th," << tail;
        for (double v : pts) {
            if (!(v > 0 && v <= 1)) {
                throw ConfigError("--range", "s_th must lie in (0, 1]");
            }
            detail::write_row(os, {v}, detail::optimum_point(s, o, v));
        }
        break;
    }
    case SweepAxis::n: {
        os << "n," << tail;
        if (o.range.lo < 1 || o.range.hi > 1024) {
            throw ConfigError("--range", "n must lie in [1, 1024]");
        }
        for (int v = static_cast<int>(std::ceil(o.range.lo)); v <= static_cast<int>(std::floor(o.range.hi)) && o.steps > 0;
             ++v) {
            Scenario q = s;
            q.nodes.n_a = q.nodes.n_b = q.nodes.n_e = v;
            detail::write_row(os, {static_cast<double>(v)}, detail::optimum_point(q, o, s_th));
        }
        break;
    }
    case SweepAxis::sigma_s: {
        os << "sigma_s," << tail;
        for (double v : pts) {
            if (v < 0) {
                throw ConfigError("--range", "sigma_s must be non-negative");
            }
            Scenario q = s;
            q.sigma_s = v;
            detail::write_row(os, {v}, detail::optimum_point(q, o, s_th));
        }
        break;
    }
    }
    return os.str();
}

inline json optimum_json(const Optimum& o)
{
    json j;
    j["r_e"] = num(o.rates.r_e);
    j["r_b"] = num(o.rates.r_b);
    j["est"] = num(o.est);
    j["method"] = std::string(to_string(o.method));
    j["hessian_ok"] = o.hessian_ok;
    j["constraint_active"] = o.constraint_active;
    j["feasible"] = o.feasible;
    j["sop"] = num(o.sop);
    j["psi_exact"] = num(o.psi_exact);
    j["sop_exact"] = num(o.sop_exact);
    j["iterations"] = o.iterations;
    j["diagnostics"] = o.diagnostics;
    return j;
}

struct OptimizeOptions {
    Scheme scheme = Scheme::fixed;
    std::optional<double> s_th;
    // omitted for the adaptive scheme: average over Bob's channel by Monte Carlo
    std::optional<double> c_b;
    SimConfig sim{20'000, 1, 64, 0};
};

inline std::string cmd_optimize(const Scenario& s, const OptimizeOptions& o)
{
    const double s_th = o.s_th.value_or(s.s_th);
    SecrecyConstraint{s_th}.validate();
    const LinkModel m(s);
    json j;
    j["scheme"] = o.scheme == Scheme::adaptive ? "adaptive" : "fixed";
    j["s_th"] = num(s_th);
    if (o.scheme == Scheme::adaptive && !o.c_b) {
        const auto e = estimate_est_adaptive_averaged(m, s_th, o.sim);
        j["mode"] = "averaged";
        j["est"] = num(e.mean);
        j["ci_halfwidth"] = num(e.ci_halfwidth);
        j["trials"] = e.trials;
        j["seed"] = o.sim.seed;
        return render(j);
    }
    Optimum opt;
    Optimum oracle;
    if (o.scheme == Scheme::adaptive) {
        if (!(*o.c_b > 0) || !std::isfinite(*o.c_b)) {
            throw ConfigError("--cb", "must be a positive number");
        }
        j["c_b"] = num(*o.c_b);
        opt = adaptive_optimal(m, *o.c_b, s_th);
        oracle = grid_oracle_adaptive(m, *o.c_b, s_th);
    } else {
        opt = fixed_optimal(m, s_th);
        SolverOptions g;
        g.grid_points = 200;
        oracle = grid_oracle_fixed(m, s_th, g);
    }
    j["mode"] = "solver";
    j["optimum"] = optimum_json(opt);
    j["oracle_est"] = num(oracle.est);
    j["oracle_gap"] = num(oracle.est > 0 ? (oracle.est - opt.est) / oracle.est : 0.0);
    return render(j);
}

struct ValidationReport {
    std::string text;
    int passed = 0;
    int failed = 0;
    int inconclusive = 0;
};

namespace detail {

// rate at which a decreasing-in-rate probability law crosses p
template <class F>
double rate_at_probability(F&& prob, double p, bool increasing)
{
    double hi = 1.0;
    while (hi < 60 && (increasing ? prob(hi) < p : prob(hi) > p)) {
        hi *= 2;
    }
    return bisect([&](double r) { return prob(r) - p; }, 0.0, hi, 1e-10);
}

} // namespace detail

// Closed form against Monte Carlo over the configured scenario: SOP for sigma_s in {1, 2, 3} and
// reliability outage for N_A = N_B in {1, 2, 4}. A check is inconclusive when its CI is wider than
// 0.01 or fewer than 10 expected events fall on the rarer side.
inline ValidationReport cmd_validate(const Scenario& s, std::uint64_t trials, std::uint64_t seed, unsigned threads = 0)
{
    s.validate();
    ValidationReport rep;
    json checks = json::array();
    SimConfig sim{trials, seed, 64, threads};
    auto add = [&](json c, double closed, const Estimate& e) {
        const double tol = e.ci_halfwidth + 1e-4;
        const double diff = std::fabs(closed - e.mean);
        const double n = static_cast<double>(e.trials);
        std::string status;
        if (e.ci_halfwidth > 0.01 || n * std::min(e.mean, 1.0 - e.mean) < 10) {
            status = "INCONCLUSIVE";
            ++rep.inconclusive;
        } else if (diff <= tol) {
            status = "PASS";
            ++rep.passed;
        } else {
            status = "FAIL";
            ++rep.failed;
        }
        c["closed_form"] = num(closed);
        c["monte_carlo"] = num(e.mean);
        c["ci_halfwidth"] = num(e.ci_halfwidth);
        c["margin"] = num(tol - diff);
        c["status"] = status;
        checks.push_back(std::move(c));
    };
    for (double sig : {1.0, 2.0, 3.0}) {
        Scenario q = s;
        q.sigma_s = sig;
        const LinkModel m(q);
        for (double p : {0.8, 0.5, 0.2}) {
            const double re = detail::rate_at_probability([&](double r) { return sop(m, r); }, p, false);
            json c;
            c["quantity"] = "sop";
            c["sigma_s"] = num(sig);
            c["rate"] = num(re);
            add(c, sop(m, re), estimate_sop(m, re, sim));
        }
    }
    for (int n : {1, 2, 4}) {
        Scenario q = s;
        q.nodes.n_a = q.nodes.n_b = n;
        const LinkModel m(q);
        for (double p : {0.01, 0.1, 0.5}) {
            const double rb = detail::rate_at_probability([&](double r) { return reliability_outage(m, r); }, p, true);
            json c;
            c["quantity"] = "reliability_outage";
            c["n"] = n;
            c["rate"] = num(rb);
            add(c, reliability_outage(m, rb), estimate_reliability_outage(m, rb, sim));
        }
    }
    json j;
    j["trials"] = trials;
    j["seed"] = seed;
    j["checks"] = checks;
    j["passed"] = rep.passed;
    j["failed"] = rep.failed;
    j["inconclusive"] = rep.inconclusive;
    rep.text = render(j);
    return rep;
}

namespace detail {

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out)
{
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        throw ConfigError("--out", "cannot write " + out_path);
    }
    f << text;
}

} // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Effective secrecy throughput of MIMOME FSO wiretap links"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    std::string out_path;
    app.add_option("--config", config_path, "scenario JSON");
    app.add_option("--out", out_path, "output file (default stdout)");

    auto* params = app.add_subcommand("params", "print derived channel parameters");

    std::string axis = "r_e";
    std::string scheme = "adaptive";
    std::string range;
    std::string range_b;
    int steps = 61;
    double sth = -1;
    double cb = -1;
    double re = 1.0;
    bool mc = false;
    std::uint64_t trials = 0;
    std::uint64_t seed = 1;
    unsigned threads = 0;

    auto* sweep = app.add_subcommand("sweep", "closed-form EST over one axis, CSV");
    sweep->add_option("--axis", axis, "r_e, r_b, r_e×r_b, s_th, n or sigma_s");
    sweep->add_option("--scheme", scheme, "adaptive or fixed");
    sweep->add_option("--range", range, "lo:hi");
    sweep->add_option("--range-b", range_b, "lo:hi of r_b for r_e×r_b");
    sweep->add_option("--steps", steps, "points per axis");
    sweep->add_option("--sth", sth, "secrecy outage threshold");
    sweep->add_option("--cb", cb, "Bob capacity (adaptive) or r_b (fixed r_e sweep)");
    sweep->add_option("--re", re, "r_e for fixed-scheme r_b sweeps");
    sweep->add_flag("--mc", mc, "add Monte Carlo columns");
    sweep->add_option("--trials", trials, "Monte Carlo trials");
    sweep->add_option("--seed", seed, "Monte Carlo seed");
    sweep->add_option("--threads", threads, "worker threads");

    auto* optimize = app.add_subcommand("optimize", "run the rate optimizer, JSON");
    optimize->add_option("--scheme", scheme, "adaptive or fixed");
    optimize->add_option("--sth", sth, "secrecy outage threshold");
    optimize->add_option("--cb", cb, "Bob capacity; omit for the averaged adaptive mode");
    optimize->add_option("--trials", trials, "Monte Carlo trials (averaged mode)");
    optimize->add_option("--seed", seed, "Monte Carlo seed");
    optimize->add_option("--threads", threads, "worker threads");

    auto* validate = app.add_subcommand("validate", "closed form against Monte Carlo, JSON");
    validate->add_option("--trials", trials, "Monte Carlo trials per check");
    validate->add_option("--seed", seed, "Monte Carlo seed");
    validate->add_option("--threads", threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }

    try {
        const Scenario s = config_path.empty() ? Scenario{} : load_config(config_path);
        s.validate();
        if (params->parsed()) {
            detail::emit(cmd_params(s), out_path, out);
            return exit_ok;
        }
        if (sweep->parsed()) {
            SweepOptions o;
            o.axis = parse_axis(axis);
            o.scheme = parse_scheme(scheme);
            if (!range.empty()) {
                o.range = parse_range(range, "--range");
            } else if (o.axis == SweepAxis::s_th) {
                o.range = {0.1, 1.0};
            } else if (o.axis == SweepAxis::n) {
                o.range = {1, 6};
            } else if (o.axis == SweepAxis::sigma_s) {
                o.range = {1, 3};
            } else if (o.axis == SweepAxis::r_e) {
                o.range = {0.0, cb > 0 ? cb : o.c_b};
            }
            if (!range_b.empty()) {
                o.range_b = parse_range(range_b, "--range-b");
            }
            o.steps = steps;
            if (cb > 0) {
                o.c_b = cb;
            }
            o.r_e = re;
            if (sth >= 0) {
                o.s_th = sth;
            }
            o.with_mc = mc;
            if (trials > 0) {
                o.sim.trials = trials;
            }
            o.sim.seed = seed;
            o.sim.threads = threads;
            detail::emit(cmd_sweep(s, o), out_path, out);
            return exit_ok;
        }
        if (optimize->parsed()) {
            OptimizeOptions o;
            o.scheme = parse_scheme(scheme);
            if (sth >= 0) {
                o.s_th = sth;
            }
            if (cb >= 0) {
                o.c_b = cb;
            }
            if (trials > 0) {
                o.sim.trials = trials;
            }
            o.sim.seed = seed;
            o.sim.threads = threads;
            detail::emit(cmd_optimize(s, o), out_path, out);
            return exit_ok;
        }
        const auto rep = cmd_validate(s, trials > 0 ? trials : 1'000'000, seed, threads);
        detail::emit(rep.text, out_path, out);
        return rep.failed > 0 ? exit_validation : exit_ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const Error& e) {
        err << "solver error: " << e.what() << "\n";
        return exit_solver;
    }
}

} // namespace fsoest
