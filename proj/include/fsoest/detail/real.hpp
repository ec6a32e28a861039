#pragma once

#include <cmath>
#include <concepts>

#include <quadmath.h>

namespace fsoest::detail {

using quad = __float128;

// Thin overload set so the series kernels can be written once for double and quad.
inline double r_abs(double x) { return std::fabs(x); }
inline double r_exp(double x) { return std::exp(x); }
inline double r_log(double x) { return std::log(x); }
inline double r_pow(double x, double y) { return std::pow(x, y); }
inline double r_sin(double x) { return std::sin(x); }
inline double r_lgamma(double x, int* sign) { return ::lgamma_r(x, sign); }

inline quad r_abs(quad x) { return fabsq(x); }
inline quad r_exp(quad x) { return expq(x); }
inline quad r_log(quad x) { return logq(x); }
inline quad r_pow(quad x, quad y) { return powq(x, y); }
inline quad r_sin(quad x) { return sinq(x); }
inline quad r_lgamma(quad x, int* sign)
{
    // lgammaq does not expose the sign; recover it from the reflection side
    if (x > 0) {
        *sign = 1;
    } else {
        quad fl = floorq(x);
        *sign = (static_cast<long long>(fl) % 2 == 0) ? 1 : -1;
    }
    return lgammaq(x);
}

template <class Real>
Real r_pi()
{
    if constexpr (std::same_as<Real, quad>) {
        return 4 * atanq(quad(1));
    } else {
        return 3.14159265358979323846;
    }
}

template <class Real>
constexpr Real r_eps()
{
    if constexpr (std::same_as<Real, quad>) {
        return quad(0x1p-112);
    } else {
        return 2.220446049250313e-16;
    }
}

template <class Real>
bool is_nonpositive_integer(Real x)
{
    if (x > 0) {
        return false;
    }
    if constexpr (std::same_as<Real, quad>) {
        return floorq(x) == x;
    } else {
        return std::floor(x) == x;
    }
}

// Gamma(x) as (sign, log|Gamma|); x must not be a pole.
template <class Real>
Real signed_lgamma(Real x, int& sign)
{
    return r_lgamma(x, &sign);
}

// 1/Gamma(x), exactly zero at the poles.
template <class Real>
Real rgamma(Real x)
{
    if (is_nonpositive_integer(x)) {
        return Real(0);
    }
    int sign = 1;
    Real lg = r_lgamma(x, &sign);
    return Real(sign) * r_exp(-lg);
}

template <class Real>
Real gamma_fn(Real x)
{
    int sign = 1;
    Real lg = r_lgamma(x, &sign);
    return Real(sign) * r_exp(lg);
}

// Neumaier compensated accumulator.
template <class Real>
struct CompensatedSum {
    Real sum = 0;
    Real comp = 0;

    void add(Real v)
    {
        Real t = sum + v;
        if (r_abs(sum) >= r_abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    Real value() const { return sum + comp; }
};

} // namespace fsoest::detail
