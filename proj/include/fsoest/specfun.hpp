#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "fsoest/detail/real.hpp"
#include "fsoest/errors.hpp"

namespace fsoest::specfun {

struct EvalOptions {
    double rel_tol = 1e-12;
    std::size_t max_terms = 10'000;

    void validate() const
    {
        if (!(rel_tol > 0)) {
            throw DomainError("EvalOptions.rel_tol must be positive");
        }
        if (max_terms < 1) {
            throw DomainError("EvalOptions.max_terms must be at least 1");
        }
    }
};

inline constexpr double euler_gamma = 0.57721566490153286061;

inline double ln_gamma(double x)
{
    if (!(x > 0)) {
        throw DomainError("ln_gamma: x must be positive, got " + std::to_string(x));
    }
    int sign = 1;
    return ::lgamma_r(x, &sign);
}

inline double erf(double x) { return std::erf(x); }

namespace detail {

// P(a, x) by the power series; converges for all x, fast for x < a + 1.
inline double gamma_p_series(double a, double x, const EvalOptions& opts)
{
    double term = 1.0 / a;
    double sum = term;
    for (std::size_t n = 1; n <= opts.max_terms; ++n) {
        term *= x / (a + static_cast<double>(n));
        sum += term;
        if (std::fabs(term) <= std::fabs(sum) * 1e-17) {
            return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
        }
    }
    throw ConvergenceError("gamma_p_series: term cap reached");
}

// Legendre continued fraction, returns h with Gamma(a, x) = e^{-x} x^a h. Valid for any real a, x > 0.
inline double gamma_upper_cf(double a, double x, const EvalOptions& opts)
{
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (std::size_t i = 1; i <= opts.max_terms; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::fabs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= 1e-16) {
            return h;
        }
    }
    throw ConvergenceError("gamma_upper_cf: term cap reached");
}

// E_1(x) by its power series, x < 1.
inline double e1_series(double x, const EvalOptions& opts)
{
    double sum = 0.0;
    double term = 1.0;
    for (std::size_t n = 1; n <= opts.max_terms; ++n) {
        term *= -x / static_cast<double>(n);
        double add = term / static_cast<double>(n);
        sum += add;
        if (std::fabs(add) <= 1e-17 * std::fabs(sum)) {
            return -euler_gamma - std::log(x) - sum;
        }
    }
    throw ConvergenceError("e1_series: term cap reached");
}

// Q(a, x) for a > 0, x >= 0 without argument checks.
inline double reg_q(double a, double x, const EvalOptions& opts)
{
    if (x == 0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x < a + 1.0) {
        return 1.0 - gamma_p_series(a, x, opts);
    }
    return std::exp(-x + a * std::log(x) - ln_gamma(a)) * gamma_upper_cf(a, x, opts);
}

inline double reg_p(double a, double x, const EvalOptions& opts)
{
    if (x == 0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return gamma_p_series(a, x, opts);
    }
    return 1.0 - reg_q(a, x, opts);
}

// Gamma(a, x) for any real a and x > 0.
inline double gamma_upper_any(double a, double x, const EvalOptions& opts)
{
    if (a > 0) {
        if (x < a + 1.0) {
            return std::exp(ln_gamma(a)) * (1.0 - gamma_p_series(a, x, opts));
        }
        return std::exp(-x + a * std::log(x)) * gamma_upper_cf(a, x, opts);
    }
    if (x >= 1.0) {
        return std::exp(-x + a * std::log(x)) * gamma_upper_cf(a, x, opts);
    }
    // downward recurrence Gamma(s, x) = (Gamma(s+1, x) - x^s e^{-x}) / s
    const double ex = std::exp(-x);
    double s;
    double g;
    if (std::floor(a) == a) {
        s = 0.0;
        g = e1_series(x, opts);
    } else {
        s = a + std::ceil(-a);
        g = std::exp(ln_gamma(s)) * (1.0 - gamma_p_series(s, x, opts));
    }
    while (s > a + 0.5) {
        s -= 1.0;
        g = (g - std::pow(x, s) * ex) / s;
    }
    return g;
}

} // namespace detail

inline double gamma_upper(double a, double x, const EvalOptions& opts = {})
{
    if (!(a > 0)) {
        throw DomainError("gamma_upper: a must be positive");
    }
    if (!(x >= 0)) {
        throw DomainError("gamma_upper: x must be non-negative");
    }
    if (x == 0) {
        return std::exp(ln_gamma(a));
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    return detail::gamma_upper_any(a, x, opts);
}

// Lower regularized P(a, x).
inline double reg_gamma_p(double a, double x, const EvalOptions& opts = {})
{
    if (!(a > 0)) {
        throw DomainError("reg_gamma_p: a must be positive");
    }
    if (!(x >= 0)) {
        throw DomainError("reg_gamma_p: x must be non-negative");
    }
    return detail::reg_p(a, x, opts);
}

// Generalized regularized Q(a, x0, x1) = (Gamma(a, x0) - Gamma(a, x1)) / Gamma(a).
inline double reg_gamma_q(double a, double x0, double x1 = std::numeric_limits<double>::infinity(),
                          const EvalOptions& opts = {})
{
    if (!(a > 0)) {
        throw DomainError("reg_gamma_q: a must be positive");
    }
    if (!(x0 >= 0) || !(x1 >= x0)) {
        throw DomainError("reg_gamma_q: need 0 <= x0 <= x1");
    }
    if (x0 == 0) {
        return detail::reg_p(a, x1, opts);
    }
    // difference taken on the side with less cancellation
    double v;
    if (x0 >= a) {
        v = detail::reg_q(a, x0, opts) - detail::reg_q(a, x1, opts);
    } else {
        v = detail::reg_p(a, x1, opts) - detail::reg_p(a, x0, opts);
    }
    return v < 0 ? 0.0 : (v > 1 ? 1.0 : v);
}

// E_nu(x) = x^{nu-1} Gamma(1-nu, x).
inline double exp_integral(double nu, double x, const EvalOptions& opts = {})
{
    if (!(x > 0)) {
        throw DomainError("exp_integral: x must be positive");
    }
    if (nu == 0) {
        return std::exp(-x) / x;
    }
    return std::pow(x, nu - 1.0) * detail::gamma_upper_any(1.0 - nu, x, opts);
}

template <class Real>
struct SeriesResult {
    Real value = 0;
    Real magnitude = 0;
    std::size_t terms = 0;
    bool large_argument = false;
};

// Regularized 1F2 series in working precision Real. magnitude is the sum of |terms|.
template <class Real>
SeriesResult<Real> hyp1f2_reg_series(Real a, Real b, Real c, Real z, const EvalOptions& opts = {})
{
    using fsoest::detail::is_nonpositive_integer;
    using fsoest::detail::r_abs;
    using fsoest::detail::rgamma;
    opts.validate();

    SeriesResult<Real> out;
    out.large_argument = r_abs(z) > Real(100);

    // first term surviving the 1/Gamma poles of b and c
    std::size_t n0 = 0;
    if (is_nonpositive_integer(b)) {
        n0 = std::max(n0, static_cast<std::size_t>(1 - static_cast<long long>(b)));
    }
    if (is_nonpositive_integer(c)) {
        n0 = std::max(n0, static_cast<std::size_t>(1 - static_cast<long long>(c)));
    }
    Real t = rgamma(b + Real(n0)) * rgamma(c + Real(n0));
    for (std::size_t j = 0; j < n0; ++j) {
        t *= (a + Real(j)) * z / Real(j + 1);
    }

    const Real tol = Real(opts.rel_tol);
    fsoest::detail::CompensatedSum<Real> acc;
    for (std::size_t n = n0; n < n0 + opts.max_terms; ++n) {
        acc.add(t);
        out.magnitude += r_abs(t);
        ++out.terms;
        const Real nn = Real(n);
        const Real ratio = (a + nn) * z / ((nn + 1) * (b + nn) * (c + nn));
        t *= ratio;
        if (t == Real(0) || (r_abs(ratio) < Real(0.5) && r_abs(t) <= tol * r_abs(acc.value()))) {
            acc.add(t);
            out.magnitude += r_abs(t);
            out.value = acc.value();
            return out;
        }
    }
    throw ConvergenceError("hyp1f2_reg: max_terms reached before tolerance");
}

inline double hyp1f2_reg(double a, double b, double c, double z, const EvalOptions& opts = {})
{
    if (!std::isfinite(z)) {
        throw DomainError("hyp1f2_reg: z must be finite");
    }
    return hyp1f2_reg_series<double>(a, b, c, z, opts).value;
}

inline double hyp1f2(double a, double b, double c, double z, const EvalOptions& opts = {})
{
    if (fsoest::detail::is_nonpositive_integer(b) || fsoest::detail::is_nonpositive_integer(c)) {
        throw DomainError("hyp1f2: b and c must not be non-positive integers");
    }
    return hyp1f2_reg(a, b, c, z, opts) * fsoest::detail::gamma_fn(b) * fsoest::detail::gamma_fn(c);
}

enum class LambertBranch { principal, lower };

inline double lambert_w(LambertBranch branch, double x)
{
    constexpr double e = 2.71828182845904523536;
    constexpr double branch_point = -1.0 / e;
    if (!std::isfinite(x) || x < branch_point - 1e-15) {
        throw DomainError("lambert_w: argument below -1/e");
    }
    if (branch == LambertBranch::lower && !(x < 0)) {
        throw DomainError("lambert_w: lower branch needs -1/e <= x < 0");
    }
    if (x <= branch_point) {
        return -1.0;
    }
    if (branch == LambertBranch::principal && x == 0) {
        return 0.0;
    }

    const double p = std::sqrt(2.0 * (e * x + 1.0));
    double w;
    if (branch == LambertBranch::principal) {
        if (x < -0.25) {
            w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
        } else if (x < 3.0) {
            const double l = std::log1p(x);
            w = l * (1.0 - std::log1p(l) / (2.0 + l));
        } else {
            const double l1 = std::log(x);
            const double l2 = std::log(l1);
            w = l1 - l2 + l2 / l1;
        }
    } else {
        if (x < -0.25) {
            w = -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p;
        } else {
            const double l1 = std::log(-x);
            const double l2 = std::log(-l1);
            w = l1 - l2 + l2 / l1;
        }
    }

    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        if (std::fabs(wp1) < 1e-12) {
            break;
        }
        const double dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= dw;
        if (std::fabs(dw) <= 1e-16 * (1.0 + std::fabs(w))) {
            break;
        }
    }
    return branch == LambertBranch::principal ? std::max(w, -1.0) : std::min(w, -1.0);
}

inline double bessel_k(double nu, double x)
{
    if (!(x > 0)) {
        throw DomainError("bessel_k: x must be positive");
    }
    return std::cyl_bessel_k(std::fabs(nu), x);
}

} // namespace fsoest::specfun
