#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fsoest/detail/real.hpp"
#include "fsoest/errors.hpp"
#include "fsoest/specfun.hpp"

namespace fsoest {

inline constexpr double pointing_free_xi = std::numeric_limits<double>::infinity();
inline constexpr double shape_cap = 1e12;

struct GeometryConfig {
    double wavelength_m = 1550e-9;
    double distance_bob_m = 1000.0;
    double distance_eve_m = 1000.0;
    double cn2 = 1.7e-14;
    double beam_waist_wb = 2.5;
    double aperture_radius_rho = 0.1;

    double wave_number() const { return 2.0 * std::numbers::pi / wavelength_m; }
};

struct TurbulenceParams {
    double alpha = 0;
    double beta_single = 0;
    double rytov_var = 0;
};

struct PointingParams {
    double nu = 0;
    double a0 = 0;
    double omega_e = 0;
    double sigma_s = 0;
    double xi = pointing_free_xi;

    bool pointing_free() const { return std::isinf(xi); }
    double xi2() const { return xi * xi; }
};

struct NodeConfig {
    int n_a = 2;
    int n_b = 1;
    int n_e = 2;
    double gamma0 = 3975.3;
};

struct GammaApprox {
    double k_ap = 0;
    double theta_ap = 0;
    double epsilon = 0;
    double omega_adj = 0;
};

enum class Node { bob, eve };

struct SnrThreshold {
    double value = 0;
};

// Vectors of the pointing-error CDF expansion. a, d, e depend on both u and v: [u][v].
struct GgpCdfTerms {
    std::array<double, 2> b{};
    std::array<double, 2> c{-1.0, 1.0};
    std::array<std::array<double, 2>, 2> a{};
    std::array<std::array<double, 2>, 2> d{};
    std::array<std::array<double, 2>, 2> e{};
};

inline TurbulenceParams turbulence_params(const GeometryConfig& geom, double distance_m)
{
    if (!(distance_m > 0)) {
        throw DomainError("turbulence_params: distance must be positive");
    }
    TurbulenceParams t;
    t.rytov_var = 1.23 * geom.cn2 * std::pow(geom.wave_number(), 7.0 / 6.0) * std::pow(distance_m, 11.0 / 6.0);
    if (!(t.rytov_var <= 1e6)) {
        throw DomainError("turbulence_params: Rytov variance above 1e6");
    }
    const double s = t.rytov_var;
    const double s125 = std::pow(s, 6.0 / 5.0);
    const double ea = std::expm1(0.49 * s / std::pow(1.0 + 1.11 * s125, 7.0 / 6.0));
    const double eb = std::expm1(0.51 * s / std::pow(1.0 + 0.69 * s125, 5.0 / 6.0));
    t.alpha = ea > 1.0 / shape_cap ? 1.0 / ea : shape_cap;
    t.beta_single = eb > 1.0 / shape_cap ? 1.0 / eb : shape_cap;
    return t;
}

inline PointingParams pointing_params(const GeometryConfig& geom, double sigma_s)
{
    if (!(sigma_s >= 0)) {
        throw DomainError("pointing_params: sigma_s must be non-negative");
    }
    PointingParams p;
    p.nu = std::sqrt(std::numbers::pi / 2.0) * geom.aperture_radius_rho / geom.beam_waist_wb;
    const double erf_nu = std::erf(p.nu);
    p.a0 = erf_nu * erf_nu;
    const double wb2 = geom.beam_waist_wb * geom.beam_waist_wb;
    p.omega_e = std::sqrt(std::sqrt(std::numbers::pi) * wb2 * erf_nu / (2.0 * p.nu * std::exp(-p.nu * p.nu)));
    p.sigma_s = sigma_s;
    p.xi = sigma_s > 0 ? p.omega_e / (2.0 * sigma_s) : pointing_free_xi;
    return p;
}

inline GammaApprox gamma_approx(const TurbulenceParams& turb, int n_apertures, double epsilon, double omega_adj)
{
    if (n_apertures < 1) {
        throw DomainError("gamma_approx: aperture count must be at least 1");
    }
    if (!(epsilon >= 0) || !(omega_adj > 0)) {
        throw DomainError("gamma_approx: need epsilon >= 0 and omega_adj > 0");
    }
    const double a = turb.alpha;
    const double b = turb.beta_single * n_apertures;
    // (b+1)(a+1)/(ba) - 1 written without cancellation
    const double bracket = 1.0 / a + 1.0 / b + 1.0 / (a * b) - epsilon;
    if (!(bracket > 0)) {
        throw DomainError("gamma_approx: shape bracket is not positive");
    }
    GammaApprox g;
    g.k_ap = 1.0 / bracket;
    g.theta_ap = omega_adj * bracket;
    g.epsilon = epsilon;
    g.omega_adj = omega_adj;
    return g;
}

inline SnrThreshold snr_threshold(const NodeConfig& node, const PointingParams& pointing, double rate, Node which)
{
    if (!(rate >= 0)) {
        throw DomainError("snr_threshold: rate must be non-negative");
    }
    const int n = which == Node::bob ? node.n_b : node.n_e;
    return {std::expm1(rate * std::numbers::ln2) / (node.gamma0 * n * pointing.a0)};
}

inline GgpCdfTerms ggp_cdf_terms(double alpha, double beta_agg, double xi2)
{
    GgpCdfTerms t;
    t.b = {alpha, beta_agg};
    for (int u = 0; u < 2; ++u) {
        const double bu = t.b[u];
        const double shift = (beta_agg - alpha) * t.c[u] + 1.0;
        t.a[u] = {bu, bu - xi2};
        t.d[u] = {bu + 1.0, shift};
        t.e[u] = {shift, bu - xi2 + 1.0};
    }
    return t;
}

namespace detail {

inline constexpr double pole_window = 1e-6;
inline constexpr double pole_nudge = 1e-5;
inline constexpr double series_abs_tol = 1e-13;

inline bool near_integer(double x) { return std::fabs(x - std::nearbyint(x)) < pole_window; }

inline std::atomic<std::uint64_t>& fallback_counter_ref()
{
    static std::atomic<std::uint64_t> n{0};
    return n;
}

// log-density of Gamma(k, 1/k)
inline double log_unit_gamma_pdf(double k, double t)
{
    return k * std::log(k) + (k - 1.0) * std::log(t) - k * t - specfun::ln_gamma(k);
}

template <class F>
double integrate_half_line(F&& f)
{
    double err = 0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12, &err);
}

struct KernelValue {
    double value;
    bool accurate;
};

// Series expansion in quad precision with a cancellation bound.
inline KernelValue gg_cdf_series(double alpha, double beta, double x)
{
    const quad a = alpha;
    const quad b = beta;
    const quad z = quad(alpha) * quad(beta) * quad(x);
    const quad pi = r_pi<quad>();
    const quad csc = pi / r_sin(pi * (a - b));
    const specfun::EvalOptions qopts{1e-32, 10'000};
    const auto s1 = specfun::hyp1f2_reg_series<quad>(b, b + 1, 1 + b - a, z, qopts);
    const auto s2 = specfun::hyp1f2_reg_series<quad>(a, a + 1, 1 + a - b, z, qopts);
    const quad lz = r_log(z);
    const quad p1 = csc * r_exp(b * lz - lgammaq(a));
    const quad p2 = csc * r_exp(a * lz - lgammaq(b));
    const quad v = p1 * s1.value - p2 * s2.value;
    const quad mag = r_abs(p1) * s1.magnitude + r_abs(p2) * s2.magnitude;
    return {static_cast<double>(v), static_cast<double>(mag) * 1e2 * static_cast<double>(r_eps<quad>()) <= series_abs_tol};
}

inline KernelValue ggp_cdf_series(double alpha, double beta, double xi2, double x)
{
    const quad a = alpha;
    const quad b = beta;
    const quad x2 = xi2;
    const quad z = a * b * quad(x);
    const quad lz = r_log(z);
    const quad pi = r_pi<quad>();
    const quad lpre = -lgammaq(a) - lgammaq(b);
    const quad csc_ab = 1 / r_sin(pi * (a - b));
    const specfun::EvalOptions qopts{1e-32, 10'000};

    CompensatedSum<quad> acc;
    quad mag = 0;
    const std::array<quad, 2> cv{quad(-1), quad(1)};
    for (int u = 0; u < 2; ++u) {
        const quad bu = u == 0 ? a : b;
        const quad shift = (b - a) * cv[u] + 1;
        const std::array<quad, 2> av{bu, bu - x2};
        const std::array<quad, 2> dv{bu + 1, shift};
        const std::array<quad, 2> ev{shift, bu - x2 + 1};
        for (int v = 0; v < 2; ++v) {
            const auto s = specfun::hyp1f2_reg_series<quad>(av[v], dv[v], ev[v], z, qopts);
            int sign = 1;
            const quad lg = r_lgamma(av[v], &sign);
            const quad pre = -pi * csc_ab * cv[u] * cv[v] * quad(sign) * r_exp(bu * lz + lg + lpre);
            acc.add(pre * s.value);
            mag += r_abs(pre) * s.magnitude;
        }
    }
    // xi^2 power term: Gamma(a - xi2) Gamma(b - xi2) z^{xi2} / (Gamma(a) Gamma(b))
    int sa = 1;
    int sb = 1;
    const quad la = r_lgamma(a - x2, &sa);
    const quad lb = r_lgamma(b - x2, &sb);
    const quad last = quad(sa * sb) * r_exp(la + lb + x2 * lz + lpre);
    acc.add(last);
    mag += r_abs(last);
    return {static_cast<double>(acc.value()),
            static_cast<double>(mag) * 1e2 * static_cast<double>(r_eps<quad>()) <= series_abs_tol};
}

// F(x) = E_Y[P(alpha, alpha x / Y)], Y ~ Gamma(beta, 1/beta)
inline double gg_cdf_quadrature(double alpha, double beta, double x)
{
    fallback_counter_ref().fetch_add(1, std::memory_order_relaxed);
    auto f = [&](double t) {
        if (t <= 0) {
            return 0.0;
        }
        const double w = std::exp(log_unit_gamma_pdf(beta, t));
        return w == 0 ? 0.0 : w * specfun::detail::reg_p(alpha, alpha * x / t, {});
    };
    return integrate_half_line(f);
}

// F(x) = E_X[H(x / X)], H the CDF of I_p Y with Y ~ Gamma(beta, 1/beta)
inline double ggp_cdf_quadrature(double alpha, double beta, double xi2, double x)
{
    fallback_counter_ref().fetch_add(1, std::memory_order_relaxed);
    const double lgb = specfun::ln_gamma(beta);
    auto h = [&](double v) {
        const double bv = beta * v;
        const double up = specfun::detail::gamma_upper_any(beta - xi2, bv, {});
        const double tail = up > 0 ? std::exp(xi2 * std::log(bv) + std::log(up) - lgb) : 0.0;
        return specfun::detail::reg_p(beta, bv, {}) + tail;
    };
    auto f = [&](double t) {
        if (t <= 0) {
            return 0.0;
        }
        const double w = std::exp(log_unit_gamma_pdf(alpha, t));
        return w == 0 ? 0.0 : w * h(x / t);
    };
    return integrate_half_line(f);
}

} // namespace detail

// Number of kernel evaluations that fell back to quadrature.
inline std::uint64_t quadrature_fallbacks() { return detail::fallback_counter_ref().load(); }

inline double gg_cdf(double alpha, double beta_agg, double x)
{
    if (!(alpha > 0) || !(beta_agg > 0)) {
        throw DomainError("gg_cdf: shape parameters must be positive");
    }
    if (!(x >= 0)) {
        throw DomainError("gg_cdf: x must be non-negative");
    }
    if (x == 0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    if (detail::near_integer(alpha - beta_agg)) {
        beta_agg += detail::pole_nudge;
    }
    try {
        const auto s = detail::gg_cdf_series(alpha, beta_agg, x);
        if (s.accurate && std::isfinite(s.value)) {
            return s.value;
        }
    } catch (const ConvergenceError&) {
    }
    return detail::gg_cdf_quadrature(alpha, beta_agg, x);
}

inline double ggp_cdf(double alpha, double beta_agg, double xi, double x)
{
    if (!(xi > 0)) {
        throw DomainError("ggp_cdf: xi must be positive");
    }
    if (std::isinf(xi)) {
        return gg_cdf(alpha, beta_agg, x);
    }
    if (!(alpha > 0) || !(beta_agg > 0)) {
        throw DomainError("ggp_cdf: shape parameters must be positive");
    }
    if (!(x >= 0)) {
        throw DomainError("ggp_cdf: x must be non-negative");
    }
    if (x == 0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    double xi2 = xi * xi;
    if (detail::near_integer(alpha - beta_agg)) {
        beta_agg += detail::pole_nudge;
    }
    for (int i = 0; i < 4 && (detail::near_integer(alpha - xi2) || detail::near_integer(beta_agg - xi2)); ++i) {
        xi2 += detail::pole_nudge;
    }
    if (detail::near_integer(alpha - xi2) || detail::near_integer(beta_agg - xi2)
        || detail::near_integer(alpha - beta_agg)) {
        throw DomainError("ggp_cdf: parameters stay at a csc pole after nudging");
    }
    try {
        const auto s = detail::ggp_cdf_series(alpha, beta_agg, xi2, x);
        if (s.accurate && std::isfinite(s.value)) {
            return s.value;
        }
    } catch (const ConvergenceError&) {
    }
    return detail::ggp_cdf_quadrature(alpha, beta_agg, xi2, x);
}

// Gamma-surrogate CDF of I_p G with G ~ Gamma(k_ap, theta_ap).
inline double ggp_cdf_approx(const GammaApprox& ga, double xi, double x)
{
    if (!(x >= 0)) {
        throw DomainError("ggp_cdf_approx: x must be non-negative");
    }
    if (!(xi > 0)) {
        throw DomainError("ggp_cdf_approx: xi must be positive");
    }
    if (x == 0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    const double k = ga.k_ap;
    const double y = x / ga.theta_ap;
    const double p = specfun::reg_gamma_p(k, y);
    if (std::isinf(xi)) {
        return p;
    }
    const double theta = xi * xi - k + 1.0;
    const double ev = specfun::exp_integral(theta, y);
    const double tail = ev > 0 ? std::exp(k * std::log(y) + std::log(ev) - specfun::ln_gamma(k)) : 0.0;
    return p + tail;
}

inline double gg_pdf(double alpha, double beta_agg, double i)
{
    if (!(i > 0)) {
        throw DomainError("gg_pdf: irradiance must be positive");
    }
    const double ab = alpha * beta_agg;
    const double k = specfun::bessel_k(alpha - beta_agg, 2.0 * std::sqrt(ab * i));
    if (k == 0) {
        return 0.0;
    }
    const double lg = std::log(2.0) + 0.5 * (alpha + beta_agg) * std::log(ab) + (0.5 * (alpha + beta_agg) - 1.0) * std::log(i)
                      - specfun::ln_gamma(alpha) - specfun::ln_gamma(beta_agg) + std::log(k);
    return std::exp(lg);
}

} // namespace fsoest
