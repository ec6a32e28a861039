#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsoest/detail/solve.hpp"
#include "fsoest/errors.hpp"
#include "fsoest/scenario.hpp"
#include "fsoest/secrecy.hpp"
#include "fsoest/specfun.hpp"

namespace fsoest {

struct SolverOptions {
    double rate_tol = 1e-9;
    int max_iter = 200;
    double damping = 0.5;
    int grid_points = 400;
    // evaluate the exact-CDF EST at the returned rates
    bool report_exact = true;

    void validate() const
    {
        if (!(rate_tol > 0)) {
            throw DomainError("SolverOptions.rate_tol must be positive");
        }
        if (max_iter < 1) {
            throw DomainError("SolverOptions.max_iter must be at least 1");
        }
        if (!(damping > 0 && damping <= 1)) {
            throw DomainError("SolverOptions.damping must lie in (0, 1]");
        }
        if (grid_points < 2) {
            throw DomainError("SolverOptions.grid_points must be at least 2");
        }
    }
};

enum class Method { fixed_point, lambert_w, threshold, grid_oracle, bisection, direct_search };

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::fixed_point:
        return "fixed_point";
    case Method::lambert_w:
        return "lambert_w";
    case Method::threshold:
        return "threshold";
    case Method::grid_oracle:
        return "grid_oracle";
    case Method::bisection:
        return "bisection";
    case Method::direct_search:
        return "direct_search";
    }
    return "unknown";
}

struct RateSolution {
    double rate = 0;
    Method method = Method::fixed_point;
    int iterations = 0;
};

struct Optimum {
    RatePair rates;
    // surrogate-model EST at rates, gated by s_th
    double est = 0;
    Method method = Method::fixed_point;
    bool hessian_ok = false;
    bool constraint_active = false;
    // false when no admissible rate exists (threshold rate at or above c_b)
    bool feasible = true;
    double sop = 1;
    // exact-CDF values at rates, not re-gated
    double psi_exact = 0;
    double sop_exact = 1;
    int iterations = 0;
    std::string diagnostics;
};

struct RateBounds {
    double re_lo = 0;
    double re_hi = 0;
    double rb_lo = 0;
    double rb_hi = 0;
};

namespace detail {

inline constexpr double ln2 = std::numbers::ln2;

// log of a positive probability given P and Q = 1 - P
inline double log_prob(double p, double q) { return p < 0.5 ? std::log(p) : std::log1p(-q); }

inline double adaptive_psi(const LinkModel& m, double c_b, double r_e)
{
    return (c_b - r_e) * eve_cdf(m, r_e, CdfModel::gamma_approx);
}

inline double fixed_psi(const LinkModel& m, double r_e, double r_b)
{
    return (r_b - r_e) * (1.0 - reliability_outage(m, r_b, CdfModel::gamma_approx))
           * eve_cdf(m, r_e, CdfModel::gamma_approx);
}

// Right-hand side of the adaptive stationarity fixed-point equation.
inline double adaptive_rhs(const LinkModel& m, double c_b, double r)
{
    const GammaApprox& ga = m.approx_eve;
    const double k = ga.k_ap;
    const double t = std::exp2(r);
    const double y = m.threshold(r, Node::eve) / ga.theta_ap;
    if (!(y > 0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double p = specfun::reg_gamma_p(k, y);
    const double lg = specfun::ln_gamma(k);
    if (m.pointing_free()) {
        return c_b - (t - 1.0) / (ln2 * t) * std::exp(std::log(p) + lg + y - k * std::log(y));
    }
    const double s2 = m.pointing.sigma_s * m.pointing.sigma_s;
    const double w2 = m.pointing.omega_e * m.pointing.omega_e;
    const double theta = m.pointing.xi2() - k + 1.0;
    const double le = std::log(specfun::exp_integral(theta - 1.0, y));
    const auto& n = m.nodes();
    const double scale = m.pointing.a0 * n.n_e * ga.theta_ap * n.gamma0 / (ln2 * w2 * t);

    const double t0 = c_b - c_b * t + t * r;
    const double t1 = 4.0 * s2 * (t - 1.0) * (t - 1.0) / (ln2 * w2 * t);
    const double brace = t * (ln2 * w2 * (c_b - r) - 4.0 * s2) + 4.0 * s2;
    const double in1 = brace * std::exp(-y - le);
    const double in2 = (w2 - 4.0 * k * s2) * (t - 1.0) * std::exp(-k * std::log(y) + lg + std::log(p) - le);
    return t0 + t1 + scale * (in1 - in2);
}

// r_e from the r_e-stationarity of the fixed-rate EST, given r_b.
inline double stationary_re(const LinkModel& m, double r_b)
{
    const GammaApprox& gb = m.approx_bob;
    const double k = gb.k_ap;
    const int na = m.nodes().n_a;
    const double y = m.threshold(r_b, Node::bob) / gb.theta_ap;
    const double p = specfun::reg_gamma_p(k, y);
    const double lc1 = log_prob(p, 1.0 - p);
    // C1 - C1^{1-N_A} = -C1^{1-N_A} (1 - C1^{N_A})
    const double lmag = (1.0 - na) * lc1 + std::log(-std::expm1(na * lc1));
    const double bracket = -std::exp(y + specfun::ln_gamma(k) - k * std::log(y) + lmag);
    return r_b + (1.0 - std::exp2(-r_b)) * bracket / (ln2 * na);
}

// r_b from the r_b-stationarity of the fixed-rate EST, given r_e.
inline double stationary_rb(const LinkModel& m, double r_e)
{
    const GammaApprox& ge = m.approx_eve;
    const double k = ge.k_ap;
    const double t = std::exp2(r_e);
    const double y = m.threshold(r_e, Node::eve) / ge.theta_ap;
    const double p = specfun::reg_gamma_p(k, y);
    const double lg = specfun::ln_gamma(k);
    if (m.pointing_free()) {
        return r_e + (t - 1.0) / (ln2 * t) * std::exp(lg + std::log(p) + y - k * std::log(y));
    }
    const double xi2 = m.pointing.xi2();
    const double ratio = std::exp(lg + std::log(p) - k * std::log(y) - std::log(specfun::exp_integral(xi2 - k + 1.0, y)));
    return r_e + (t - 1.0) / (ln2 * t * xi2) * (1.0 + ratio);
}

// Lambert-W update of r_b for a fixed r_e; NaN when the branch is not admissible.
inline double lambert_rb(const LinkModel& m, double r_e, double r_b, specfun::LambertBranch branch,
                          std::string* diag = nullptr)
{
    const GammaApprox& gb = m.approx_bob;
    const double k = gb.k_ap;
    const auto& n = m.nodes();
    const double q = 1.0 / (n.gamma0 * m.pointing.a0 * n.n_b * gb.theta_ap);
    const double y = m.threshold(r_b, Node::bob) / gb.theta_ap;
    if (!(r_b > r_e) || !(y > 0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double p = specfun::reg_gamma_p(k, y);
    const double lc1 = log_prob(p, 1.0 - p);
    const double lmag = (1.0 - n.n_a) * lc1 + std::log(-std::expm1(n.n_a * lc1));
    const double arg = -std::exp(lmag + specfun::ln_gamma(k) + (1.0 - k) * std::log(y) - q
                                 - std::log((r_b - r_e) * ln2 * n.n_a));
    if (!(arg >= -1.0 / std::numbers::e) || !(arg < 0)) {
        if (diag) {
            *diag = "W argument " + std::to_string(arg) + " outside [-1/e, 0) at r_b=" + std::to_string(r_b);
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double u = -specfun::lambert_w(branch, arg);
    if (!(u > q)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::log2(u / q);
}

// Largest useful codeword rate: reliability factor below 1e-12 beyond it.
inline double rate_ceiling(const LinkModel& m)
{
    double r = 0.5;
    while (r < 60.0 && 1.0 - reliability_outage(m, r, CdfModel::gamma_approx) > 1e-12) {
        r += 0.25;
    }
    return r;
}

inline void fill_exact(const LinkModel& m, Optimum& o, const SolverOptions& opts)
{
    if (!opts.report_exact) {
        return;
    }
    o.sop_exact = sop(m, o.rates.r_e);
    const double rel = 1.0 - reliability_outage(m, o.rates.r_b);
    o.psi_exact = o.rates.secrecy_rate() * rel * (1.0 - o.sop_exact);
}

inline bool hessian_negative_definite(const LinkModel& m, double r_e, double r_b)
{
    const double h = std::min(1e-4, 0.25 * std::min(r_e, r_b - r_e));
    auto f = [&](double a, double b) { return fixed_psi(m, a, b); };
    const double f0 = f(r_e, r_b);
    const double a = (f(r_e + h, r_b) - 2 * f0 + f(r_e - h, r_b)) / (h * h);
    const double c = (f(r_e, r_b + h) - 2 * f0 + f(r_e, r_b - h)) / (h * h);
    const double b = (f(r_e + h, r_b + h) - f(r_e + h, r_b - h) - f(r_e - h, r_b + h) + f(r_e - h, r_b - h)) / (4 * h * h);
    return a < 0 && a * c - b * b > 0;
}

} // namespace detail

// Redundancy rate at which the surrogate SOP equals s_th (0 when s_th = 1).
inline RateSolution re_threshold(const LinkModel& m, double s_th, const SolverOptions& opts = {})
{
    opts.validate();
    if (!(s_th > 0 && s_th <= 1)) {
        throw DomainError("re_threshold: s_th must lie in (0, 1]");
    }
    if (s_th >= 1) {
        return {0.0, Method::threshold, 0};
    }
    const GammaApprox& ga = m.approx_eve;
    const double k = ga.k_ap;
    const double ytol = 1e-14;

    // pointing-free seed: Q(k, y0) = s_th
    double hi = std::max(1.0, k);
    while (specfun::reg_gamma_q(k, hi) > s_th) {
        hi *= 2.0;
        if (hi > 1e7) {
            throw SolverError("re_threshold: no rate reaches the requested SOP");
        }
    }
    const double y0 = detail::bisect([&](double y) { return specfun::reg_gamma_q(k, y) - s_th; }, 0.0, hi, ytol * hi);

    RateSolution out{0.0, Method::threshold, 0};
    double y = y0;
    if (!m.pointing_free()) {
        const double theta = m.pointing.xi2() - k + 1.0;
        const double lg = specfun::ln_gamma(k);
        auto h = [&](double v) {
            const double d = specfun::reg_gamma_q(k, v) - s_th;
            if (!(d > 0)) {
                return 0.0;
            }
            return std::exp((lg + std::log(d) - std::log(specfun::exp_integral(theta, v))) / k);
        };
        const auto fp = detail::relaxed_fixed_point(h, y0, y0 * 1e-12, y0, opts.damping, ytol * y0, opts.max_iter);
        out.iterations = fp.iterations;
        auto resid = [&](double v) { return ggp_cdf_approx(ga, m.xi(), v * ga.theta_ap) - (1.0 - s_th); };
        if (fp.converged && std::fabs(resid(fp.x)) < 1e-10) {
            y = fp.x;
        } else {
            y = detail::bisect(resid, y0 * 1e-12, y0, ytol * y0);
            out.method = Method::bisection;
        }
    }
    const auto& n = m.nodes();
    double rate = std::log2(1.0 + n.gamma0 * m.pointing.a0 * n.n_e * ga.theta_ap * y);
    // land on the admissible side of the constraint
    double step = std::max(1e-15, 1e-14 * rate);
    for (int i = 0; i < 60 && sop_approx(m, rate) > s_th; ++i) {
        rate += step;
        step *= 2.0;
    }
    if (sop_approx(m, rate) > s_th) {
        throw SolverError("re_threshold: could not satisfy the SOP constraint");
    }
    out.rate = rate;
    return out;
}

inline RateSolution re_threshold(const Scenario& s, double s_th, const SolverOptions& opts = {})
{
    return re_threshold(LinkModel(s), s_th, opts);
}

// Unconstrained optimal redundancy rate of the adaptive scheme for capacity c_b.
inline RateSolution adaptive_unconstrained_re(const LinkModel& m, double c_b, const SolverOptions& opts = {},
                                              std::optional<double> warm_start = std::nullopt)
{
    opts.validate();
    if (!(c_b > 0) || !std::isfinite(c_b)) {
        throw DomainError("adaptive_unconstrained_re: c_b must be positive");
    }
    const double lo = c_b * 1e-9;
    const double hi = c_b * (1.0 - 1e-9);
    const double x0 = warm_start && *warm_start > lo && *warm_start < hi ? *warm_start : 0.5 * c_b;
    auto g = [&](double r) { return detail::adaptive_rhs(m, c_b, r); };
    const auto fp = detail::relaxed_fixed_point(g, x0, lo, hi, opts.damping, opts.rate_tol, opts.max_iter);
    if (fp.converged && fp.x > lo && fp.x < hi) {
        return {fp.x, Method::fixed_point, fp.iterations};
    }
    const double h = std::min(1e-5, 0.25 * lo + 1e-12);
    auto dpsi = [&](double r) {
        return (detail::adaptive_psi(m, c_b, r + h) - detail::adaptive_psi(m, c_b, r - h)) / (2 * h);
    };
    const double a = std::max(lo, h);
    const double b = std::min(hi, c_b - h);
    if (!(dpsi(a) > 0)) {
        return {a, Method::bisection, fp.iterations};
    }
    if (!(dpsi(b) < 0)) {
        return {b, Method::bisection, fp.iterations};
    }
    const double r = detail::bisect(dpsi, a, b, opts.rate_tol);
    if (!std::isfinite(r)) {
        throw SolverError("adaptive_unconstrained_re: fixed point and bisection both failed");
    }
    return {r, Method::bisection, fp.iterations};
}

inline RateSolution adaptive_unconstrained_re(const Scenario& s, double c_b, const SolverOptions& opts = {})
{
    return adaptive_unconstrained_re(LinkModel(s), c_b, opts);
}

// Adaptive-scheme optimizer with the threshold rate cached, for repeated capacities.
class AdaptiveSolver {
public:
    AdaptiveSolver(const LinkModel& m, double s_th, const SolverOptions& opts = {})
        : model_(m), s_th_(s_th), opts_(opts), threshold_(re_threshold(m, s_th, opts))
    {
    }

    double threshold() const { return threshold_.rate; }

    Optimum solve(double c_b, std::optional<double> warm_start = std::nullopt) const
    {
        if (!(c_b > 0) || !std::isfinite(c_b)) {
            throw DomainError("adaptive_optimal: c_b must be positive");
        }
        Optimum o;
        o.rates.r_b = c_b;
        const SecrecyConstraint con{s_th_};
        if (threshold_.rate >= c_b) {
            o.rates.r_e = c_b;
            o.feasible = false;
            o.constraint_active = true;
            o.method = Method::threshold;
            o.diagnostics = "threshold rate " + std::to_string(threshold_.rate) + " is not below c_b";
        } else {
            const auto u = adaptive_unconstrained_re(model_, c_b, opts_, warm_start);
            o.iterations = u.iterations + threshold_.iterations;
            if (threshold_.rate > u.rate) {
                o.rates.r_e = threshold_.rate;
                o.constraint_active = true;
                o.method = Method::threshold;
            } else {
                o.rates.r_e = u.rate;
                o.method = u.method;
            }
        }
        const auto rep = est_adaptive(model_, c_b, o.rates.r_e, con, CdfModel::gamma_approx);
        o.est = rep.est;
        o.sop = rep.sop;
        o.hessian_ok = true;
        if (opts_.report_exact) {
            o.sop_exact = sop(model_, o.rates.r_e);
            o.psi_exact = (c_b - o.rates.r_e) * (1.0 - o.sop_exact);
        }
        return o;
    }

private:
    LinkModel model_;
    double s_th_;
    SolverOptions opts_;
    RateSolution threshold_;
};

inline Optimum adaptive_optimal(const LinkModel& m, double c_b, double s_th, const SolverOptions& opts = {})
{
    return AdaptiveSolver(m, s_th, opts).solve(c_b);
}

inline Optimum adaptive_optimal(const Scenario& s, double c_b, double s_th, const SolverOptions& opts = {})
{
    return adaptive_optimal(LinkModel(s), c_b, s_th, opts);
}

// Joint unconstrained stationary point of the fixed-rate EST.
inline Optimum fixed_unconstrained_pair(const LinkModel& m, const SolverOptions& opts = {})
{
    opts.validate();
    const double tiny = 1e-9;
    auto re_of = [&](double rb) {
        const double re = detail::stationary_re(m, rb);
        return std::isnan(re) ? re : std::min(std::max(re, tiny * rb), rb);
    };
    // one alternating sweep: r_e from r_b, then r_b from r_e
    auto sweep = [&](double rb) { return detail::stationary_rb(m, re_of(rb)); };
    auto resid = [&](double rb) { return sweep(rb) - rb; };

    // bracket the stationary points on a coarse scan, keep the best one
    const double top = detail::rate_ceiling(m);
    // log-spaced below 0.02 bpcu for weak links, linear above
    std::vector<double> scan;
    for (int i = 0; i < 40; ++i) {
        scan.push_back(1e-6 * std::pow(2e4, i / 40.0));
    }
    for (int i = 0; i <= 240; ++i) {
        scan.push_back(0.02 + (top - 0.02) * i / 240);
    }
    double best_lo = 0;
    double best_hi = 0;
    double best_psi = -1;
    double prev_r = scan.front();
    double prev_f = resid(prev_r);
    for (std::size_t i = 1; i < scan.size(); ++i) {
        const double r = scan[i];
        const double f = resid(r);
        if (std::isfinite(f) && std::isfinite(prev_f) && (f > 0) != (prev_f > 0)) {
            const double mid = 0.5 * (prev_r + r);
            const double re = re_of(mid);
            const double psi = std::isnan(re) ? -1.0 : detail::fixed_psi(m, re, mid);
            if (psi > best_psi) {
                best_psi = psi;
                best_lo = prev_r;
                best_hi = r;
            }
        }
        prev_r = r;
        prev_f = f;
    }
    if (best_psi < 0) {
        throw SolverError("fixed_unconstrained_pair: no stationary point found");
    }

    Optimum o;
    const auto fp = detail::relaxed_fixed_point(sweep, 0.5 * (best_lo + best_hi), best_lo, best_hi, opts.damping,
                                                opts.rate_tol, opts.max_iter);
    double rb;
    if (fp.converged) {
        rb = fp.x;
        o.method = Method::fixed_point;
    } else {
        rb = detail::bisect(resid, best_lo, best_hi, opts.rate_tol);
        o.method = Method::bisection;
    }
    o.iterations = fp.iterations;
    // the last sweep leaves both rates consistent to rate_tol
    o.rates.r_e = re_of(rb);
    o.rates.r_b = detail::stationary_rb(m, o.rates.r_e);
    if (!(o.rates.r_e > 0) || !(o.rates.r_b > o.rates.r_e) || !std::isfinite(o.rates.r_b)) {
        throw SolverError("fixed_unconstrained_pair: iteration left the admissible region");
    }
    const auto rep = est_fixed(m, o.rates, SecrecyConstraint{1.0}, CdfModel::gamma_approx);
    o.est = rep.est;
    o.sop = rep.sop;
    o.hessian_ok = detail::hessian_negative_definite(m, o.rates.r_e, o.rates.r_b);
    detail::fill_exact(m, o, opts);
    return o;
}

inline Optimum fixed_unconstrained_pair(const Scenario& s, const SolverOptions& opts = {})
{
    return fixed_unconstrained_pair(LinkModel(s), opts);
}

// Optimal codeword rate for a fixed redundancy rate, via the Lambert-W stationarity form.
inline RateSolution fixed_constrained_rb(const LinkModel& m, double r_e_fixed, const SolverOptions& opts = {},
                                         std::optional<double> seed = std::nullopt, std::string* diagnostics = nullptr)
{
    opts.validate();
    if (!(r_e_fixed >= 0)) {
        throw DomainError("fixed_constrained_rb: r_e must be non-negative");
    }
    const double lo = r_e_fixed + 1e-9;
    const double hi = r_e_fixed + 20.0;
    const double x0 = seed && *seed > lo && *seed < hi ? *seed : r_e_fixed + 1.0;
    auto psi = [&](double rb) { return detail::fixed_psi(m, r_e_fixed, rb); };

    std::string diag;
    RateSolution best{0, Method::lambert_w, 0};
    double best_psi = -1;
    int iters = 0;
    for (auto branch : {specfun::LambertBranch::principal, specfun::LambertBranch::lower}) {
        std::string bdiag;
        auto g = [&](double rb) { return detail::lambert_rb(m, r_e_fixed, rb, branch, &bdiag); };
        auto resid = [&](double rb) { return g(rb) - rb; };
        // the map is only defined on part of (r_e, r_e + 20]: bracket its roots first
        const double step = 0.05;
        double prev_x = lo;
        double prev_f = resid(prev_x);
        for (double x = lo + step; x <= hi; x += step) {
            const double f = resid(x);
            if (std::isfinite(f) && std::isfinite(prev_f) && (f > 0) != (prev_f > 0)) {
                const double start = x0 > prev_x && x0 < x ? x0 : 0.5 * (prev_x + x);
                const auto fp = detail::relaxed_fixed_point(g, start, prev_x, x, opts.damping, opts.rate_tol,
                                                            opts.max_iter);
                iters += fp.iterations;
                double root = fp.x;
                Method how = Method::lambert_w;
                if (!fp.converged) {
                    root = detail::bisect(resid, prev_x, x, opts.rate_tol);
                    how = Method::bisection;
                }
                const double v = psi(root);
                if (v > best_psi) {
                    best_psi = v;
                    best.rate = root;
                    best.method = how;
                }
            }
            prev_x = x;
            prev_f = f;
        }
        if (!bdiag.empty()) {
            diag += (diag.empty() ? "" : "; ") + bdiag;
        }
    }
    best.iterations = iters;
    if (best_psi < 0) {
        // no admissible branch: maximize directly
        double top = lo;
        for (double r = lo + 0.05; r <= hi; r += 0.05) {
            if (psi(r) > psi(top)) {
                top = r;
            }
        }
        const auto g = detail::golden_max(psi, std::max(lo, top - 0.05), std::min(hi, top + 0.05), opts.rate_tol);
        best.rate = g.first;
        best.method = Method::direct_search;
        if (diagnostics) {
            *diagnostics = diag.empty() ? "Lambert-W iteration did not converge" : diag;
        }
    }
    return best;
}

inline RateSolution fixed_constrained_rb(const Scenario& s, double r_e_fixed, const SolverOptions& opts = {})
{
    return fixed_constrained_rb(LinkModel(s), r_e_fixed, opts);
}

inline Optimum fixed_optimal(const LinkModel& m, double s_th, const SolverOptions& opts = {})
{
    Optimum pair = fixed_unconstrained_pair(m, opts);
    const auto th = re_threshold(m, s_th, opts);
    if (pair.rates.r_e >= th.rate) {
        return pair;
    }
    Optimum o;
    o.rates.r_e = th.rate;
    std::string diag;
    const auto rb = fixed_constrained_rb(m, th.rate, opts, pair.rates.r_b + (th.rate - pair.rates.r_e), &diag);
    o.rates.r_b = rb.rate;
    o.method = rb.method;
    o.iterations = pair.iterations + th.iterations + rb.iterations;
    o.constraint_active = true;
    o.diagnostics = diag;
    const auto rep = est_fixed(m, o.rates, SecrecyConstraint{s_th}, CdfModel::gamma_approx);
    o.est = rep.est;
    o.sop = rep.sop;
    o.hessian_ok = detail::hessian_negative_definite(m, o.rates.r_e, o.rates.r_b);
    detail::fill_exact(m, o, opts);
    return o;
}

inline Optimum fixed_optimal(const Scenario& s, double s_th, const SolverOptions& opts = {})
{
    return fixed_optimal(LinkModel(s), s_th, opts);
}

// Coarse grid (grid_points per non-degenerate axis, first index wins ties) followed by
// coordinate golden-section refinement inside the neighbouring cells. Pairs with r_e > r_b are skipped.
template <class F>
Optimum grid_refine_maximize(F&& objective, const RateBounds& b, const SolverOptions& opts = {})
{
    opts.validate();
    if (!(b.re_hi >= b.re_lo) || !(b.rb_hi >= b.rb_lo) || !std::isfinite(b.re_hi) || !std::isfinite(b.rb_hi)) {
        throw DomainError("grid_refine_maximize: invalid bounds");
    }
    const int ne = b.re_hi > b.re_lo ? opts.grid_points : 1;
    const int nb = b.rb_hi > b.rb_lo ? opts.grid_points : 1;
    const double de = ne > 1 ? (b.re_hi - b.re_lo) / (ne - 1) : 0.0;
    const double db = nb > 1 ? (b.rb_hi - b.rb_lo) / (nb - 1) : 0.0;
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    auto eval = [&](double re, double rb) { return re > rb ? ninf : static_cast<double>(objective(RatePair{rb, re})); };

    double best = ninf;
    double bre = b.re_lo;
    double brb = b.rb_lo;
    for (int i = 0; i < ne; ++i) {
        for (int j = 0; j < nb; ++j) {
            const double re = b.re_lo + i * de;
            const double rb = b.rb_lo + j * db;
            const double v = eval(re, rb);
            if (v > best) {
                best = v;
                bre = re;
                brb = rb;
            }
        }
    }
    for (int sweep = 0; sweep < 4; ++sweep) {
        if (ne > 1) {
            const auto g = detail::golden_max([&](double re) { return eval(re, brb); }, std::max(b.re_lo, bre - de),
                                              std::min(b.re_hi, bre + de), opts.rate_tol);
            if (g.second > best) {
                best = g.second;
                bre = g.first;
            }
        }
        if (nb > 1) {
            const auto g = detail::golden_max([&](double rb) { return eval(bre, rb); }, std::max(b.rb_lo, brb - db),
                                              std::min(b.rb_hi, brb + db), opts.rate_tol);
            if (g.second > best) {
                best = g.second;
                brb = g.first;
            }
        }
    }
    Optimum o;
    o.rates = {brb, bre};
    o.est = best;
    o.method = Method::grid_oracle;
    return o;
}

// Grid oracles over the gated EST of each scheme.
inline Optimum grid_oracle_adaptive(const LinkModel& m, double c_b, double s_th, const SolverOptions& opts = {},
                                    CdfModel model = CdfModel::gamma_approx)
{
    const SecrecyConstraint con{s_th};
    auto f = [&](const RatePair& r) { return est_adaptive(m, c_b, r.r_e, con, model).est; };
    auto o = grid_refine_maximize(f, {0.0, c_b, c_b, c_b}, opts);
    o.sop = sop(m, o.rates.r_e, model);
    return o;
}

inline Optimum grid_oracle_fixed(const LinkModel& m, double s_th, const SolverOptions& opts = {},
                                 CdfModel model = CdfModel::gamma_approx)
{
    const SecrecyConstraint con{s_th};
    const double top = detail::rate_ceiling(m);
    auto f = [&](const RatePair& r) { return est_fixed(m, r, con, model).est; };
    auto o = grid_refine_maximize(f, {0.0, top, 0.0, top}, opts);
    o.sop = sop(m, o.rates.r_e, model);
    return o;
}

// gamma0 for which the fixed-scheme unconstrained optimum has codeword rate target_rb.
inline double calibrate_gamma0(const Scenario& base, double target_rb, double lo = 1e2, double hi = 1e8,
                               const SolverOptions& opts = {})
{
    auto rb_at = [&](double lg) {
        Scenario s = base;
        s.nodes.gamma0 = std::exp(lg);
        SolverOptions o = opts;
        o.report_exact = false;
        return fixed_unconstrained_pair(LinkModel(s), o).rates.r_b - target_rb;
    };
    const double a = std::log(lo);
    const double b = std::log(hi);
    if ((rb_at(a) > 0) == (rb_at(b) > 0)) {
        throw SolverError("calibrate_gamma0: target rate not bracketed by the gamma0 range");
    }
    return std::exp(detail::bisect(rb_at, a, b, 1e-12));
}

} // namespace fsoest
