#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "fsoest/detail/real.hpp"
#include "fsoest/errors.hpp"
#include "fsoest/optimize.hpp"
#include "fsoest/scenario.hpp"
#include "fsoest/secrecy.hpp"

namespace fsoest {

enum class Scheme { adaptive, fixed };

struct SimConfig {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    std::uint32_t stream_count = 64;
    // worker threads; 0 picks hardware concurrency. Results do not depend on it.
    unsigned threads = 0;

    void validate() const
    {
        if (trials < 1) {
            throw DomainError("SimConfig.trials must be at least 1");
        }
        if (stream_count < 1) {
            throw DomainError("SimConfig.stream_count must be at least 1");
        }
    }
};

struct Estimate {
    double mean = 0;
    // 3-sigma normal-approximation half width
    double ci_halfwidth = 0;
    std::uint64_t trials = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// One independent random stream. Uniforms, normals and gammas are generated here
// so the output does not depend on the standard library's distribution classes.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t index) : engine_(splitmix64(splitmix64(seed) ^ splitmix64(~index))) {}

    // open interval (0, 1)
    double uniform()
    {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
    }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u;
        double v;
        double s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Gamma(k, 1)
    double gamma(double k)
    {
        if (k < 1.0) {
            return gamma(k + 1.0) * std::pow(uniform(), 1.0 / k);
        }
        const double d = k - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) {
                return d * v;
            }
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
                return d * v;
            }
        }
    }

    // unit-mean gamma
    double unit_gamma(double k) { return gamma(k) / k; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0;
    bool has_spare_ = false;
};

// Eve's aggregate irradiance: pointing loss times one shared large-scale draw times the sum of small-scale draws.
inline double sample_eve_irradiance(const LinkModel& m, RngStream& rng)
{
    const double x = rng.unit_gamma(m.turb_eve.alpha);
    double sum = 0;
    for (int j = 0; j < m.nodes().n_e; ++j) {
        sum += rng.unit_gamma(m.turb_eve.beta_single);
    }
    const double ip = m.pointing_free() ? 1.0 : std::pow(rng.uniform(), 1.0 / m.pointing.xi2());
    return ip * x * sum;
}

// Bob's irradiance after transmit selection and MRC.
inline double sample_bob_irradiance(const LinkModel& m, RngStream& rng)
{
    double best = 0;
    for (int i = 0; i < m.nodes().n_a; ++i) {
        const double x = rng.unit_gamma(m.turb_bob.alpha);
        double sum = 0;
        for (int j = 0; j < m.nodes().n_b; ++j) {
            sum += rng.unit_gamma(m.turb_bob.beta_single);
        }
        best = std::max(best, x * sum);
    }
    return best;
}

namespace detail {

inline constexpr std::uint64_t bob_salt = 0xB0B5EED5B0B5EED5ULL;
inline constexpr std::uint64_t eve_salt = 0xE7E5EED5E7E5EED5ULL;

// Runs fn(rng, count) -> Acc for every stream and returns the per-stream results in stream order.
template <class Acc, class F>
std::vector<Acc> run_streams(const SimConfig& sim, std::uint64_t salt, F&& fn)
{
    sim.validate();
    const std::uint32_t ns = static_cast<std::uint32_t>(std::min<std::uint64_t>(sim.stream_count, sim.trials));
    std::vector<Acc> out(ns);
    const std::uint64_t base = sim.trials / ns;
    const std::uint64_t extra = sim.trials % ns;
    auto work = [&](std::uint32_t s) {
        RngStream rng(sim.seed ^ salt, s);
        out[s] = fn(rng, base + (s < extra ? 1 : 0));
    };
    unsigned nt = sim.threads ? sim.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min<unsigned>(nt, ns);
    if (nt <= 1) {
        for (std::uint32_t s = 0; s < ns; ++s) {
            work(s);
        }
        return out;
    }
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (std::uint32_t s = next.fetch_add(1); s < ns; s = next.fetch_add(1)) {
                try {
                    work(s);
                } catch (...) {
                    std::lock_guard lk(err_mu);
                    if (!err) {
                        err = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (err) {
        std::rethrow_exception(err);
    }
    return out;
}

inline Estimate proportion(const std::vector<std::uint64_t>& hits, std::uint64_t trials)
{
    std::uint64_t h = 0;
    for (auto v : hits) {
        h += v;
    }
    Estimate e;
    e.trials = trials;
    e.mean = static_cast<double>(h) / static_cast<double>(trials);
    e.ci_halfwidth = 3.0 * std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
    return e;
}

struct Moments {
    CompensatedSum<double> sum;
    CompensatedSum<double> sum_sq;
};

} // namespace detail

inline Estimate estimate_sop(const LinkModel& m, double r_e, const SimConfig& sim)
{
    detail::check_rate(r_e, "r_e");
    const double x = m.threshold(r_e, Node::eve) * m.nodes().n_e;
    auto hits = detail::run_streams<std::uint64_t>(sim, detail::eve_salt, [&](RngStream& rng, std::uint64_t n) {
        std::uint64_t h = 0;
        for (std::uint64_t t = 0; t < n; ++t) {
            h += sample_eve_irradiance(m, rng) > x ? 1 : 0;
        }
        return h;
    });
    return detail::proportion(hits, sim.trials);
}

inline Estimate estimate_sop(const Scenario& s, double r_e, const SimConfig& sim)
{
    return estimate_sop(LinkModel(s), r_e, sim);
}

inline Estimate estimate_reliability_outage(const LinkModel& m, double r_b, const SimConfig& sim)
{
    detail::check_rate(r_b, "r_b");
    const double x = m.threshold(r_b, Node::bob) * m.nodes().n_b;
    auto hits = detail::run_streams<std::uint64_t>(sim, detail::bob_salt, [&](RngStream& rng, std::uint64_t n) {
        std::uint64_t h = 0;
        for (std::uint64_t t = 0; t < n; ++t) {
            h += sample_bob_irradiance(m, rng) < x ? 1 : 0;
        }
        return h;
    });
    return detail::proportion(hits, sim.trials);
}

inline Estimate estimate_reliability_outage(const Scenario& s, double r_b, const SimConfig& sim)
{
    return estimate_reliability_outage(LinkModel(s), r_b, sim);
}

// Fixed scheme: product of independent reliability and secrecy estimates.
// Adaptive scheme with fixed r_e: r_b is the capacity c_b. Both are gated by the estimated SOP.
inline Estimate estimate_est(const LinkModel& m, const RatePair& rates, Scheme scheme, double s_th,
                             const SimConfig& sim)
{
    SecrecyConstraint{s_th}.validate();
    detail::check_rate(rates.r_e, "r_e");
    detail::check_rate(rates.r_b, "r_b");
    if (rates.r_e > rates.r_b) {
        throw DomainError("estimate_est: r_e exceeds r_b");
    }
    const double rs = rates.secrecy_rate();
    const Estimate sec = estimate_sop(m, rates.r_e, sim);
    const double p_sec = 1.0 - sec.mean;
    Estimate out;
    out.trials = sim.trials;
    if (sec.mean > s_th) {
        return out;
    }
    if (scheme == Scheme::adaptive) {
        out.mean = rs * p_sec;
        out.ci_halfwidth = rs * sec.ci_halfwidth;
        return out;
    }
    const Estimate rel = estimate_reliability_outage(m, rates.r_b, sim);
    const double p_rel = 1.0 - rel.mean;
    out.mean = rs * p_rel * p_sec;
    out.ci_halfwidth = rs * std::hypot(p_sec * rel.ci_halfwidth, p_rel * sec.ci_halfwidth);
    return out;
}

inline Estimate estimate_est(const Scenario& s, const RatePair& rates, Scheme scheme, double s_th,
                             const SimConfig& sim)
{
    return estimate_est(LinkModel(s), rates, scheme, s_th, sim);
}

// Adaptive scheme averaged over Bob's channel: each realization sets C_B = log2(1 + gamma_B)
// and uses the optimal constrained redundancy rate for that capacity.
inline Estimate estimate_est_adaptive_averaged(const LinkModel& m, double s_th, const SimConfig& sim,
                                               const SolverOptions& opts = {})
{
    SolverOptions o = opts;
    o.report_exact = false;
    const AdaptiveSolver solver(m, s_th, o);
    const double g = m.nodes().gamma0 * m.pointing.a0;
    auto parts = detail::run_streams<detail::Moments>(sim, detail::bob_salt, [&](RngStream& rng, std::uint64_t n) {
        detail::Moments acc;
        std::optional<double> warm;
        for (std::uint64_t t = 0; t < n; ++t) {
            const double c_b = std::log2(1.0 + g * sample_bob_irradiance(m, rng));
            double v = 0;
            if (c_b > solver.threshold() && c_b > 0) {
                const Optimum opt = solver.solve(c_b, warm);
                v = opt.est;
                if (opt.feasible && !opt.constraint_active) {
                    warm = opt.rates.r_e;
                }
            }
            acc.sum.add(v);
            acc.sum_sq.add(v * v);
        }
        return acc;
    });
    detail::CompensatedSum<double> s1;
    detail::CompensatedSum<double> s2;
    for (const auto& p : parts) {
        s1.add(p.sum.value());
        s2.add(p.sum_sq.value());
    }
    const double n = static_cast<double>(sim.trials);
    Estimate e;
    e.trials = sim.trials;
    e.mean = s1.value() / n;
    const double var = std::max(0.0, s2.value() / n - e.mean * e.mean);
    e.ci_halfwidth = 3.0 * std::sqrt(var / n);
    return e;
}

inline Estimate estimate_est_adaptive_averaged(const Scenario& s, double s_th, const SimConfig& sim)
{
    return estimate_est_adaptive_averaged(LinkModel(s), s_th, sim);
}

} // namespace fsoest
