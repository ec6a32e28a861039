#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>

#include "fsoest/channel.hpp"
#include "fsoest/errors.hpp"
#include "fsoest/scenario.hpp"
#include "fsoest/specfun.hpp"

namespace fsoest {

struct RatePair {
    double r_b = 0;
    double r_e = 0;

    double secrecy_rate() const { return r_b - r_e; }
};

struct SecrecyConstraint {
    double s_th = 1.0;

    void validate() const
    {
        if (!(s_th > 0 && s_th <= 1)) {
            throw DomainError("SecrecyConstraint.s_th must lie in (0, 1]");
        }
    }
};

struct EstReport {
    double est = 0;
    double reliability_factor = 1;
    double secrecy_factor = 0;
    double sop = 1;
    bool constraint_met = false;
};

// exact: series kernels. gamma_approx: the gamma surrogate used by the optimizers.
enum class CdfModel { exact, gamma_approx };

namespace detail {

inline std::atomic<std::uint64_t>& clamp_counter_ref()
{
    static std::atomic<std::uint64_t> n{0};
    return n;
}

inline double clamp_probability(double p)
{
    if (p < -1e-9 || p > 1.0 + 1e-9) {
        clamp_counter_ref().fetch_add(1, std::memory_order_relaxed);
    }
    return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
}

inline void check_rate(double r, const char* what)
{
    if (!(r >= 0) || std::isnan(r)) {
        throw DomainError(std::string(what) + " must be non-negative");
    }
}

} // namespace detail

// Clamps of probabilities that overshot [0, 1] by more than 1e-9.
inline std::uint64_t probability_clamp_warnings() { return detail::clamp_counter_ref().load(); }

// Eve's combined CDF at the normalized threshold.
inline double eve_cdf(const LinkModel& m, double r_e, CdfModel model)
{
    detail::check_rate(r_e, "r_e");
    const double x = m.threshold(r_e, Node::eve);
    if (model == CdfModel::gamma_approx) {
        return detail::clamp_probability(ggp_cdf_approx(m.approx_eve, m.xi(), x));
    }
    return detail::clamp_probability(ggp_cdf(m.alpha_eve(), m.beta_eve(), m.xi(), x));
}

// Single-branch CDF of Bob's MRC irradiance at the normalized threshold.
inline double bob_branch_cdf(const LinkModel& m, double r_b, CdfModel model)
{
    detail::check_rate(r_b, "r_b");
    const double x = m.threshold(r_b, Node::bob);
    if (model == CdfModel::gamma_approx) {
        return specfun::reg_gamma_p(m.approx_bob.k_ap, x / m.approx_bob.theta_ap);
    }
    return detail::clamp_probability(gg_cdf(m.alpha_bob(), m.beta_bob(), x));
}

inline double sop(const LinkModel& m, double r_e) { return 1.0 - eve_cdf(m, r_e, CdfModel::exact); }
inline double sop_approx(const LinkModel& m, double r_e) { return 1.0 - eve_cdf(m, r_e, CdfModel::gamma_approx); }
inline double sop(const Scenario& s, double r_e) { return sop(LinkModel(s), r_e); }
inline double sop_approx(const Scenario& s, double r_e) { return sop_approx(LinkModel(s), r_e); }

inline double sop(const LinkModel& m, double r_e, CdfModel model)
{
    return model == CdfModel::exact ? sop(m, r_e) : sop_approx(m, r_e);
}

inline double reliability_outage(const LinkModel& m, double r_b, CdfModel model = CdfModel::exact)
{
    return std::pow(bob_branch_cdf(m, r_b, model), m.nodes().n_a);
}

inline double reliability_outage(const Scenario& s, double r_b) { return reliability_outage(LinkModel(s), r_b); }

inline EstReport est_adaptive(const LinkModel& m, double c_b, double r_e, const SecrecyConstraint& c,
                              CdfModel model = CdfModel::exact)
{
    c.validate();
    detail::check_rate(r_e, "r_e");
    if (r_e > c_b) {
        throw DomainError("est_adaptive: r_e exceeds c_b");
    }
    EstReport rep;
    rep.sop = sop(m, r_e, model);
    rep.secrecy_factor = 1.0 - rep.sop;
    rep.reliability_factor = 1.0;
    rep.constraint_met = rep.sop <= c.s_th;
    rep.est = rep.constraint_met ? (c_b - r_e) * rep.secrecy_factor : 0.0;
    return rep;
}

inline EstReport est_adaptive(const Scenario& s, double c_b, double r_e, const SecrecyConstraint& c)
{
    return est_adaptive(LinkModel(s), c_b, r_e, c);
}

inline EstReport est_fixed(const LinkModel& m, const RatePair& rates, const SecrecyConstraint& c,
                           CdfModel model = CdfModel::exact)
{
    c.validate();
    detail::check_rate(rates.r_e, "r_e");
    detail::check_rate(rates.r_b, "r_b");
    if (rates.r_e > rates.r_b) {
        throw DomainError("est_fixed: r_e exceeds r_b");
    }
    EstReport rep;
    rep.sop = sop(m, rates.r_e, model);
    rep.secrecy_factor = 1.0 - rep.sop;
    rep.reliability_factor = 1.0 - reliability_outage(m, rates.r_b, model);
    rep.constraint_met = rep.sop <= c.s_th;
    rep.est = rep.constraint_met ? rates.secrecy_rate() * rep.reliability_factor * rep.secrecy_factor : 0.0;
    return rep;
}

inline EstReport est_fixed(const Scenario& s, const RatePair& rates, const SecrecyConstraint& c)
{
    return est_fixed(LinkModel(s), rates, c);
}

} // namespace fsoest
