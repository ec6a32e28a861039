#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "fsoest/secrecy.hpp"

using namespace fsoest;

namespace {

LinkModel baseline(double sigma_s = 2.0)
{
    Scenario s;
    s.sigma_s = sigma_s;
    return LinkModel(s);
}

// threshold on the aperture-normalized irradiance, written out from the SNR mapping
double norm_threshold(const LinkModel& m, double rate, int n)
{
    return (std::pow(2.0, rate) - 1.0) / (m.nodes().gamma0 * m.pointing.a0 * n);
}

} // namespace

TEST(Sop, EndpointsAndKernel)
{
    const LinkModel m = baseline();
    EXPECT_DOUBLE_EQ(sop(m, 0.0), 1.0);
    EXPECT_LE(sop(m, 30.0), 1e-6);
    for (double r : {0.5, 2.0, 4.5}) {
        const double x = norm_threshold(m, r, 2);
        EXPECT_NEAR(sop(m, r), 1.0 - ggp_cdf(m.alpha_eve(), 2 * m.turb_eve.beta_single, m.xi(), x), 1e-14);
    }
}

TEST(Sop, ApproxUsesGammaMixture)
{
    const LinkModel m = baseline();
    EXPECT_DOUBLE_EQ(sop_approx(m, 0.0), 1.0);
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
        const double v = sop_approx(m, 8.0 * i / 100);
        EXPECT_LE(v, prev + 1e-15);
        prev = v;
    }
}

TEST(Sop, ApproxGapBelowTwoPercent)
{
    for (double sig : {1.0, 2.0, 3.0}) {
        const LinkModel m = baseline(sig);
        double worst = 0;
        for (int i = 0; i <= 59; ++i) {
            const double r = 0.1 + 0.1 * i;
            worst = std::max(worst, std::fabs(sop_approx(m, r) - sop(m, r)));
        }
        EXPECT_LE(worst, 0.02) << "sigma_s=" << sig;
    }
}

TEST(Reliability, EndpointsAndSelectionLaw)
{
    Scenario s1;
    s1.nodes.n_a = 1;
    Scenario s2;
    s2.nodes.n_a = 2;
    const LinkModel m1(s1);
    const LinkModel m2(s2);
    EXPECT_EQ(reliability_outage(m2, 0.0), 0.0);
    for (double r : {1.0, 3.0, 4.0, 6.0}) {
        const double o1 = reliability_outage(m1, r);
        EXPECT_NEAR(reliability_outage(m2, r), o1 * o1, 1e-10);
    }
}

TEST(Reliability, ApproxIsGammaCdf)
{
    const LinkModel m = baseline();
    const double x = norm_threshold(m, 3.0, 1);
    const double p = boost::math::gamma_p(m.approx_bob.k_ap, x / m.approx_bob.theta_ap);
    EXPECT_NEAR(reliability_outage(m, 3.0, CdfModel::gamma_approx), p * p, 1e-14);
}

TEST(EstAdaptive, ValuesAndGating)
{
    const LinkModel m = baseline();
    EXPECT_EQ(est_adaptive(m, 4.0, 4.0, {1.0}).est, 0.0);
    for (double r : {0.1, 1.0, 2.0, 3.9}) {
        const auto rep = est_adaptive(m, 4.0, r, {1.0});
        EXPECT_TRUE(rep.constraint_met);
        EXPECT_NEAR(rep.est, (4.0 - r) * (1.0 - sop(m, r)), 1e-14);
        EXPECT_GT(rep.est, 0.0);
    }
    const auto gated = est_adaptive(m, 4.0, 1.0, {0.4});
    EXPECT_FALSE(gated.constraint_met);
    EXPECT_EQ(gated.est, 0.0);
    EXPECT_THROW(est_adaptive(m, 2.0, 3.0, {1.0}), DomainError);
    EXPECT_THROW(est_adaptive(m, 2.0, 1.0, {0.0}), DomainError);
}

TEST(EstAdaptive, SingleInteriorMaximum)
{
    const LinkModel m = baseline();
    int turns = 0;
    double prev_d = 0;
    double prev = est_adaptive(m, 4.0, 0.0, {1.0}).est;
    for (int i = 1; i <= 400; ++i) {
        const double v = est_adaptive(m, 4.0, 4.0 * i / 400, {1.0}).est;
        const double d = v - prev;
        if (i > 1 && (d > 0) != (prev_d > 0)) {
            ++turns;
        }
        prev_d = d;
        prev = v;
    }
    EXPECT_EQ(turns, 1);
}

TEST(EstFixed, ValuesAndLimits)
{
    const LinkModel m = baseline();
    EXPECT_EQ(est_fixed(m, {2.0, 2.0}, {1.0}).est, 0.0);
    const auto rep = est_fixed(m, {3.4, 1.25}, {1.0});
    const double expect = (3.4 - 1.25) * (1.0 - reliability_outage(m, 3.4)) * (1.0 - sop(m, 1.25));
    EXPECT_NEAR(rep.est, expect, 1e-14);
    EXPECT_NEAR(rep.reliability_factor * rep.secrecy_factor * 2.15, rep.est, 1e-14);
    EXPECT_LT(est_fixed(m, {20.0, 1.25}, {1.0}).est, 1e-9);
    EXPECT_EQ(est_fixed(m, {3.4, 1.25}, {0.5}).est, 0.0);
    EXPECT_THROW(est_fixed(m, {1.0, 2.0}, {1.0}), DomainError);
    EXPECT_THROW(est_fixed(m, {1.0, -0.5}, {1.0}), DomainError);
}

TEST(EstFixed, ScenarioOverloadsAgree)
{
    Scenario s;
    const LinkModel m(s);
    EXPECT_EQ(est_fixed(s, {3.0, 1.0}, {1.0}).est, est_fixed(m, {3.0, 1.0}, {1.0}).est);
    EXPECT_EQ(sop(s, 1.5), sop(m, 1.5));
    EXPECT_EQ(reliability_outage(s, 2.5), reliability_outage(m, 2.5));
}

TEST(Scenario, FieldLevelValidation)
{
    Scenario s;
    s.nodes.n_e = 0;
    try {
        LinkModel m(s);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "nodes.n_e");
    }
    Scenario t;
    t.s_th = 1.5;
    EXPECT_THROW(LinkModel{t}, ConfigError);
}
