#pragma once

#include <cmath>
#include <string>

#include "fsoest/channel.hpp"
#include "fsoest/errors.hpp"

namespace fsoest {

// Full experiment description. Defaults are the desk-scale baseline.
struct Scenario {
    GeometryConfig geometry;
    NodeConfig nodes;
    double sigma_s = 2.0;
    double s_th = 1.0;
    double epsilon = 0.0;
    double omega_adj = 0.97;

    void validate() const
    {
        auto positive = [](double v, const char* field) {
            if (!(v > 0) || !std::isfinite(v)) {
                throw ConfigError(field, "must be a positive finite number");
            }
        };
        positive(geometry.wavelength_m, "geometry.wavelength_m");
        positive(geometry.distance_bob_m, "geometry.distance_bob_m");
        positive(geometry.distance_eve_m, "geometry.distance_eve_m");
        positive(geometry.beam_waist_wb, "geometry.beam_waist_wb");
        positive(geometry.aperture_radius_rho, "geometry.aperture_radius_rho");
        if (!(geometry.cn2 >= 0) || !std::isfinite(geometry.cn2)) {
            throw ConfigError("geometry.cn2", "must be a non-negative finite number");
        }
        if (nodes.n_a < 1) {
            throw ConfigError("nodes.n_a", "must be an integer >= 1");
        }
        if (nodes.n_b < 1) {
            throw ConfigError("nodes.n_b", "must be an integer >= 1");
        }
        if (nodes.n_e < 1) {
            throw ConfigError("nodes.n_e", "must be an integer >= 1");
        }
        positive(nodes.gamma0, "nodes.gamma0");
        if (!(sigma_s >= 0) || !std::isfinite(sigma_s)) {
            throw ConfigError("sigma_s", "must be a non-negative finite number");
        }
        if (!(s_th > 0 && s_th <= 1)) {
            throw ConfigError("s_th", "must lie in (0, 1]");
        }
        if (!(epsilon >= 0) || !std::isfinite(epsilon)) {
            throw ConfigError("epsilon", "must be a non-negative finite number");
        }
        positive(omega_adj, "omega_adj");
    }
};

// Derived distribution parameters of a scenario, computed once.
struct LinkModel {
    Scenario scenario;
    TurbulenceParams turb_bob;
    TurbulenceParams turb_eve;
    PointingParams pointing;
    GammaApprox approx_bob;
    GammaApprox approx_eve;

    explicit LinkModel(const Scenario& s) : scenario(s)
    {
        s.validate();
        turb_bob = turbulence_params(s.geometry, s.geometry.distance_bob_m);
        turb_eve = turbulence_params(s.geometry, s.geometry.distance_eve_m);
        pointing = pointing_params(s.geometry, s.sigma_s);
        approx_bob = gamma_approx(turb_bob, s.nodes.n_b, s.epsilon, s.omega_adj);
        approx_eve = gamma_approx(turb_eve, s.nodes.n_e, s.epsilon, s.omega_adj);
    }

    const NodeConfig& nodes() const { return scenario.nodes; }
    double alpha_bob() const { return turb_bob.alpha; }
    double beta_bob() const { return turb_bob.beta_single * scenario.nodes.n_b; }
    double alpha_eve() const { return turb_eve.alpha; }
    double beta_eve() const { return turb_eve.beta_single * scenario.nodes.n_e; }
    double xi() const { return pointing.xi; }
    bool pointing_free() const { return pointing.pointing_free(); }

    double threshold(double rate, Node which) const { return snr_threshold(scenario.nodes, pointing, rate, which).value; }
};

} // namespace fsoest
