#pragma once

// Closed-form post-selected Weisskopf-Wigner decay.
//
// In the Markov limit the post-selected amplitude obeys
//   d(alpha)/dt = -(Gamma/2) alpha + (Delta/2) cot(eps) alpha,
// so |alpha(t)|^2 = exp(-Gamma_eff t) with Gamma_eff = Gamma - Delta cot(eps).
// The scattering-time density is the outgoing flux p(t) = -d|alpha|^2/dt
// and the mean scattering time is its first moment, tau = 1/Gamma_eff.

#include <span>
#include <vector>

#include "veeww/model.hpp"

namespace veeww::markov {

/// Signed rate; callers decide whether a non-positive value is acceptable.
double effective_rate(const ModelParams& params, RateForm form);

/// The eps at which Gamma_eff vanishes (the divergence of tau).
/// small_epsilon: Delta/Gamma. full_cot: arccot(Gamma/Delta).
double divergence_epsilon(const ModelParams& params, RateForm form);

enum class Physicality { enforce, allow };

/// alpha(t) = exp(-Gamma_eff t / 2) with alpha(0) = 1, in the frame rotating
/// at the carrier. With Physicality::enforce a non-positive rate and t > 0
/// raises UnphysicalRegion.
Complex alpha_of_t(double t, const ModelParams& params, RateForm form,
                   Physicality policy = Physicality::enforce);

struct ScatteringTime {
    double tau = 0.0;             ///< 1/effective_rate
    double effective_rate = 0.0;  ///< > 0
    RateForm form = RateForm::small_epsilon;
};

/// Throws UnphysicalRegion when Gamma_eff <= 0.
ScatteringTime mean_scattering_time(const ModelParams& params, RateForm form);

struct TimeGrid {
    double dt = 0.0;     ///< 0 selects 0.01 / Gamma_eff
    double t_end = 0.0;  ///< 0 selects 10 / Gamma_eff
};

/// Samples alpha(t) on a uniform grid. Throws UnphysicalRegion.
AmplitudeTrajectory markov_trajectory(const ModelParams& params, RateForm form,
                                      TimeGrid grid = {});

struct TauRow {
    double epsilon = 0.0;
    double tau_gamma = 0.0;        ///< tau * Gamma; +inf when unphysical
    double rate_over_gamma = 0.0;  ///< Gamma_eff / Gamma, signed
    bool physical = false;
};

/// tau(eps) for the natural-unit model with the given Delta/Gamma. Rows in
/// the unphysical region are flagged rather than raised. Every eps must lie
/// in (0, pi/2]; an empty grid is a DomainError.
std::vector<TauRow> tau_curve(double delta_over_gamma,
                              std::span<const double> epsilon_grid,
                              RateForm form);

enum class Spacing { linear, log };

/// `count` points from lo to hi inclusive. Log spacing needs lo > 0.
std::vector<double> make_grid(double lo, double hi, std::size_t count,
                              Spacing spacing);

}  // namespace veeww::markov
