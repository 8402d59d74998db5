#pragma once

// Discretized vacuum bath for the single-excitation V-atom problem.
//
// The two emission channels |+> -> |g> and |-> -> |g> combine, for
// perpendicular induced dipoles, into one effective channel with dipole
// d = d1 - d2. After the polarization sum and the angular integral the
// bath reduces to a 1D set of modes k with detunings delta_k = omega_k - omega
// and scalar couplings g_k. In the frame rotating at omega:
//
//   d(alpha)/dt  = i sum_k g_k beta_k e^{i delta_k t} + c alpha
//   d(beta_k)/dt = i conj(g_k) alpha e^{-i delta_k t}
//
// where c = (Delta/2) cot(eps) when post-selection is on and 0 otherwise.
// Eliminating beta gives the memory-kernel form
//
//   d(alpha)/dt = -int_0^t K(t - s) alpha(s) ds + c alpha,
//   K(tau) = sum_k |g_k|^2 e^{i delta_k tau}.

#include <array>
#include <cstddef>
#include <vector>

#include "veeww/model.hpp"

namespace veeww::bath {

struct FieldConstants {
    double hbar = 1.054571817e-34;     ///< J s
    double epsilon0 = 8.8541878128e-12;  ///< F/m
    double c = 299792458.0;            ///< m/s

    static FieldConstants si() noexcept { return {}; }
    void validate() const;
};

/// Gamma = omega^3 eta^2 / (3 pi epsilon0 hbar c^3).
double gamma_from_dipole(double omega, double eta, const FieldConstants& constants);

using Vec3c = std::array<Complex, 3>;

double norm_squared(const Vec3c& v) noexcept;

/// Induced dipoles of the two transitions.
struct DipolePair {
    Vec3c d1{};
    Vec3c d2{};
    double eta = 0.0;

    /// d1 = eta (x + i y)/sqrt2, d2 = eta (x - i y)/sqrt2, so d1 - d2 = i sqrt2 eta y.
    static DipolePair perpendicular(double eta);

    Vec3c difference() const noexcept;
    /// Checks |d1| = |d2| = eta, <d1|d2> = 0 and |d1 - d2|^2 = 2 eta^2.
    bool is_consistent(double tol = 1e-12) const noexcept;
};

struct AngularIntegral {
    double quadrature = 0.0;  ///< product Gauss-Legendre x uniform-phi rule
    double analytic = 0.0;    ///< (8 pi / 3) |d|^2
};

/// int dOmega (|d|^2 - |d . kappa|^2) over the unit sphere, which is the
/// polarization-summed coupling strength sum_s |d . e_s|^2.
AngularIntegral angular_dipole_integral(const Vec3c& d, int n_theta = 16,
                                        int n_phi = 32);

/// |g|^2 per unit bandwidth at the carrier for the combined channel of a
/// dipole pair: omega^3 / (2 (2 pi)^3 epsilon0 hbar c^3) times half the
/// angular integral of d1 - d2. The golden-rule rate is 2 pi times this.
double dipole_spectral_density(double omega, const DipolePair& dipoles,
                               const FieldConstants& constants);

struct BathGrid {
    std::vector<double> mode_freqs;  ///< omega_k, strictly increasing
    std::vector<double> detunings;   ///< omega_k - omega
    std::vector<Complex> couplings;  ///< g_k with the quadrature weight folded in
    std::vector<double> weights;     ///< frequency quadrature weights
    double omega = 0.0;
    double cutoff = 0.0;  ///< half-width of the window around omega

    std::size_t n_modes() const noexcept { return mode_freqs.size(); }
    double spacing() const noexcept { return weights.empty() ? 0.0 : weights.front(); }
    /// sum_k |g_k|^2, i.e. K(0).
    double coupling_power() const noexcept;
    /// 2 pi * (mean |g_k|^2 / weight): the Fermi golden-rule rate.
    double golden_rule_rate() const noexcept;
};

/// Flat effective spectral density on [omega - cutoff, omega + cutoff] on a
/// midpoint grid, with |g_k|^2 = target_gamma * w_k / (2 pi).
///
/// Requires cutoff >= 20 target_gamma, n_modes >= 512 and omega >= 10 cutoff.
/// Throws DomainError if the spacing 2 cutoff / n_modes exceeds
/// target_gamma / 20.
BathGrid build_bath(double target_gamma, double omega, double cutoff,
                    std::size_t n_modes);

struct BathDefaults {
    static constexpr double cutoff_over_gamma = 50.0;
    static constexpr std::size_t n_modes = 4096;
};

struct EvolveOptions {
    double t_end = 3.0;
    double dt = 0.002;
    bool postselect = false;
    RateForm form = RateForm::full_cot;
};

/// alpha, the combined beta_k amplitudes, and the time.
struct FullState {
    Complex alpha{1.0, 0.0};
    std::vector<Complex> betas;
    double time = 0.0;

    /// |alpha|^2 + sum |beta_k|^2
    double norm_squared() const noexcept;
};

/// Fixed-step classical RK4 on the coupled alpha / beta_k equations.
class ModeIntegrator {
public:
    /// Validates dt <= 0.1 / cutoff (StepSizeTooLarge).
    ModeIntegrator(const BathGrid& bath, const ModelParams& params,
                   const EvolveOptions& options);

    /// Advances one step. Throws NonFiniteAmplitude.
    void step();
    const FullState& state() const noexcept { return state_; }
    double dt() const noexcept { return dt_; }

private:
    void fill_phases(double t, std::vector<Complex>& phases) const;
    void derivative(const std::vector<Complex>& phases, Complex alpha,
                    const std::vector<Complex>& betas, Complex& dalpha,
                    std::vector<Complex>& dbetas) const;

    const BathGrid* bath_;
    double dt_;
    Complex self_term_;
    std::size_t step_index_ = 0;
    FullState state_;
    std::vector<Complex> k1_, k2_, k3_, k4_, scratch_;
    std::vector<Complex> phase_start_, phase_mid_, phase_end_;
};

/// Integrates from alpha(0) = 1, beta_k(0) = 0 and records every step.
/// Requires t_end <= 10 / Gamma.
AmplitudeTrajectory evolve_modes(const BathGrid& bath, const ModelParams& params,
                                 const EvolveOptions& options);

/// K(j dt) for j = 0 .. n_lags - 1.
std::vector<Complex> memory_kernel(const BathGrid& bath, double dt,
                                   std::size_t n_lags);

/// Integrates the memory-kernel equation with trapezoidal history quadrature
/// and an implicit trapezoidal step. Quadratic in the number of steps.
AmplitudeTrajectory evolve_kernel(const BathGrid& bath, const ModelParams& params,
                                  const EvolveOptions& options);

/// Trapezoidal estimate of int_0^t_max Re K(tau) d tau, which tends to
/// Gamma/2 in the Markov limit.
double kernel_markov_integral(const BathGrid& bath, double t_max, double dt);

/// Least-squares slope of -ln|alpha|^2 over t in [t_lo, t_hi].
double fit_decay_rate(const AmplitudeTrajectory& trajectory, double t_lo,
                      double t_hi);

}  // namespace veeww::bath
