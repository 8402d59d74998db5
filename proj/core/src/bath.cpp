#include "veeww/bath.hpp"

#include <cmath>
#include <string>

#include "veeww/errors.hpp"

namespace veeww::bath {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Newton iteration on P_n from the Chebyshev initial guess.
GaussLegendre gauss_legendre(int n) {
    GaussLegendre rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    return rule;
}

void check_finite(Complex value, double t) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw NonFiniteAmplitude("amplitude became non-finite at t = " + std::to_string(t));
    }
}

Complex self_term(const ModelParams& params, const EvolveOptions& options) {
    if (!options.postselect) return {0.0, 0.0};
    const double cot = options.form == RateForm::full_cot ? 1.0 / std::tan(params.epsilon)
                                                           : 1.0 / params.epsilon;
    return {0.5 * params.delta * cot, 0.0};
}

void check_options(const BathGrid& bath, const ModelParams& params,
                   const EvolveOptions& options) {
    if (options.postselect) {
        params.validate();
    } else if (!(params.gamma > 0.0)) {
        throw DomainError("gamma must be positive");
    }
    if (bath.n_modes() == 0) throw DomainError("bath has no modes");
    if (!(options.dt > 0.0)) throw DomainError("time step must be positive");
    if (options.dt > 0.1 / bath.cutoff * (1.0 + 1e-12)) {
        throw StepSizeTooLarge("dt = " + std::to_string(options.dt) +
                               " exceeds the stability bound 0.1/cutoff = " +
                               std::to_string(0.1 / bath.cutoff));
    }
    if (!(options.t_end > 0.0)) throw DomainError("t_end must be positive");
    if (options.t_end > 10.0 / params.gamma * (1.0 + 1e-12)) {
        throw DomainError("t_end exceeds 10/Gamma");
    }
}

std::size_t step_count(const EvolveOptions& options) {
    return static_cast<std::size_t>(std::llround(options.t_end / options.dt));
}

}  // namespace

void FieldConstants::validate() const {
    if (!(hbar > 0.0 && epsilon0 > 0.0 && c > 0.0)) {
        throw DomainError("field constants must be strictly positive");
    }
}

double gamma_from_dipole(double omega, double eta, const FieldConstants& constants) {
    constants.validate();
    if (!(omega >= 0.0 && eta >= 0.0)) throw DomainError("omega and eta must be non-negative");
    return omega * omega * omega * eta * eta /
           (3.0 * kPi * constants.epsilon0 * constants.hbar * constants.c * constants.c *
            constants.c);
}

double norm_squared(const Vec3c& v) noexcept {
    return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
}

DipolePair DipolePair::perpendicular(double eta) {
    if (!(eta >= 0.0)) throw DomainError("dipole magnitude must be non-negative");
    const double a = eta * kInvSqrt2;
    DipolePair p;
    p.eta = eta;
    p.d1 = {Complex{a, 0.0}, Complex{0.0, a}, Complex{}};
    p.d2 = {Complex{a, 0.0}, Complex{0.0, -a}, Complex{}};
    return p;
}

Vec3c DipolePair::difference() const noexcept {
    return {d1[0] - d2[0], d1[1] - d2[1], d1[2] - d2[2]};
}

bool DipolePair::is_consistent(double tol) const noexcept {
    const double scale = std::max(eta * eta, 1e-300);
    Complex cross{};
    for (std::size_t i = 0; i < 3; ++i) cross += std::conj(d1[i]) * d2[i];
    return std::abs(std::sqrt(norm_squared(d1)) - eta) <= tol * std::max(eta, 1e-300) &&
           std::abs(std::sqrt(norm_squared(d2)) - eta) <= tol * std::max(eta, 1e-300) &&
           std::abs(cross) <= tol * scale &&
           std::abs(norm_squared(difference()) - 2.0 * eta * eta) <= tol * scale;
}

AngularIntegral angular_dipole_integral(const Vec3c& d, int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 3) throw DomainError("angular rule is too small");
    const double d2 = norm_squared(d);
    if (!(d2 > 0.0)) throw DomainError("dipole vector must be non-zero");

    // cos(theta) on Gauss-Legendre nodes, phi on the periodic trapezoid rule.
    const GaussLegendre rule = gauss_legendre(n_theta);
    const double dphi = 2.0 * kPi / n_phi;
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double ct = rule.nodes[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (j + 0.5) * dphi;
            const double kx = st * std::cos(phi);
            const double ky = st * std::sin(phi);
            const Complex projection = d[0] * kx + d[1] * ky + d[2] * ct;
            ring += d2 - std::norm(projection);
        }
        total += rule.weights[i] * ring * dphi;
    }
    return {total, 8.0 * kPi / 3.0 * d2};
}

double dipole_spectral_density(double omega, const DipolePair& dipoles,
                               const FieldConstants& constants) {
    constants.validate();
    const double c3 = constants.c * constants.c * constants.c;
    const double prefactor = omega * omega * omega /
                             (2.0 * std::pow(2.0 * kPi, 3) * constants.epsilon0 *
                              constants.hbar * c3);
    // The combined channel couples through (g1 - g2)/sqrt2.
    const double angular = angular_dipole_integral(dipoles.difference()).quadrature;
    return prefactor * 0.5 * angular;
}

double BathGrid::coupling_power() const noexcept {
    double sum = 0.0;
    for (const Complex& g : couplings) sum += std::norm(g);
    return sum;
}

double BathGrid::golden_rule_rate() const noexcept {
    if (couplings.empty()) return 0.0;
    double density = 0.0;
    for (std::size_t k = 0; k < couplings.size(); ++k) {
        density += std::norm(couplings[k]) / weights[k];
    }
    return 2.0 * kPi * density / static_cast<double>(couplings.size());
}

BathGrid build_bath(double target_gamma, double omega, double cutoff, std::size_t n_modes) {
    if (!(target_gamma > 0.0)) throw DomainError("target gamma must be positive");
    if (n_modes == 0 || !(cutoff > 0.0)) throw DomainError("bath needs modes and a cutoff");
    const double spacing = 2.0 * cutoff / static_cast<double>(n_modes);
    if (spacing > target_gamma / 20.0) {
        throw DomainError("bath grid too coarse: spacing " + std::to_string(spacing) +
                          " exceeds gamma/20 = " + std::to_string(target_gamma / 20.0));
    }
    if (n_modes < 512) throw DomainError("bath needs at least 512 modes");
    if (cutoff < 20.0 * target_gamma) throw DomainError("cutoff must be at least 20 gamma");
    if (omega < 10.0 * cutoff) throw DomainError("carrier must dominate the cutoff (omega >= 10 cutoff)");

    BathGrid bath;
    bath.omega = omega;
    bath.cutoff = cutoff;
    bath.mode_freqs.resize(n_modes);
    bath.detunings.resize(n_modes);
    bath.couplings.resize(n_modes);
    bath.weights.assign(n_modes, spacing);
    const double g = std::sqrt(target_gamma * spacing / (2.0 * kPi));
    for (std::size_t k = 0; k < n_modes; ++k) {
        const double detuning = -cutoff + (static_cast<double>(k) + 0.5) * spacing;
        bath.detunings[k] = detuning;
        bath.mode_freqs[k] = omega + detuning;
        bath.couplings[k] = {g, 0.0};
    }
    return bath;
}

double FullState::norm_squared() const noexcept {
    double sum = std::norm(alpha);
    for (const Complex& b : betas) sum += std::norm(b);
    return sum;
}

ModeIntegrator::ModeIntegrator(const BathGrid& bath, const ModelParams& params,
                               const EvolveOptions& options)
    : bath_(&bath), dt_(options.dt), self_term_(0.0) {
    check_options(bath, params, options);
    self_term_ = self_term(params, options);
    const std::size_t n = bath.n_modes();
    state_.betas.assign(n, Complex{});
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    scratch_.resize(n);
    phase_start_.resize(n);
    phase_mid_.resize(n);
    phase_end_.resize(n);
    fill_phases(0.0, phase_start_);
}

void ModeIntegrator::fill_phases(double t, std::vector<Complex>& phases) const {
    const auto& det = bath_->detunings;
    for (std::size_t k = 0; k < phases.size(); ++k) phases[k] = std::polar(1.0, det[k] * t);
}

void ModeIntegrator::derivative(const std::vector<Complex>& phases, Complex alpha,
                                const std::vector<Complex>& betas, Complex& dalpha,
                                std::vector<Complex>& dbetas) const {
    const auto& g = bath_->couplings;
    const Complex i_alpha{-alpha.imag(), alpha.real()};
    Complex feed{};
    for (std::size_t k = 0; k < betas.size(); ++k) {
        feed += g[k] * betas[k] * phases[k];
        dbetas[k] = std::conj(g[k]) * i_alpha * std::conj(phases[k]);
    }
    dalpha = Complex{-feed.imag(), feed.real()} + self_term_ * alpha;
}

void ModeIntegrator::step() {
    const double h = dt_;
    const double t = static_cast<double>(step_index_) * h;
    auto& betas = state_.betas;
    const std::size_t n = betas.size();

    // phase_start_ already holds e^{i delta_k t} from the previous step.
    fill_phases(t + 0.5 * h, phase_mid_);
    fill_phases(t + h, phase_end_);

    Complex a1, a2, a3, a4;
    derivative(phase_start_, state_.alpha, betas, a1, k1_);
    for (std::size_t k = 0; k < n; ++k) scratch_[k] = betas[k] + 0.5 * h * k1_[k];
    derivative(phase_mid_, state_.alpha + 0.5 * h * a1, scratch_, a2, k2_);
    for (std::size_t k = 0; k < n; ++k) scratch_[k] = betas[k] + 0.5 * h * k2_[k];
    derivative(phase_mid_, state_.alpha + 0.5 * h * a2, scratch_, a3, k3_);
    for (std::size_t k = 0; k < n; ++k) scratch_[k] = betas[k] + h * k3_[k];
    derivative(phase_end_, state_.alpha + h * a3, scratch_, a4, k4_);

    const double w = h / 6.0;
    state_.alpha += w * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    for (std::size_t k = 0; k < n; ++k) {
        betas[k] += w * (k1_[k] + 2.0 * k2_[k] + 2.0 * k3_[k] + k4_[k]);
    }
    phase_start_.swap(phase_end_);
    ++step_index_;
    state_.time = static_cast<double>(step_index_) * h;
    check_finite(state_.alpha, state_.time);
}

AmplitudeTrajectory evolve_modes(const BathGrid& bath, const ModelParams& params,
                                 const EvolveOptions& options) {
    ModeIntegrator integrator(bath, params, options);
    const std::size_t steps = step_count(options);
    AmplitudeTrajectory out;
    out.times.reserve(steps + 1);
    out.alpha.reserve(steps + 1);
    out.survival.reserve(steps + 1);
    out.push_back(0.0, integrator.state().alpha);
    for (std::size_t j = 0; j < steps; ++j) {
        integrator.step();
        out.push_back(integrator.state().time, integrator.state().alpha);
    }
    return out;
}

std::vector<Complex> memory_kernel(const BathGrid& bath, double dt, std::size_t n_lags) {
    std::vector<Complex> kernel(n_lags);
    std::vector<double> power(bath.n_modes());
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(bath.couplings[k]);
    for (std::size_t j = 0; j < n_lags; ++j) {
        const double lag = static_cast<double>(j) * dt;
        Complex sum{};
        for (std::size_t k = 0; k < power.size(); ++k) {
            sum += power[k] * std::polar(1.0, bath.detunings[k] * lag);
        }
        kernel[j] = sum;
    }
    return kernel;
}

AmplitudeTrajectory evolve_kernel(const BathGrid& bath, const ModelParams& params,
                                  const EvolveOptions& options) {
    check_options(bath, params, options);
    const Complex c = self_term(params, options);
    const double h = options.dt;
    const std::size_t steps = step_count(options);
    const std::vector<Complex> kernel = memory_kernel(bath, h, steps + 1);

    // alpha' = f = -I + c alpha, I(t_m) = int_0^t_m K(t_m - s) alpha(s) ds.
    // History by the trapezoid rule; time step by the implicit trapezoid
    // rule, which is linear in alpha_m and solved in closed form.
    std::vector<Complex> alpha(steps + 1);
    alpha[0] = {1.0, 0.0};
    Complex f_prev = c * alpha[0];
    const Complex diag = 1.0 - 0.5 * h * (c - 0.5 * h * kernel[0]);

    AmplitudeTrajectory out;
    out.times.reserve(steps + 1);
    out.alpha.reserve(steps + 1);
    out.survival.reserve(steps + 1);
    out.push_back(0.0, alpha[0]);
    for (std::size_t m = 1; m <= steps; ++m) {
        Complex history = 0.5 * kernel[m] * alpha[0];
        for (std::size_t j = 1; j < m; ++j) history += kernel[m - j] * alpha[j];
        const Complex rhs = alpha[m - 1] + 0.5 * h * (f_prev - h * history);
        alpha[m] = rhs / diag;
        f_prev = -h * (history + 0.5 * kernel[0] * alpha[m]) + c * alpha[m];
        const double t = static_cast<double>(m) * h;
        check_finite(alpha[m], t);
        out.push_back(t, alpha[m]);
    }
    return out;
}

double kernel_markov_integral(const BathGrid& bath, double t_max, double dt) {
    if (!(t_max > 0.0 && dt > 0.0)) throw DomainError("t_max and dt must be positive");
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    const std::vector<Complex> kernel = memory_kernel(bath, dt, steps + 1);
    double sum = 0.5 * (kernel.front().real() + kernel.back().real());
    for (std::size_t j = 1; j < steps; ++j) sum += kernel[j].real();
    return sum * dt;
}

double fit_decay_rate(const AmplitudeTrajectory& trajectory, double t_lo, double t_hi) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < trajectory.size(); ++j) {
        const double t = trajectory.times[j];
        if (t < t_lo || t > t_hi) continue;
        const double s = trajectory.survival[j];
        if (!(s > 0.0)) throw NumericError("survival vanished inside the fit window");
        const double y = std::log(s);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n;
    }
    if (n < 2) throw DomainError("fit window holds fewer than two samples");
    const double nn = static_cast<double>(n);
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    return -slope;
}

}  // namespace veeww::bath
