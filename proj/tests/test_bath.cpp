#include <doctest.h>

#include <cmath>
#include <random>

#include "veeww/bath.hpp"
#include "veeww/errors.hpp"
#include "veeww/ww_markov.hpp"

using namespace veeww;
using namespace veeww::bath;

namespace {

ModelParams natural(double ratio, double eps) {
    ModelParams p;
    p.delta = ratio;
    p.gamma = 1.0;
    p.epsilon = eps;
    return p;
}

// Fine midpoint rule in (theta, phi); shares no code with the library rule.
double midpoint_angular(const Vec3c& d) {
    const int nt = 400, np = 800;
    const double ht = kPi / nt, hp = 2.0 * kPi / np;
    double sum = 0.0;
    for (int i = 0; i < nt; ++i) {
        const double th = (i + 0.5) * ht;
        for (int j = 0; j < np; ++j) {
            const double ph = (j + 0.5) * hp;
            const double k[3] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                 std::cos(th)};
            Complex dk{};
            for (int a = 0; a < 3; ++a) dk += d[a] * k[a];
            sum += (norm_squared(d) - std::norm(dk)) * std::sin(th);
        }
    }
    return sum * ht * hp;
}

double max_relative_error_vs_exp(const AmplitudeTrajectory& traj, double rate, double lo, double hi) {
    double worst = 0.0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double t = traj.times[j];
        if (t < lo - 1e-12 || t > hi + 1e-12) continue;
        const double ref = std::exp(-rate * t);
        worst = std::max(worst, std::abs(traj.survival[j] - ref) / ref);
    }
    return worst;
}

}  // namespace

TEST_CASE("gamma_from_dipole") {
    const auto c = FieldConstants::si();
    const double g1 = gamma_from_dipole(2.416e15, 2.537e-29, c);
    CHECK(gamma_from_dipole(2.0 * 2.416e15, 2.537e-29, c) == doctest::Approx(8.0 * g1).epsilon(1e-14));
    CHECK(gamma_from_dipole(2.416e15, 0.0, c) == 0.0);
    // Frozen from an independent evaluation of omega^3 eta^2 / (3 pi eps0 hbar c^3).
    CHECK(g1 == doctest::Approx(38280147.048686326).epsilon(1e-12));
    FieldConstants bad = c;
    bad.hbar = 0.0;
    CHECK_THROWS_AS(gamma_from_dipole(1.0, 1.0, bad), DomainError);
}

TEST_CASE("angular_dipole_integral examples") {
    const Vec3c y{Complex{0}, Complex{1}, Complex{0}};
    const auto r = angular_dipole_integral(y);
    CHECK(std::abs(r.quadrature - 8.0 * kPi / 3.0) < 1e-6);
    CHECK(r.analytic == doctest::Approx(8.0 * kPi / 3.0));
    CHECK(std::abs(r.quadrature - midpoint_angular(y)) < 1e-4);

    const Vec3c x{Complex{1}, Complex{0}, Complex{0}};
    const Vec3c z{Complex{0}, Complex{0}, Complex{1}};
    CHECK(std::abs(angular_dipole_integral(x).quadrature - angular_dipole_integral(z).quadrature) < 1e-10);

    const double eta = 0.7;
    const Vec3c d = DipolePair::perpendicular(eta).difference();
    CHECK(std::abs(d[1] - Complex(0.0, std::sqrt(2.0) * eta)) < 1e-15);
    CHECK(std::abs(angular_dipole_integral(d).quadrature - 8.0 * kPi / 3.0 * 2.0 * eta * eta) < 1e-6);
}

TEST_CASE("angular integral is 8 pi / 3 for random complex unit dipoles") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 20; ++trial) {
        Vec3c d;
        for (auto& c : d) c = {n(gen), n(gen)};
        const double s = std::sqrt(norm_squared(d));
        for (auto& c : d) c /= s;
        CHECK(std::abs(angular_dipole_integral(d).quadrature - 8.0 * kPi / 3.0) < 1e-6);
    }
}

TEST_CASE("dipole pair invariants and spectral density") {
    const auto pair = DipolePair::perpendicular(2.537e-29);
    CHECK(pair.is_consistent());
    CHECK(norm_squared(pair.difference()) == doctest::Approx(2.0 * pair.eta * pair.eta));
    DipolePair broken = pair;
    broken.d2 = broken.d1;
    CHECK_FALSE(broken.is_consistent());

    const auto c = FieldConstants::si();
    const double gamma = gamma_from_dipole(2.416e15, pair.eta, c);
    CHECK(2.0 * kPi * dipole_spectral_density(2.416e15, pair, c) == doctest::Approx(gamma).epsilon(1e-9));
}

TEST_CASE("build_bath examples") {
    const auto bath = build_bath(1.0, 1000.0, 50.0, 4096);
    CHECK(bath.spacing() == doctest::Approx(100.0 / 4096.0));
    CHECK(bath.spacing() < 1.0 / 20.0);
    for (std::size_t k = 1; k < bath.n_modes(); ++k) CHECK(bath.mode_freqs[k] > bath.mode_freqs[k - 1]);
    for (std::size_t k = 0; k < bath.n_modes(); ++k) {
        CHECK(bath.detunings[k] == doctest::Approx(-bath.detunings[bath.n_modes() - 1 - k]));
    }
    // Direct summation oracle for the golden-rule rate.
    double sum = 0.0;
    for (std::size_t k = 0; k < bath.n_modes(); ++k) sum += std::norm(bath.couplings[k]) / bath.weights[k];
    CHECK(std::abs(2.0 * kPi * sum / bath.n_modes() - 1.0) < 5e-3);
    CHECK(std::abs(bath.golden_rule_rate() - 1.0) < 5e-3);

    CHECK_THROWS_AS(build_bath(1.0, 1000.0, 50.0, 16), DomainError);
    CHECK_THROWS_AS(build_bath(1.0, 1000.0, 10.0, 1024), DomainError);
    CHECK_THROWS_AS(build_bath(1.0, 100.0, 50.0, 4096), DomainError);
}

TEST_CASE("evolve_modes reproduces textbook decay and conserves norm") {
    const auto bath = build_bath(1.0, 1000.0, 50.0, 4096);
    const auto params = natural(0.0, kHalfPi);
    EvolveOptions opt;
    opt.t_end = 3.0;
    opt.dt = 0.002;
    ModeIntegrator integ(bath, params, opt);
    double worst_norm = 0.0;
    AmplitudeTrajectory traj;
    traj.push_back(0.0, integ.state().alpha);
    while (integ.state().time < opt.t_end - 1e-12) {
        integ.step();
        traj.push_back(integ.state().time, integ.state().alpha);
        worst_norm = std::max(worst_norm, std::abs(integ.state().norm_squared() - 1.0));
    }
    CHECK(worst_norm < 1e-6);
    CHECK(max_relative_error_vs_exp(traj, 1.0, 0.5, 3.0) < 0.02);

    const auto direct = evolve_modes(bath, params, opt);
    REQUIRE(direct.size() == traj.size());
    for (std::size_t j = 0; j < traj.size(); ++j) CHECK(direct.alpha[j] == traj.alpha[j]);
}

TEST_CASE("post-selected bath decays at the effective rate") {
    const auto bath = build_bath(1.0, 1000.0, 50.0, 4096);
    const auto params = natural(0.01, 0.05);
    const double rate_small = markov::effective_rate(params, RateForm::small_epsilon);
    CHECK(rate_small == doctest::Approx(0.8));
    EvolveOptions opt;
    opt.postselect = true;
    opt.t_end = 3.0 / rate_small;
    const auto traj = evolve_modes(bath, params, opt);
    const double fitted = fit_decay_rate(traj, 0.5 / rate_small, 3.0 / rate_small);
    CHECK(std::abs(fitted - 0.8) / 0.8 < 0.05);
}

TEST_CASE("post-selection off ignores eps") {
    const auto bath = build_bath(1.0, 1000.0, 25.0, 2048);
    EvolveOptions opt;
    opt.t_end = 1.0;
    opt.dt = 0.004;
    const auto a = evolve_modes(bath, natural(0.01, 0.05), opt);
    const auto b = evolve_modes(bath, natural(0.3, 1.2), opt);
    const auto c = evolve_modes(bath, natural(0.0, kHalfPi), opt);
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a.alpha[j] == b.alpha[j]);
        CHECK(a.alpha[j] == c.alpha[j]);
    }
}

TEST_CASE("memory kernel and Markov integral") {
    const auto bath = build_bath(1.0, 1000.0, 50.0, 4096);
    const auto k = memory_kernel(bath, 0.01, 4);
    double power = 0.0;
    for (const auto& g : bath.couplings) power += std::norm(g);
    CHECK(k[0].real() == doctest::Approx(power).epsilon(1e-12));
    CHECK(k[0].imag() == doctest::Approx(0.0));
    CHECK(bath.coupling_power() == doctest::Approx(power).epsilon(1e-12));
    CHECK(std::abs(kernel_markov_integral(bath, 5.0, 0.001) - 0.5) / 0.5 < 0.02);
}

TEST_CASE("kernel and mode integrators agree") {
    const auto bath = build_bath(1.0, 1000.0, 50.0, 4096);
    for (bool post : {false, true}) {
        const auto params = natural(0.01, 0.05);
        EvolveOptions opt;
        opt.t_end = 3.0;
        opt.dt = 0.002;
        opt.postselect = post;
        const auto modes = evolve_modes(bath, params, opt);
        const auto kernel = evolve_kernel(bath, params, opt);
        REQUIRE(modes.size() == kernel.size());
        double worst = 0.0;
        for (std::size_t j = 0; j < modes.size(); ++j) {
            CHECK(modes.times[j] == kernel.times[j]);
            worst = std::max(worst, std::abs(modes.alpha[j] - kernel.alpha[j]));
        }
        CHECK(worst <= 1e-3);
    }
}

TEST_CASE("Weisskopf-Wigner convergence: error halves as the bath doubles") {
    const auto params = natural(0.0, kHalfPi);
    std::vector<double> errors;
    for (int scale : {1, 2, 4}) {
        const double cutoff = 25.0 * scale;
        const auto bath = build_bath(1.0, 20.0 * cutoff, cutoff, 2048 * scale);
        EvolveOptions opt;
        opt.t_end = 3.0;
        opt.dt = 0.002 / scale;
        const auto traj = evolve_modes(bath, params, opt);
        errors.push_back(std::abs(fit_decay_rate(traj, 0.5, 3.0) - 1.0));
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double ratio = errors[i - 1] / errors[i];
        CHECK(ratio >= 2.0 * 0.7);
        CHECK(ratio <= 2.0 * 1.3);
    }
}

TEST_CASE("short-time Zeno regime is quadratic") {
    const auto bath = build_bath(1.0, 1000.0, 50.0, 4096);
    EvolveOptions opt;
    opt.t_end = 2e-3;
    opt.dt = 1e-4;
    const auto traj = evolve_modes(bath, natural(0.0, kHalfPi), opt);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double t = traj.times[j];
        if (t < 5e-4 - 1e-12) continue;
        const double x = std::log(t), y = std::log(1.0 - traj.survival[j]);
        sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("evolve preconditions") {
    const auto bath = build_bath(1.0, 1000.0, 50.0, 4096);
    EvolveOptions opt;
    opt.dt = 0.01;
    CHECK_THROWS_AS(evolve_modes(bath, natural(0.0, kHalfPi), opt), StepSizeTooLarge);
    CHECK_THROWS_AS(evolve_kernel(bath, natural(0.0, kHalfPi), opt), StepSizeTooLarge);
    opt.dt = 0.002;
    opt.t_end = 11.0;
    CHECK_THROWS_AS(evolve_modes(bath, natural(0.0, kHalfPi), opt), DomainError);
}
