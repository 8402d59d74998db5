#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "veeww/errors.hpp"
#include "veeww/qstate.hpp"
#include "veeww/ww_markov.hpp"

using namespace veeww;
using namespace veeww::markov;

namespace {

ModelParams natural(double ratio, double eps) {
    ModelParams p;
    p.delta = ratio;
    p.gamma = 1.0;
    p.epsilon = eps;
    return p;
}

// Mean of p(t) = -d|alpha|^2/dt from central differences of alpha_of_t and
// a trapezoid sum; independent of the closed-form 1/Gamma_eff route.
double finite_difference_mean(const ModelParams& p, RateForm form) {
    const double h = 1e-3;
    const double t_max = 60.0;
    const auto survival = [&](double t) { return std::norm(alpha_of_t(t, p, form)); };
    double sum = 0.0;
    const auto steps = static_cast<int>(t_max / h);
    for (int j = 0; j <= steps; ++j) {
        const double t = j * h;
        const double lo = std::max(0.0, t - h);
        const double density = -(survival(t + h) - survival(lo)) / (t + h - lo);
        const double w = (j == 0 || j == steps) ? 0.5 : 1.0;
        sum += w * t * density;
    }
    return sum * h;
}

}  // namespace

TEST_CASE("effective_rate examples") {
    CHECK(effective_rate(natural(0.1, kHalfPi), RateForm::full_cot) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(effective_rate(natural(0.1, 0.2), RateForm::small_epsilon) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(effective_rate(natural(0.1, 0.1), RateForm::small_epsilon) == 0.0);
    CHECK(effective_rate(natural(0.1, 0.05), RateForm::small_epsilon) < 0.0);
    CHECK_THROWS_AS(effective_rate(natural(0.1, 0.0), RateForm::full_cot), DomainError);
}

TEST_CASE("alpha_of_t examples") {
    CHECK(alpha_of_t(0.0, natural(0.1, 0.2), RateForm::small_epsilon) == Complex(1.0, 0.0));
    CHECK(alpha_of_t(2.0, natural(0.0, kHalfPi), RateForm::full_cot).real() ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(alpha_of_t(1.0, natural(0.1, 0.2), RateForm::small_epsilon).real() ==
          doctest::Approx(0.77880078307).epsilon(1e-10));
    CHECK_THROWS_AS(alpha_of_t(1.0, natural(0.1, 0.05), RateForm::small_epsilon), UnphysicalRegion);
    CHECK_NOTHROW(alpha_of_t(1.0, natural(0.1, 0.05), RateForm::small_epsilon, Physicality::allow));
    CHECK(alpha_of_t(0.0, natural(0.1, 0.05), RateForm::small_epsilon) == Complex(1.0, 0.0));
    CHECK_THROWS_AS(alpha_of_t(-1.0, natural(0.1, 0.2), RateForm::small_epsilon), DomainError);
}

TEST_CASE("mean_scattering_time examples") {
    const auto st = mean_scattering_time(natural(0.1, kPi / 4.0), RateForm::full_cot);
    CHECK(st.tau == doctest::Approx(1.0 / 0.9).epsilon(1e-14));
    CHECK(st.tau == 1.0 / st.effective_rate);
    CHECK(finite_difference_mean(natural(0.1, kPi / 4.0), RateForm::full_cot) ==
          doctest::Approx(1.0 / 0.9).epsilon(1e-6));

    try {
        mean_scattering_time(natural(0.1, 0.05), RateForm::small_epsilon);
        FAIL("expected UnphysicalRegion");
    } catch (const UnphysicalRegion& e) {
        CHECK(e.threshold_epsilon() == doctest::Approx(0.1));
    }
    CHECK(mean_scattering_time(natural(0.01, 0.0101), RateForm::small_epsilon).tau ==
          doctest::Approx(101.0).epsilon(1e-9));
}

TEST_CASE("mean time equals the first moment of the flux density (quadrature)") {
    for (double eps : {0.12, 0.2, 0.5, 1.0, kHalfPi}) {
        for (RateForm form : {RateForm::full_cot, RateForm::small_epsilon}) {
            const auto p = natural(0.1, eps);
            const double rate = effective_rate(p, form);
            if (rate <= 0.0) continue;
            const double moment = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [rate](double t) { return t * rate * std::exp(-rate * t); }, 0.0,
                std::numeric_limits<double>::infinity(), 15, 1e-13);
            CHECK(mean_scattering_time(p, form).tau == doctest::Approx(moment).epsilon(1e-8));
        }
    }
}

TEST_CASE("tau_curve examples") {
    const std::vector<double> grid = {0.05, 0.08, 0.099, 0.101, 0.2, 1.0};
    const auto rows = tau_curve(0.1, grid, RateForm::small_epsilon);
    REQUIRE(rows.size() == grid.size());
    for (const auto& r : rows) {
        CHECK(r.physical == (r.epsilon > 0.1));
        if (r.physical) CHECK(std::isfinite(r.tau_gamma));
        else CHECK(std::isinf(r.tau_gamma));
    }
    const double half_pi[] = {kHalfPi};
    CHECK(tau_curve(0.1, half_pi, RateForm::full_cot)[0].tau_gamma == 1.0);
    const double arccot5[] = {std::atan(0.2)};
    CHECK(tau_curve(0.1, arccot5, RateForm::full_cot)[0].tau_gamma ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(tau_curve(0.1, {}, RateForm::full_cot), DomainError);
}

TEST_CASE("tau is strictly decreasing where physical") {
    for (RateForm form : {RateForm::small_epsilon, RateForm::full_cot}) {
        const auto grid = make_grid(0.1001, kHalfPi, 2000, Spacing::log);
        const auto rows = tau_curve(0.1, grid, form);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i - 1].physical && rows[i].physical) {
                CHECK(rows[i].tau_gamma < rows[i - 1].tau_gamma);
            }
        }
    }
}

TEST_CASE("amplification: tau Gamma > 1 for physical eps < pi/2 (full cot)") {
    for (double ratio : {0.01, 0.1, 0.3}) {
        const auto grid = make_grid(1e-3, kHalfPi - 1e-6, 500, Spacing::log);
        for (const auto& r : tau_curve(ratio, grid, RateForm::full_cot)) {
            if (r.physical) CHECK(r.tau_gamma > 1.0);
        }
    }
}

TEST_CASE("divergence bracketing near eps = Delta/Gamma") {
    for (double ratio : {0.1, 0.01}) {
        double previous = 0.0;
        for (int m = 1; m <= 6; ++m) {
            const double eps = ratio * (1.0 + std::pow(10.0, -m));
            const double tau = mean_scattering_time(natural(ratio, eps), RateForm::small_epsilon).tau;
            if (m > 1) CHECK(tau >= 9.0 * previous);
            previous = tau;
        }
    }
}

TEST_CASE("full-cot and small-epsilon forms agree to first order in eps") {
    // cot(eps) - 1/eps = -eps/3 + O(eps^3), so |difference| <= 0.5 eps Delta/Gamma.
    for (double ratio : {0.01, 0.1}) {
        for (double eps : make_grid(1e-4, 0.3, 200, Spacing::log)) {
            const auto p = natural(ratio, eps);
            const double diff = std::abs(effective_rate(p, RateForm::full_cot) -
                                         effective_rate(p, RateForm::small_epsilon));
            CHECK(diff <= 0.5 * eps * ratio);
            CHECK(diff >= eps * ratio / 3.0 * 0.99);
        }
    }
}

TEST_CASE("effective rate equals Gamma + Delta Im(weak value)") {
    for (double eps : make_grid(1e-4, kHalfPi, 100, Spacing::log)) {
        const auto p = natural(0.1, eps);
        const auto w = qstate::weak_value(qstate::sigma_z(), qstate::symmetric_state(),
                                          qstate::postselect_state(eps));
        const double via_weak = p.gamma + p.delta * w.value.imag();
        const double rate = effective_rate(p, RateForm::full_cot);
        CHECK(std::abs(rate - via_weak) <= 1e-10 * std::max(1.0, std::abs(rate)));
    }
}

TEST_CASE("markov_trajectory grid and survival invariants") {
    const auto p = natural(0.1, 0.2);
    const auto traj = markov_trajectory(p, RateForm::small_epsilon);
    const double rate = 0.5;
    CHECK(traj.times[1] == doctest::Approx(0.01 / rate));
    CHECK(traj.times.back() == doctest::Approx(10.0 / rate));
    CHECK(traj.survival[0] == 1.0);
    for (std::size_t j = 0; j < traj.size(); ++j) {
        CHECK(std::abs(traj.survival[j] - std::norm(traj.alpha[j])) < 1e-12);
        if (j > 0) CHECK(traj.survival[j] <= traj.survival[j - 1]);
    }
    CHECK_THROWS_AS(markov_trajectory(natural(0.1, 0.05), RateForm::small_epsilon), UnphysicalRegion);
}

TEST_CASE("make_grid") {
    const auto lin = make_grid(0.0, 1.0, 5, Spacing::linear);
    CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto lg = make_grid(0.01, 1.0, 3, Spacing::log);
    CHECK(lg[1] == doctest::Approx(0.1));
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 3, Spacing::log), DomainError);
    CHECK_THROWS_AS(make_grid(0.1, 1.0, 0, Spacing::log), DomainError);
}

TEST_CASE("elastic-regime constructor") {
    CHECK_NOTHROW(ModelParams::elastic(0.1, 0.2));
    CHECK_THROWS_AS(ModelParams::elastic(1.0, 0.2), DomainError);
    CHECK_NOTHROW(ModelParams::elastic(0.6, 0.9));
    CHECK_THROWS_AS(ModelParams::elastic(0.6, 0.9, true), DomainError);
    ModelParams p = ModelParams::elastic(0.1, 0.2);
    CHECK_THROWS_AS(p.omega_plus(), DomainError);
    p.omega = 100.0;
    CHECK(p.omega_plus() == doctest::Approx(100.05));
    CHECK(p.omega_minus() == doctest::Approx(99.95));
}
