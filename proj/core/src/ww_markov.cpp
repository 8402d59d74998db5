#include "veeww/ww_markov.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "veeww/errors.hpp"

namespace veeww::markov {

namespace {

[[noreturn]] void throw_unphysical(const ModelParams& params, RateForm form, double rate) {
    const double threshold = divergence_epsilon(params, form);
    throw UnphysicalRegion(
        "effective rate " + std::to_string(rate / params.gamma) +
            " Gamma is not positive: eps = " + std::to_string(params.epsilon) +
            " is at or below the divergence eps = Delta/Gamma threshold " +
            std::to_string(threshold) + " (" + std::string(to_string(form)) + " form)",
        threshold);
}

}  // namespace

double effective_rate(const ModelParams& params, RateForm form) {
    params.validate();
    switch (form) {
    case RateForm::full_cot:
        return params.gamma - params.delta / std::tan(params.epsilon);
    case RateForm::small_epsilon:
        return params.gamma - params.delta / params.epsilon;
    }
    return params.gamma;
}

double divergence_epsilon(const ModelParams& params, RateForm form) {
    const double ratio = params.delta / params.gamma;
    return form == RateForm::small_epsilon ? ratio : std::atan(ratio);
}

Complex alpha_of_t(double t, const ModelParams& params, RateForm form, Physicality policy) {
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
    const double rate = effective_rate(params, form);
    if (t == 0.0) return {1.0, 0.0};
    if (policy == Physicality::enforce && rate <= 0.0) throw_unphysical(params, form, rate);
    return {std::exp(-0.5 * rate * t), 0.0};
}

ScatteringTime mean_scattering_time(const ModelParams& params, RateForm form) {
    const double rate = effective_rate(params, form);
    if (rate <= 0.0) throw_unphysical(params, form, rate);
    return {1.0 / rate, rate, form};
}

AmplitudeTrajectory markov_trajectory(const ModelParams& params, RateForm form, TimeGrid grid) {
    const double rate = effective_rate(params, form);
    if (rate <= 0.0) throw_unphysical(params, form, rate);
    const double dt = grid.dt > 0.0 ? grid.dt : 0.01 / rate;
    const double t_end = grid.t_end > 0.0 ? grid.t_end : 10.0 / rate;
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));

    AmplitudeTrajectory out;
    out.times.reserve(steps + 1);
    out.alpha.reserve(steps + 1);
    out.survival.reserve(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) {
        const double t = static_cast<double>(j) * dt;
        out.push_back(t, alpha_of_t(t, params, form));
    }
    return out;
}

std::vector<TauRow> tau_curve(double delta_over_gamma, std::span<const double> epsilon_grid,
                              RateForm form) {
    if (epsilon_grid.empty()) throw DomainError("epsilon grid is empty");
    std::vector<TauRow> rows;
    rows.reserve(epsilon_grid.size());
    for (double eps : epsilon_grid) {
        ModelParams p;
        p.delta = delta_over_gamma;
        p.gamma = 1.0;
        p.epsilon = eps;
        const double rate = effective_rate(p, form);
        TauRow row;
        row.epsilon = eps;
        row.rate_over_gamma = rate;
        row.physical = rate > 0.0;
        row.tau_gamma = row.physical ? 1.0 / rate : std::numeric_limits<double>::infinity();
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> make_grid(double lo, double hi, std::size_t count, Spacing spacing) {
    if (count == 0) throw DomainError("grid count must be positive");
    if (!(hi >= lo)) throw DomainError("grid max must not be below grid min");
    if (spacing == Spacing::log && !(lo > 0.0)) {
        throw DomainError("log spacing requires a positive minimum");
    }
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    const double n = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / n;
        grid[i] = spacing == Spacing::linear
                      ? lo + (hi - lo) * f
                      : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * f);
    }
    // End points exactly as requested.
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

}  // namespace veeww::markov
