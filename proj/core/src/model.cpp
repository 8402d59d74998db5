#include "veeww/model.hpp"

#include <cmath>
#include <string>

#include "veeww/errors.hpp"

namespace veeww {

std::string_view to_string(RateForm form) noexcept {
    switch (form) {
    case RateForm::full_cot: return "cot";
    case RateForm::small_epsilon: return "small";
    }
    return "small";
}

std::optional<RateForm> parse_rate_form(std::string_view text) noexcept {
    if (text == "cot" || text == "full-cot") return RateForm::full_cot;
    if (text == "small" || text == "small-epsilon") return RateForm::small_epsilon;
    return std::nullopt;
}

ModelParams ModelParams::elastic(double delta_over_gamma, double epsilon, bool strict) {
    const double limit = strict ? 0.5 : 1.0;
    if (!(delta_over_gamma < limit)) {
        throw DomainError("delta/gamma = " + std::to_string(delta_over_gamma) +
                          " is outside the elastic regime (must be < " +
                          std::to_string(limit) + ")");
    }
    ModelParams p;
    p.delta = delta_over_gamma;
    p.gamma = 1.0;
    p.epsilon = epsilon;
    p.validate();
    return p;
}

double ModelParams::omega_plus() const {
    if (!omega) throw DomainError("carrier frequency omega is not set");
    return *omega + delta / 2.0;
}

double ModelParams::omega_minus() const {
    if (!omega) throw DomainError("carrier frequency omega is not set");
    return *omega - delta / 2.0;
}

void ModelParams::validate() const {
    if (!std::isfinite(delta) || delta < 0.0) {
        throw DomainError("delta must be finite and non-negative");
    }
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw DomainError("gamma must be finite and positive");
    }
    if (!(epsilon > 0.0 && epsilon <= kHalfPi)) {
        throw DomainError("epsilon must lie in (0, pi/2], got " + std::to_string(epsilon));
    }
}

}  // namespace veeww
