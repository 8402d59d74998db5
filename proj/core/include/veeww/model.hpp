#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

namespace veeww {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

/// Which closed form of the post-selected decay rate to use.
///   full_cot:      Gamma - Delta * cot(eps)
///   small_epsilon: Gamma - Delta / eps   (cot eps ~ 1/eps for eps << 1)
enum class RateForm { full_cot, small_epsilon };

std::string_view to_string(RateForm form) noexcept;
/// Accepts "cot", "full-cot", "small", "small-epsilon".
std::optional<RateForm> parse_rate_form(std::string_view text) noexcept;

/// Physical parameters of the V-type atom and its post-selection.
///
/// Rates are angular frequencies. Library code works in natural units where
/// gamma == 1 unless a caller supplies SI values explicitly; every operation
/// only depends on the ratios delta/gamma and t*gamma.
struct ModelParams {
    double delta = 0.0;    ///< excited-state splitting (rad/s)
    double gamma = 1.0;    ///< spontaneous decay rate (rad/s)
    double epsilon = kHalfPi;  ///< post-selection angle (rad)
    std::optional<double> omega;  ///< carrier frequency (rad/s), bath only

    /// Natural-unit parameters (gamma = 1) in the elastic regime.
    /// Refuses delta/gamma >= 1, or >= 0.5 when `strict` is set.
    static ModelParams elastic(double delta_over_gamma, double epsilon,
                               bool strict = false);

    double weakness() const noexcept { return delta / gamma; }
    double omega_plus() const;   ///< omega + delta/2, requires omega
    double omega_minus() const;  ///< omega - delta/2, requires omega

    /// delta >= 0, gamma > 0, 0 < epsilon <= pi/2. Throws DomainError.
    void validate() const;
};

/// Time series of the post-selected amplitude alpha(t).
struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<Complex> alpha;
    std::vector<double> survival;  ///< |alpha|^2

    std::size_t size() const noexcept { return times.size(); }
    void push_back(double t, Complex a) {
        times.push_back(t);
        alpha.push_back(a);
        survival.push_back(std::norm(a));
    }
};

}  // namespace veeww
