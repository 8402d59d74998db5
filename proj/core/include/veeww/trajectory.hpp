#pragma once

// Monte Carlo arrival-time statistics.
//
// Two models are provided side by side:
//  * the post-selected amplitude model, whose scattering-time density is
//    p(t) = Gamma_eff exp(-Gamma_eff t) and diverges at eps = Delta/Gamma;
//  * a quantum-jump conditional model in which |S> evolves under the
//    splitting Delta, decays at Gamma, and the photon is detected in the
//    eps-rotated state, p(t) ~ exp(-Gamma t) sin^2(eps - Delta t / 2).
// Neither is treated as the reference for the other.
//
// All times are reported in units of 1/Gamma.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "veeww/model.hpp"
#include "veeww/rng.hpp"

namespace veeww::trajectory {

using rng::RngSpec;

inline constexpr std::size_t kMinSamples = 100;

struct Histogram {
    std::vector<double> edges;  ///< n_bins + 1 edges, units of 1/Gamma
    std::vector<std::uint64_t> counts;
};

struct HistogramSpec {
    std::size_t n_bins = 50;
    double t_max = 0.0;  ///< upper edge; later samples land in the last bin
};

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(n)
    Histogram histogram;
    std::optional<double> acceptance_rate;  ///< rejection samplers only
};

/// Deterministic summary in index order. t_max <= 0 selects 10 * mean.
SampleSummary summarize(std::span<const double> samples,
                        HistogramSpec spec = {});

/// Pools two summaries over identical histogram edges. The pooled mean and
/// standard error use the pairwise update, so they are independent of merge
/// order up to rounding; counts merge exactly.
SampleSummary merge(const SampleSummary& a, const SampleSummary& b);

/// Inverse-transform draws from Gamma_eff exp(-Gamma_eff t), t in units of
/// 1/Gamma. Sample i depends only on (rng, i); `workers` splits the index
/// range across threads without changing the output.
/// Throws UnphysicalRegion or InsufficientSamples (n < 100).
std::vector<double> draw_scattering_times(const ModelParams& params, RateForm form,
                                          std::size_t n, RngSpec rng,
                                          unsigned workers = 1);

SampleSummary sample_scattering_times(const ModelParams& params, RateForm form,
                                      std::size_t n, RngSpec rng,
                                      unsigned workers = 1);

/// The quantum-jump conditional arrival model, normalized once on
/// construction by adaptive quadrature.
class ConditionalArrivalModel {
public:
    /// Needs t >= 0 domain parameters: delta >= 0, gamma > 0,
    /// eps in [0, pi/2], and a non-vanishing density.
    explicit ConditionalArrivalModel(const ModelParams& params);

    /// Normalized density at t (seconds in the units of 1/gamma).
    double density(double t) const;
    /// exp(-Gamma t) sin^2(eps - Delta t / 2), unnormalized.
    double unnormalized(double t) const noexcept;
    double normalization() const noexcept { return normalization_; }
    /// First moment of the normalized density.
    double mean() const noexcept { return mean_; }
    const ModelParams& params() const noexcept { return params_; }

private:
    ModelParams params_;
    double normalization_ = 0.0;
    double mean_ = 0.0;
};

double conditional_arrival_density(double t, const ModelParams& params);

struct ConditionalDraws {
    std::vector<double> samples;  ///< units of 1/Gamma
    std::uint64_t attempts = 0;
    double acceptance_rate() const noexcept {
        return attempts == 0 ? 0.0 : static_cast<double>(samples.size()) /
                                         static_cast<double>(attempts);
    }
};

/// Rejection sampling of the conditional density. Throws
/// InsufficientSamples, or EnvelopeViolation if an acceptance probability
/// ever exceeds one.
ConditionalDraws draw_conditional_arrivals(const ModelParams& params, std::size_t n,
                                           RngSpec rng, unsigned workers = 1);

SampleSummary sample_conditional_arrivals(const ModelParams& params, std::size_t n,
                                          RngSpec rng, unsigned workers = 1);

}  // namespace veeww::trajectory
