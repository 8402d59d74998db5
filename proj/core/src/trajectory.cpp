#include "veeww/trajectory.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "veeww/errors.hpp"
#include "veeww/ww_markov.hpp"

namespace veeww::trajectory {

namespace {

void check_sample_count(std::size_t n) {
    if (n < kMinSamples) {
        throw InsufficientSamples("need at least " + std::to_string(kMinSamples) +
                                  " samples, got " + std::to_string(n));
    }
    if (n > std::numeric_limits<std::uint32_t>::max()) {
        throw DomainError("sample index space is 32 bits");
    }
}

// Runs body(begin, end, worker) over contiguous index blocks.
template <typename Body>
void parallel_blocks(std::size_t n, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || n < workers) {
        body(std::size_t{0}, n, 0u);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
    }
    for (auto& t : pool) t.join();
}

Histogram make_histogram(std::span<const double> samples, std::size_t n_bins, double t_max) {
    Histogram h;
    h.edges.resize(n_bins + 1);
    for (std::size_t b = 0; b <= n_bins; ++b) {
        h.edges[b] = t_max * static_cast<double>(b) / static_cast<double>(n_bins);
    }
    h.counts.assign(n_bins, 0);
    const double width = t_max / static_cast<double>(n_bins);
    for (double x : samples) {
        auto bin = static_cast<std::size_t>(std::max(0.0, x / width));
        h.counts[std::min(bin, n_bins - 1)] += 1;
    }
    return h;
}

SampleSummary summarize_with_edges(std::span<const double> samples, HistogramSpec spec,
                                   double default_t_max) {
    if (spec.t_max <= 0.0) spec.t_max = default_t_max;
    return summarize(samples, spec);
}

// Envelope for the conditional sampler. Either exp(-Gamma t), which
// dominates because sin^2 <= 1, or the polynomial bound
// (eps + Delta t/2)^2 exp(-Gamma t), which dominates because
// |sin x| <= |x| and |eps - Delta t/2| <= eps + Delta t/2. The polynomial
// envelope is a mixture of Gamma(1), Gamma(2) and Gamma(3) laws.
struct Envelope {
    bool polynomial = false;
    std::array<double, 3> cumulative{};  // mixture CDF over the three shapes
};

Envelope choose_envelope(const ModelParams& p) {
    const double g = p.gamma;
    const std::array<double, 3> mass = {p.epsilon * p.epsilon / g, p.epsilon * p.delta / (g * g),
                                        p.delta * p.delta / (2.0 * g * g * g)};
    const double total = mass[0] + mass[1] + mass[2];
    Envelope env;
    if (total < 1.0 / g) {
        env.polynomial = true;
        env.cumulative = {mass[0] / total, (mass[0] + mass[1]) / total, 1.0};
    }
    return env;
}

}  // namespace

SampleSummary summarize(std::span<const double> samples, HistogramSpec spec) {
    SampleSummary s;
    s.n = samples.size();
    if (s.n == 0) throw DomainError("cannot summarize an empty sample");
    if (spec.n_bins == 0) throw DomainError("histogram needs at least one bin");

    double sum = 0.0;
    for (double x : samples) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double x : samples) ss += (x - s.mean) * (x - s.mean);
    const double variance = s.n > 1 ? ss / static_cast<double>(s.n - 1) : 0.0;
    s.std_error = std::sqrt(variance / static_cast<double>(s.n));

    const double t_max = spec.t_max > 0.0 ? spec.t_max : 10.0 * s.mean;
    s.histogram = make_histogram(samples, spec.n_bins, t_max > 0.0 ? t_max : 1.0);
    return s;
}

SampleSummary merge(const SampleSummary& a, const SampleSummary& b) {
    if (a.histogram.edges != b.histogram.edges) {
        throw DomainError("cannot merge summaries with different histogram edges");
    }
    SampleSummary out;
    out.n = a.n + b.n;
    const double na = static_cast<double>(a.n);
    const double nb = static_cast<double>(b.n);
    const double n = static_cast<double>(out.n);
    out.mean = (na * a.mean + nb * b.mean) / n;
    // Sum of squared deviations, recovered from std_error = sd / sqrt(n).
    const double m2a = a.std_error * a.std_error * na * (na - 1.0);
    const double m2b = b.std_error * b.std_error * nb * (nb - 1.0);
    const double delta = b.mean - a.mean;
    const double m2 = m2a + m2b + delta * delta * na * nb / n;
    out.std_error = std::sqrt(m2 / (n - 1.0) / n);
    out.histogram.edges = a.histogram.edges;
    out.histogram.counts.resize(a.histogram.counts.size());
    for (std::size_t i = 0; i < out.histogram.counts.size(); ++i) {
        out.histogram.counts[i] = a.histogram.counts[i] + b.histogram.counts[i];
    }
    if (a.acceptance_rate && b.acceptance_rate) {
        const double attempts = na / *a.acceptance_rate + nb / *b.acceptance_rate;
        out.acceptance_rate = n / attempts;
    }
    return out;
}

std::vector<double> draw_scattering_times(const ModelParams& params, RateForm form,
                                          std::size_t n, RngSpec rng, unsigned workers) {
    check_sample_count(n);
    const double rate = markov::mean_scattering_time(params, form).effective_rate;
    const double scale = params.gamma / rate;  // mean in units of 1/Gamma
    std::vector<double> samples(n);
    parallel_blocks(n, workers, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            rng::CounterStream stream(rng, static_cast<std::uint32_t>(i));
            samples[i] = -std::log(stream.uniform()) * scale;
        }
    });
    return samples;
}

SampleSummary sample_scattering_times(const ModelParams& params, RateForm form, std::size_t n,
                                      RngSpec rng, unsigned workers) {
    const std::vector<double> samples = draw_scattering_times(params, form, n, rng, workers);
    const double tau_gamma = params.gamma * markov::mean_scattering_time(params, form).tau;
    return summarize_with_edges(samples, {}, 10.0 * tau_gamma);
}

ConditionalArrivalModel::ConditionalArrivalModel(const ModelParams& params) : params_(params) {
    if (!(params.gamma > 0.0) || !(params.delta >= 0.0) || !std::isfinite(params.delta)) {
        throw DomainError("conditional model needs gamma > 0 and delta >= 0");
    }
    if (!(params.epsilon >= 0.0 && params.epsilon <= kHalfPi)) {
        throw DomainError("epsilon must lie in [0, pi/2]");
    }
    boost::math::quadrature::exp_sinh<double> integrator;
    const double tol = 1e-13;
    const auto f = [this](double t) { return unnormalized(t); };
    const auto tf = [this](double t) { return t * unnormalized(t); };
    normalization_ = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), tol);
    const double first = integrator.integrate(tf, 0.0, std::numeric_limits<double>::infinity(), tol);
    if (!(normalization_ > 0.0) || !std::isfinite(normalization_)) {
        throw DomainError("conditional arrival density vanishes identically (eps = 0 and delta = 0)");
    }
    mean_ = first / normalization_;
}

double ConditionalArrivalModel::unnormalized(double t) const noexcept {
    const double s = std::sin(params_.epsilon - 0.5 * params_.delta * t);
    return std::exp(-params_.gamma * t) * s * s;
}

double ConditionalArrivalModel::density(double t) const {
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
    return unnormalized(t) / normalization_;
}

double conditional_arrival_density(double t, const ModelParams& params) {
    return ConditionalArrivalModel(params).density(t);
}

ConditionalDraws draw_conditional_arrivals(const ModelParams& params, std::size_t n, RngSpec rng,
                                           unsigned workers) {
    check_sample_count(n);
    const ConditionalArrivalModel model(params);
    const Envelope env = choose_envelope(params);
    const double g = params.gamma;
    const double eps = params.epsilon;
    const double half_delta = 0.5 * params.delta;
    // Bounds the number of blocks a CounterStream may use for one sample.
    constexpr std::uint64_t kMaxAttempts = 1u << 30;

    ConditionalDraws out;
    out.samples.resize(n);
    std::vector<std::uint64_t> attempts(std::max(1u, workers), 0);
    std::vector<std::exception_ptr> failures(attempts.size());

    parallel_blocks(n, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        try {
            std::uint64_t local = 0;
            for (std::size_t i = begin; i < end; ++i) {
                rng::CounterStream stream(rng, static_cast<std::uint32_t>(i));
                for (std::uint64_t attempt = 0;; ++attempt) {
                    if (attempt == kMaxAttempts) {
                        throw NumericError("rejection sampler made no progress");
                    }
                    ++local;
                    double t;
                    double bound;
                    if (env.polynomial) {
                        const double pick = stream.uniform();
                        const int shape = pick < env.cumulative[0] ? 1 : pick < env.cumulative[1] ? 2 : 3;
                        t = 0.0;
                        for (int k = 0; k < shape; ++k) t -= std::log(stream.uniform());
                        t /= g;
                        const double x = eps + half_delta * t;
                        bound = x * x;
                    } else {
                        t = -std::log(stream.uniform()) / g;
                        bound = 1.0;
                    }
                    const double s = std::sin(eps - half_delta * t);
                    const double accept = bound > 0.0 ? s * s / bound : 0.0;
                    if (accept > 1.0 + 1e-12) {
                        throw EnvelopeViolation("acceptance probability " + std::to_string(accept) +
                                                " exceeds one at t = " + std::to_string(t));
                    }
                    if (stream.uniform() < accept) {
                        out.samples[i] = t * g;
                        break;
                    }
                }
            }
            attempts[w] = local;
        } catch (...) {
            failures[w] = std::current_exception();
        }
    });
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    for (std::uint64_t a : attempts) out.attempts += a;
    return out;
}

SampleSummary sample_conditional_arrivals(const ModelParams& params, std::size_t n, RngSpec rng,
                                          unsigned workers) {
    const ConditionalDraws draws = draw_conditional_arrivals(params, n, rng, workers);
    const double mean_gamma = ConditionalArrivalModel(params).mean() * params.gamma;
    SampleSummary s = summarize_with_edges(draws.samples, {}, 10.0 * mean_gamma);
    s.acceptance_rate = draws.acceptance_rate();
    return s;
}

}  // namespace veeww::trajectory
