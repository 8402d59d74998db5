#include "veeww/sweep/run.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "veeww/bath.hpp"
#include "veeww/errors.hpp"
#include "veeww/io.hpp"
#include "veeww/qstate.hpp"
#include "veeww/trajectory.hpp"

namespace veeww::sweep {

using nlohmann::json;

namespace {

constexpr std::string_view kEchoPrefix = "config: ";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) { return io::format_double(v); }

std::vector<std::string> header_comments(const RunConfig& config) {
    std::vector<std::string> lines{config_echo(config)};
    lines.push_back("units: eps in rad, times in 1/Gamma, rates in Gamma");
    if (const auto g = config.gamma_si()) {
        lines.push_back("si: Gamma = " + fmt(*g) + " rad/s");
    }
    return lines;
}

std::string weak_value_artifact(const RunConfig& config) {
    const double eps = config.epsilon();
    const auto result = qstate::weak_value(qstate::sigma_z(), qstate::symmetric_state(),
                                           qstate::postselect_state(eps));
    json j;
    j["epsilon"] = eps;
    j["re"] = result.value.real();
    j["im"] = result.value.imag();
    j["overlap_re"] = result.overlap.real();
    j["overlap_im"] = result.overlap.imag();
    j["config"] = to_json(config);
    return j.dump(2) + "\n";
}

std::string tau_curve_artifact(const RunConfig& config, std::string* svg) {
    const std::vector<double> grid = config.grid.resolve();
    const double ratio = config.delta_over_gamma();
    const std::vector<markov::TauRow> rows = markov::tau_curve(ratio, grid, config.form);
    const auto gamma_si = config.gamma_si();

    std::ostringstream out;
    io::write_comments(out, header_comments(config));
    out << "epsilon,tau_gamma,rate_over_gamma,physical";
    if (gamma_si) out << ",tau_s,rate_per_s";
    out << '\n';
    for (const auto& row : rows) {
        out << fmt(row.epsilon) << ',' << fmt(row.tau_gamma) << ',' << fmt(row.rate_over_gamma)
            << ',' << (row.physical ? 1 : 0);
        if (gamma_si) {
            out << ',' << fmt(row.tau_gamma / *gamma_si) << ','
                << fmt(row.rate_over_gamma * *gamma_si);
        }
        out << '\n';
    }
    if (svg != nullptr && !config.output.svg_path.empty()) {
        *svg = render_tau_svg(rows, ratio);
        const std::string marker = "<svg ";
        svg->insert(svg->find(marker), "<!-- " + config_echo(config) + " -->\n");
    }
    return out.str();
}

bath::BathGrid make_bath(const RunConfig& config) {
    const auto& b = config.bath;
    return bath::build_bath(1.0, b.omega_over_gamma, b.cutoff_over_gamma, b.n_modes);
}

std::string evolve_artifact(const RunConfig& config) {
    const ModelParams params = config.model();
    AmplitudeTrajectory traj;
    switch (config.bath.method) {
    case EvolveMethod::markov:
        traj = markov::markov_trajectory(params, config.form,
                                         {config.bath.dt_gamma, config.bath.t_end_gamma});
        break;
    case EvolveMethod::modes:
    case EvolveMethod::kernel: {
        const bath::BathGrid grid = make_bath(config);
        const bath::EvolveOptions options{config.bath.t_end_gamma, config.bath.dt_gamma,
                                          config.bath.postselect, config.form};
        traj = config.bath.method == EvolveMethod::modes
                   ? bath::evolve_modes(grid, params, options)
                   : bath::evolve_kernel(grid, params, options);
        break;
    }
    }

    std::ostringstream out;
    const auto gamma_si = config.gamma_si();
    if (!gamma_si) {
        io::write_trajectory_csv(out, traj, 1.0, header_comments(config));
        return out.str();
    }
    io::write_comments(out, header_comments(config));
    out << io::kTrajectoryHeader << ",t_s\n";
    for (std::size_t j = 0; j < traj.size(); ++j) {
        out << fmt(traj.times[j]) << ',' << fmt(traj.alpha[j].real()) << ','
            << fmt(traj.alpha[j].imag()) << ',' << fmt(traj.survival[j]) << ','
            << fmt(traj.times[j] / *gamma_si) << '\n';
    }
    return out.str();
}

json summary_json(const trajectory::SampleSummary& s, const RunConfig& config) {
    json j;
    j["n"] = s.n;
    j["mean"] = s.mean;
    j["stderr"] = s.std_error;
    j["bins"] = s.histogram.edges;
    j["counts"] = s.histogram.counts;
    if (s.acceptance_rate) j["acceptance_rate"] = *s.acceptance_rate;
    if (const auto g = config.gamma_si()) {
        j["mean_s"] = s.mean / *g;
        j["stderr_s"] = s.std_error / *g;
    }
    j["config"] = to_json(config);
    return j;
}

void mc_artifacts(const RunConfig& config, Artifacts& artifacts) {
    const ModelParams params = config.model();
    const rng::RngSpec spec{config.mc.seed, config.mc.stream};
    std::vector<double> samples;
    trajectory::SampleSummary summary;
    trajectory::HistogramSpec hist{config.mc.bins, 0.0};
    if (config.mc.model == McModel::markov) {
        samples = trajectory::draw_scattering_times(params, config.form, config.mc.n, spec);
        hist.t_max = 10.0 * markov::mean_scattering_time(params, config.form).tau;
        summary = trajectory::summarize(samples, hist);
    } else {
        const auto draws = trajectory::draw_conditional_arrivals(params, config.mc.n, spec);
        hist.t_max = 10.0 * trajectory::ConditionalArrivalModel(params).mean();
        summary = trajectory::summarize(draws.samples, hist);
        summary.acceptance_rate = draws.acceptance_rate();
        samples = draws.samples;
    }
    std::ostringstream out;
    io::write_samples_csv(out, samples, header_comments(config));
    artifacts.primary = out.str();
    artifacts.summary = summary_json(summary, config).dump(2) + "\n";
}

struct CompareRow {
    double epsilon = 0.0;
    double rate_markov = kNaN;
    double rate_bath_fit = kNaN;
    double tau_markov = kNaN;
    double tau_mc = kNaN;
    double tau_mc_stderr = kNaN;
    double tau_conditional = kNaN;
    bool physical = false;
};

CompareRow compare_point(const RunConfig& config, const bath::BathGrid& grid, double eps,
                         std::size_t index) {
    ModelParams params = config.model();
    params.epsilon = eps;
    CompareRow row;
    row.epsilon = eps;
    row.rate_markov = markov::effective_rate(params, config.form);
    row.physical = row.rate_markov > 0.0;
    row.tau_conditional = trajectory::ConditionalArrivalModel(params).mean();
    if (!row.physical) {
        row.tau_markov = std::numeric_limits<double>::infinity();
        return row;
    }
    row.tau_markov = 1.0 / row.rate_markov;

    // Fit window [0.5, 3] / Gamma_eff has to fit inside the 10/Gamma horizon.
    const double t_hi = 3.0 / row.rate_markov;
    if (t_hi <= 10.0) {
        const double dt = config.bath.dt_gamma;
        const double t_end = std::min(10.0, std::ceil(t_hi / dt) * dt);
        const bath::EvolveOptions options{t_end, dt, config.bath.postselect, config.form};
        const AmplitudeTrajectory traj = bath::evolve_modes(grid, params, options);
        row.rate_bath_fit = bath::fit_decay_rate(traj, 0.5 / row.rate_markov, t_hi);
    }

    const auto summary = trajectory::sample_scattering_times(
        params, config.form, config.mc.n, {config.mc.seed, config.mc.stream + index});
    row.tau_mc = summary.mean;
    row.tau_mc_stderr = summary.std_error;
    return row;
}

std::string compare_artifact(const RunConfig& config) {
    const std::vector<double> eps_grid = config.grid.resolve();
    const bath::BathGrid grid = make_bath(config);
    std::vector<CompareRow> rows(eps_grid.size());
    std::vector<std::exception_ptr> errors(eps_grid.size());

    unsigned workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(eps_grid.size())));
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < eps_grid.size(); i = next++) {
            try {
                rows[i] = compare_point(config, grid, eps_grid[i], i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    const auto rel = [](double value, double reference) {
        return std::isfinite(value) && std::isfinite(reference) ? (value - reference) / reference
                                                                : kNaN;
    };
    std::ostringstream out;
    io::write_comments(out, header_comments(config));
    out << "epsilon,rate_markov,rate_bath_fit,rate_bath_rel_dev,tau_markov,tau_mc,"
           "tau_mc_stderr,tau_mc_rel_dev,tau_conditional,physical\n";
    for (const CompareRow& r : rows) {
        out << fmt(r.epsilon) << ',' << fmt(r.rate_markov) << ',' << fmt(r.rate_bath_fit) << ','
            << fmt(rel(r.rate_bath_fit, r.rate_markov)) << ',' << fmt(r.tau_markov) << ','
            << fmt(r.tau_mc) << ',' << fmt(r.tau_mc_stderr) << ','
            << fmt(rel(r.tau_mc, r.tau_markov)) << ',' << fmt(r.tau_conditional) << ','
            << (r.physical ? 1 : 0) << '\n';
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << content;
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

std::string config_echo(const RunConfig& config) {
    return std::string(kEchoPrefix) + to_json(config).dump();
}

RunConfig config_from_artifact(const std::string& artifact) {
    const auto first = artifact.find_first_not_of(" \n\t");
    if (first != std::string::npos && artifact[first] == '{') {
        const json j = json::parse(artifact);
        return parse_config(j.at("config"));
    }
    std::istringstream in(artifact);
    const io::CsvTable table = io::read_csv(in);
    for (const std::string& line : table.comments) {
        if (line.rfind(kEchoPrefix, 0) == 0) {
            return parse_config_text(std::string_view(line).substr(kEchoPrefix.size()));
        }
    }
    throw ConfigError("artifact carries no config echo");
}

Artifacts produce(const RunConfig& config) {
    validate(config);
    Artifacts artifacts;
    switch (config.mode) {
    case Mode::weak_value: artifacts.primary = weak_value_artifact(config); break;
    case Mode::tau_curve: artifacts.primary = tau_curve_artifact(config, &artifacts.svg); break;
    case Mode::evolve: artifacts.primary = evolve_artifact(config); break;
    case Mode::mc: mc_artifacts(config, artifacts); break;
    case Mode::compare: artifacts.primary = compare_artifact(config); break;
    }
    return artifacts;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Artifacts artifacts;
    try {
        artifacts = produce(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnphysicalRegion& e) {
        err << "unphysical region: " << e.what() << '\n';
        return kExitUnphysical;
    } catch (const OrthogonalPrePost& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }

    try {
        const auto& o = config.output;
        if (config.mode == Mode::mc) {
            if (!o.path.empty()) {
                write_file(o.path, artifacts.primary);
                write_file(o.summary_path.empty() ? o.path + ".summary.json" : o.summary_path,
                           artifacts.summary);
            } else if (!o.summary_path.empty()) {
                out << artifacts.primary;
                write_file(o.summary_path, artifacts.summary);
            } else {
                out << artifacts.summary;
            }
        } else if (!o.path.empty()) {
            write_file(o.path, artifacts.primary);
        } else {
            out << artifacts.primary;
        }
        if (!artifacts.svg.empty()) write_file(o.svg_path, artifacts.svg);
    } catch (const std::exception& e) {
        err << "output error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

std::string render_tau_svg(std::span<const markov::TauRow> rows, double delta_over_gamma) {
    constexpr double width = 640.0, height = 400.0, margin = 50.0;
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_hi = 0.0;
    for (const auto& r : rows) {
        if (!r.physical || !std::isfinite(r.tau_gamma)) continue;
        x_lo = std::min(x_lo, r.epsilon);
        x_hi = std::max(x_hi, r.epsilon);
        y_hi = std::max(y_hi, std::log10(r.tau_gamma));
    }
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">epsilon (rad)</text>\n"
        << "<text x=\"14\" y=\"" << height / 2 << "\" font-size=\"14\" transform=\"rotate(-90 14 "
        << height / 2 << ")\" text-anchor=\"middle\">log10(tau Gamma)</text>\n"
        << "<text x=\"" << width - margin << "\" y=\"" << margin - 10
        << "\" text-anchor=\"end\" font-size=\"12\">Delta/Gamma = " << fmt(delta_over_gamma)
        << "</text>\n";
    if (x_hi > x_lo) {
        if (!(y_hi > 0.0)) y_hi = 1.0;
        svg << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
        for (const auto& r : rows) {
            if (!r.physical || !std::isfinite(r.tau_gamma)) continue;
            const double x = margin + (r.epsilon - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
            const double y = height - margin -
                             std::log10(r.tau_gamma) / y_hi * (height - 2 * margin);
            svg << fmt(x) << ',' << fmt(y) << ' ';
        }
        svg << "\"/>\n";
        // tau Gamma = 1 baseline: no post-selection.
        svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
            << width - margin << "\" y2=\"" << height - margin
            << "\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace veeww::sweep
