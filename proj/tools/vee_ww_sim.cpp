// vee-ww-sim: sweeps and cross-checks for the post-selected
// Weisskopf-Wigner model of a V-type atom.
//
//   vee-ww-sim <mode> [--config file.json] [--preset delta-0.1|delta-0.01] [overrides]
//
// Modes: weak-value, tau-curve, evolve, mc, compare.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "veeww/sweep/config.hpp"
#include "veeww/sweep/run.hpp"

using namespace veeww::sweep;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Post-selected Weisskopf-Wigner simulator for a V-type atom"};

    std::string mode_name;
    std::string config_path;
    std::string preset_name;
    std::optional<double> delta_over_gamma;
    std::optional<double> epsilon;
    std::string form;
    std::string out_path;
    std::string svg_path;
    std::string method;
    std::string model;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::optional<unsigned> workers;

    app.add_option("mode", mode_name, "weak-value | tau-curve | evolve | mc | compare")
        ->required();
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--preset", preset_name, "built-in configuration (delta-0.1, delta-0.01)");
    app.add_option("--delta-over-gamma", delta_over_gamma, "splitting ratio Delta/Gamma");
    app.add_option("--epsilon", epsilon, "post-selection angle (rad)");
    app.add_option("--form", form, "rate form: cot | small");
    app.add_option("--out", out_path, "output path (default: stdout)");
    app.add_option("--svg", svg_path, "tau-curve SVG rendering path");
    app.add_option("--method", method, "evolve method: modes | kernel | markov");
    app.add_option("--model", model, "mc model: markov | conditional");
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--n", n, "Monte Carlo sample count");
    app.add_option("--workers", workers, "compare-mode worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        nlohmann::json j = nlohmann::json::object();
        if (!config_path.empty()) {
            try {
                j = nlohmann::json::parse(read_file(config_path));
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            if (!j.is_object()) throw ConfigError("config must be a JSON object");
        }
        if (!preset_name.empty()) j["preset"] = preset_name;
        j["mode"] = mode_name;
        if (delta_over_gamma) {
            if (j.contains("si")) throw ConfigError("--delta-over-gamma conflicts with an si block");
            j["params"]["delta_over_gamma"] = *delta_over_gamma;
        }
        if (epsilon) {
            if (j.contains("si")) j["si"]["epsilon"] = *epsilon;
            else j["params"]["epsilon"] = *epsilon;
        }
        if (!form.empty()) j["form"] = form;
        if (!out_path.empty()) j["output"]["path"] = out_path;
        if (!svg_path.empty()) j["output"]["svg_path"] = svg_path;
        if (!method.empty()) j["bath"]["method"] = method;
        if (!model.empty()) j["mc"]["model"] = model;
        if (seed) j["mc"]["seed"] = *seed;
        if (n) j["mc"]["n"] = *n;
        if (workers) j["workers"] = *workers;

        const RunConfig config = parse_config(j);
        return run(config, std::cout, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}
