#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "veeww/bath.hpp"
#include "veeww/model.hpp"
#include "veeww/ww_markov.hpp"

namespace veeww::sweep {

/// Invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { weak_value, tau_curve, evolve, mc, compare };
enum class EvolveMethod { modes, kernel, markov };
enum class McModel { markov, conditional };

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view text) noexcept;

/// Natural units, Gamma = 1.
struct NaturalBlock {
    double delta_over_gamma = 0.1;
    double epsilon = 0.2;
};

/// SI parameters; Gamma follows from the dipole via gamma_from_dipole.
struct SiBlock {
    double omega = 0.0;  ///< rad/s
    double eta = 0.0;    ///< C m
    double delta = 0.0;  ///< rad/s
    double epsilon = 0.2;
    bath::FieldConstants constants;
};

struct GridSpec {
    std::vector<double> values;  ///< explicit list; wins over the range
    double min = 0.01;
    double max = kHalfPi;
    std::size_t count = 200;
    markov::Spacing spacing = markov::Spacing::log;

    std::vector<double> resolve() const;
};

struct BathBlock {
    double cutoff_over_gamma = bath::BathDefaults::cutoff_over_gamma;
    std::size_t n_modes = bath::BathDefaults::n_modes;
    double dt_gamma = 0.002;
    double t_end_gamma = 5.0;
    double omega_over_gamma = 1000.0;
    EvolveMethod method = EvolveMethod::modes;
    bool postselect = true;
};

struct McBlock {
    std::size_t n = 100000;
    std::uint64_t seed = 42;
    std::uint64_t stream = 0;
    McModel model = McModel::markov;
    std::size_t bins = 50;
};

struct OutputBlock {
    std::string path;          ///< empty: standard output
    std::string summary_path;  ///< mc summary JSON; defaults to <path>.summary.json
    std::string svg_path;      ///< optional tau-curve rendering
};

struct RunConfig {
    Mode mode = Mode::tau_curve;
    std::string preset;
    std::optional<NaturalBlock> params;
    std::optional<SiBlock> si;
    RateForm form = RateForm::small_epsilon;
    GridSpec grid;
    BathBlock bath;
    McBlock mc;
    OutputBlock output;
    unsigned workers = 1;  ///< grid-point worker pool for compare

    double delta_over_gamma() const;
    double epsilon() const;
    /// Gamma in rad/s when an SI block is present.
    std::optional<double> gamma_si() const;
    /// Natural-unit model parameters.
    ModelParams model() const;
};

/// Built-in named configurations: "delta-0.1" (Delta/Gamma = 0.1) and
/// "delta-0.01" (Delta/Gamma = 0.01), both tau-curve sweeps.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Parses and validates. Unknown keys are errors. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& json);
RunConfig parse_config_text(std::string_view text);

/// Fully resolved configuration, defaults included. parse_config(to_json(c))
/// reproduces c.
nlohmann::json to_json(const RunConfig& config);

/// Throws ConfigError.
void validate(const RunConfig& config);

}  // namespace veeww::sweep
