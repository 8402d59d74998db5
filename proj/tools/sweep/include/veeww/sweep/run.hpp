#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "veeww/sweep/config.hpp"
#include "veeww/ww_markov.hpp"

namespace veeww::sweep {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitUnphysical = 3,
    kExitNumeric = 4,
};

/// Text of everything a run produces. Files are written by run().
struct Artifacts {
    std::string primary;  ///< CSV or JSON for the mode
    std::string summary;  ///< mc summary JSON (mc mode only)
    std::string svg;      ///< tau-curve rendering when requested
};

/// Computes the artifacts without touching the filesystem. Throws the
/// library's errors and ConfigError.
Artifacts produce(const RunConfig& config);

/// Produces and writes the artifacts; the primary artifact goes to `out`
/// when no output path is configured. Errors are reported on `err` and
/// mapped to exit codes: 2 config, 3 unphysical scalar request, 4 numeric.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// The "config: {...}" comment that heads every CSV artifact.
std::string config_echo(const RunConfig& config);

/// Recovers the configuration embedded in an artifact's header comment.
RunConfig config_from_artifact(const std::string& artifact);

/// Minimal SVG line plot of tau*Gamma against eps for the physical rows.
std::string render_tau_svg(std::span<const markov::TauRow> rows, double delta_over_gamma);

}  // namespace veeww::sweep
