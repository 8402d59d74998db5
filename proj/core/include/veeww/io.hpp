#pragma once

// Plain-text exports. CSV uses '.' decimals, LF line endings and a mandatory
// header row; lines starting with '#' before the header are comments.
// Doubles are written in shortest round-trip form.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "veeww/model.hpp"

namespace veeww::io {

std::string format_double(double value);

inline constexpr std::string_view kTrajectoryHeader = "t,alpha_re,alpha_im,survival";
inline constexpr std::string_view kSamplesHeader = "t_over_gamma_inv";

/// Each comment line is written as "# <line>".
void write_comments(std::ostream& out, std::span<const std::string> comments);

/// Times are divided by `time_unit` (pass 1/Gamma to export t in 1/Gamma).
void write_trajectory_csv(std::ostream& out, const AmplitudeTrajectory& trajectory,
                          double time_unit = 1.0,
                          std::span<const std::string> comments = {});

void write_samples_csv(std::ostream& out, std::span<const double> samples,
                       std::span<const std::string> comments = {});

struct CsvTable {
    std::vector<std::string> comments;  ///< without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Splits on ',' with no quoting. Throws DomainError on ragged rows or a
/// missing header.
CsvTable read_csv(std::istream& in);

}  // namespace veeww::io
