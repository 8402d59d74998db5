#include "veeww/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "veeww/errors.hpp"

namespace veeww::io {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

void write_comments(std::ostream& out, std::span<const std::string> comments) {
    for (const std::string& line : comments) out << "# " << line << '\n';
}

void write_trajectory_csv(std::ostream& out, const AmplitudeTrajectory& trajectory,
                          double time_unit, std::span<const std::string> comments) {
    write_comments(out, comments);
    out << kTrajectoryHeader << '\n';
    for (std::size_t j = 0; j < trajectory.size(); ++j) {
        out << format_double(trajectory.times[j] / time_unit) << ','
            << format_double(trajectory.alpha[j].real()) << ','
            << format_double(trajectory.alpha[j].imag()) << ','
            << format_double(trajectory.survival[j]) << '\n';
    }
}

void write_samples_csv(std::ostream& out, std::span<const double> samples,
                       std::span<const std::string> comments) {
    write_comments(out, comments);
    out << kSamplesHeader << '\n';
    for (double x : samples) out << format_double(x) << '\n';
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            throw DomainError("CSV must use LF line endings");
        }
        if (!have_header) {
            if (line.rfind('#', 0) == 0) {
                table.comments.push_back(line.size() > 2 ? line.substr(2) : std::string{});
                continue;
            }
            table.header = split(line);
            have_header = true;
            continue;
        }
        if (line.empty()) continue;
        auto row = split(line);
        if (row.size() != table.header.size()) {
            throw DomainError("ragged CSV row: " + line);
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw DomainError("CSV has no header row");
    return table;
}

}  // namespace veeww::io
