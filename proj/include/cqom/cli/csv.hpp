// csv.hpp: fixed-schema curve tables and small table writers

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cqom::cli {

// omega_rad_s, detuning_rad_s, delta_rad_s, lambda_rad_s, sf_s, channel_id
struct CurveRow {
    std::optional<double> omega;
    std::optional<double> detuning;
    std::optional<double> delta;
    std::optional<double> lambda;
    std::optional<double> sf;
    std::string channel;
};

extern const char* const curve_header;

// Shortest round-trip decimal form; identical input gives identical text.
std::string format_number(double v);

void write_curve_rows(std::ostream& out, const std::vector<CurveRow>& rows);

// Generic table: header names plus rows of pre-formatted cells.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& out) const;
};

// Writes atomically enough for our purposes: open, write, check the stream;
// throws std::ios_base::failure on any error.
void write_file(const std::string& path, const std::string& contents);

} // namespace cqom::cli
