#include "cqom/cli/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace cqom::cli {

const char* const curve_header = "omega_rad_s,detuning_rad_s,delta_rad_s,lambda_rad_s,sf_s,channel_id";

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), end);
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

void write_curve_rows(std::ostream& out, const std::vector<CurveRow>& rows) {
    out << curve_header << '\n';
    for (const auto& r : rows) {
        out << cell(r.omega) << ',' << cell(r.detuning) << ',' << cell(r.delta) << ',' << cell(r.lambda) << ','
            << cell(r.sf) << ',' << quote(r.channel) << '\n';
    }
}

void Table::write(std::ostream& out) const {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << quote(header[i]);
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw std::logic_error("table row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote(row[i]);
        out << '\n';
    }
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
    f << contents;
    f.flush();
    if (!f) throw std::ios_base::failure("write to " + path + " failed");
}

} // namespace cqom::cli
