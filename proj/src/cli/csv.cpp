#include "cli/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fracmech::cli {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) throw std::runtime_error("float formatting failed");
    return {buf.data(), end};
}

std::string format_list(std::span<const double> xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_double(xs[i]);
    }
    return out;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& columns)
    : out_(out), width_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != width_) throw std::logic_error("CSV row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
    out_ << '\n';
}

}  // namespace fracmech::cli
