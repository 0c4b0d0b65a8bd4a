#pragma once

// Plain CSV output: header row, ',' separator, LF line endings, and floats
// in the shortest form that reads back to the same double.

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace fracmech::cli {

std::string format_double(double x);

/// Comma-joined shortest representations, as accepted by list flags.
std::string format_list(std::span<const double> xs);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& columns);

    void row(std::span<const double> values);

private:
    std::ostream& out_;
    std::size_t width_;
};

}  // namespace fracmech::cli
