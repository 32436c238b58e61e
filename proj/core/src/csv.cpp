#include "gcp/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace gcp::csv {

std::string format(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

void write_header(std::ostream& out, std::initializer_list<std::string_view> columns) {
    bool first = true;
    for (const auto column : columns) {
        if (!first) {
            out << ',';
        }
        out << column;
        first = false;
    }
    out << '\n';
}

void write_header(std::ostream& out, std::span<const std::string> columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << columns[i];
    }
    out << '\n';
}

void write_row(std::ostream& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << format(values[i]);
    }
    out << '\n';
}

}  // namespace gcp::csv
