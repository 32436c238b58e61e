#pragma once

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace gcp::csv {

/// Shortest round-trip decimal representation; identical bytes for identical doubles.
std::string format(double value);

void write_header(std::ostream& out, std::initializer_list<std::string_view> columns);
void write_header(std::ostream& out, std::span<const std::string> columns);

/// Writes the values comma-separated and terminates the row.
void write_row(std::ostream& out, std::span<const double> values);

}  // namespace gcp::csv
