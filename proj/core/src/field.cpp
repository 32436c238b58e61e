#include "gcp/field.hpp"

#include <algorithm>
#include <string>

#include "gcp/csv.hpp"
#include "gcp/error.hpp"

namespace gcp::spatial {

Field::Field(Grid1D grid, int k)
    : grid_(grid), k_(k), values_((static_cast<std::size_t>(k) + 1) * grid.points(), 0.0) {
    if (k < 1) {
        throw DomainError("field requires k >= 1");
    }
}

Field::Field(Grid1D grid, int k, std::vector<double> values) : grid_(grid), k_(k), values_(std::move(values)) {
    if (k < 1) {
        throw DomainError("field requires k >= 1");
    }
    if (values_.size() != (static_cast<std::size_t>(k) + 1) * grid.points()) {
        throw DomainError("field values must have (k+1) * n entries");
    }
}

std::span<double> Field::row(int j) {
    return std::span<double>(values_).subspan(index(j, 0), grid_.points());
}

std::span<const double> Field::row(int j) const {
    return std::span<const double>(values_).subspan(index(j, 0), grid_.points());
}

InvariantSummary Field::simplex_summary() const {
    InvariantSummary summary;
    const std::size_t n = points();
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        double lowest = at(0, i);
        for (int j = 0; j <= k_; ++j) {
            const double v = at(j, i);
            sum += v;
            lowest = std::min(lowest, v);
        }
        summary.observe(sum, lowest);
    }
    return summary;
}

Field uniform_field(const Grid1D& grid, const PopulationState& state) {
    Field field(grid, state.stages());
    for (int j = 0; j <= state.stages(); ++j) {
        std::fill(field.row(j).begin(), field.row(j).end(), state[static_cast<std::size_t>(j)]);
    }
    return field;
}

void write_field_header(std::ostream& out, int k) {
    std::vector<std::string> columns{"t", "x"};
    for (int j = 0; j <= k; ++j) {
        columns.push_back("v_" + std::to_string(j));
    }
    csv::write_header(out, columns);
}

void write_field_rows(std::ostream& out, double t, const Field& field) {
    const int k = field.stages();
    std::vector<double> row(static_cast<std::size_t>(k) + 3);
    for (std::size_t i = 0; i < field.points(); ++i) {
        row[0] = t;
        row[1] = field.grid().x(i);
        for (int j = 0; j <= k; ++j) {
            row[static_cast<std::size_t>(j) + 2] = field.at(j, i);
        }
        csv::write_row(out, row);
    }
}

}  // namespace gcp::spatial
