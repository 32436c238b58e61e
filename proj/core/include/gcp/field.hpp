#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "gcp/grid.hpp"
#include "gcp/model.hpp"

namespace gcp::spatial {

/// Stage fractions on a periodic grid: row j holds v_j(x_i), i = 0..n-1.
class Field {
public:
    Field(Grid1D grid, int k);
    Field(Grid1D grid, int k, std::vector<double> values);

    const Grid1D& grid() const noexcept { return grid_; }
    int stages() const noexcept { return k_; }
    std::size_t points() const noexcept { return grid_.points(); }

    std::span<double> row(int j);
    std::span<const double> row(int j) const;

    double& at(int j, std::size_t i) { return values_[index(j, i)]; }
    double at(int j, std::size_t i) const { return values_[index(j, i)]; }

    std::span<double> data() noexcept { return values_; }
    std::span<const double> data() const noexcept { return values_; }

    /// Worst column-sum deviation and smallest component over all points.
    InvariantSummary simplex_summary() const;

private:
    std::size_t index(int j, std::size_t i) const noexcept {
        return static_cast<std::size_t>(j) * grid_.points() + i;
    }

    Grid1D grid_;
    int k_;
    std::vector<double> values_;
};

Field uniform_field(const Grid1D& grid, const PopulationState& state);

/// Snapshot rows t, x, v_0..v_k; call write_field_header once per file.
void write_field_header(std::ostream& out, int k);
void write_field_rows(std::ostream& out, double t, const Field& field);

}  // namespace gcp::spatial
