#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "gcp/uniform.hpp"

namespace gcp::uniform {

enum class BasinOutcome : int { sustaining = 0, extinct = 1, boundary = 2 };

struct BasinCell {
    int i = 0;  // v0 index
    int j = 0;  // v1 index
    double v0 = 0.0;
    double v1 = 0.0;
    BasinOutcome outcome = BasinOutcome::sustaining;
    double r0 = 0.0;  // root of phi for extinct cells, +inf otherwise
};

/// k = 2 initial conditions (v0(0), v1(0)) on a resolution x resolution grid
/// of the unit square, restricted to the cells whose centers satisfy
/// v0 + v1 <= 1. Centers on the diagonal have v2(0) = 0 and are marked
/// boundary: those states are frozen.
class BasinMap {
public:
    BasinMap(double lambda, int resolution, std::vector<BasinCell> cells);

    double lambda() const noexcept { return lambda_; }
    int resolution() const noexcept { return resolution_; }
    std::span<const BasinCell> cells() const noexcept { return cells_; }

    /// Cell with v0 index i and v1 index j; requires i + j <= resolution - 1.
    const BasinCell& at(int i, int j) const;
    /// Cell whose square contains (v0, v1).
    const BasinCell& cell_containing(double v0, double v1) const;

    std::size_t count(BasinOutcome outcome) const;

    static std::size_t cell_count(int resolution);
    static std::size_t offset(int resolution, int i, int j);

private:
    double lambda_;
    int resolution_;
    std::vector<BasinCell> cells_;
};

/// Classifies every cell center with the closed-form phi. Cells are
/// independent, so the map is identical for any thread count.
BasinMap basin_map(double lambda, int resolution, int threads = 1, const ClassifyOptions& options = {});

/// Columns v0_init, v1_init, outcome (0 sustaining, 1 extinct, 2 boundary), r0 (empty unless extinct).
void write_csv(const BasinMap& map, std::ostream& out);

}  // namespace gcp::uniform
