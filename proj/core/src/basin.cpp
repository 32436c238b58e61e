#include "gcp/basin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gcp/csv.hpp"
#include "gcp/error.hpp"
#include "gcp/parallel.hpp"

namespace gcp::uniform {

BasinMap::BasinMap(double lambda, int resolution, std::vector<BasinCell> cells)
    : lambda_(lambda), resolution_(resolution), cells_(std::move(cells)) {
    if (cells_.size() != cell_count(resolution)) {
        throw DomainError("basin map cell count does not match its resolution");
    }
}

std::size_t BasinMap::cell_count(int resolution) {
    const auto n = static_cast<std::size_t>(resolution);
    return n * (n + 1) / 2;
}

std::size_t BasinMap::offset(int resolution, int i, int j) {
    // Row i holds resolution - i cells.
    const auto n = static_cast<std::size_t>(resolution);
    const auto ii = static_cast<std::size_t>(i);
    return ii * n - ii * (ii - (ii > 0 ? 1 : 0)) / 2 + static_cast<std::size_t>(j);
}

const BasinCell& BasinMap::at(int i, int j) const {
    if (i < 0 || j < 0 || i + j > resolution_ - 1) {
        std::ostringstream msg;
        msg << "basin cell (" << i << ", " << j << ") is outside the simplex";
        throw DomainError(msg.str());
    }
    return cells_[offset(resolution_, i, j)];
}

const BasinCell& BasinMap::cell_containing(double v0, double v1) const {
    const auto index = [this](double v) {
        return std::clamp(static_cast<int>(std::floor(v * resolution_)), 0, resolution_ - 1);
    };
    return at(index(v0), index(v1));
}

std::size_t BasinMap::count(BasinOutcome outcome) const {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [outcome](const BasinCell& c) { return c.outcome == outcome; }));
}

BasinMap basin_map(double lambda, int resolution, int threads, const ClassifyOptions& options) {
    if (!(lambda > 1.0)) {
        throw DomainError("basin_map requires lambda > 1 (otherwise every state goes extinct)");
    }
    if (resolution < 2) {
        throw DomainError("basin_map requires resolution >= 2");
    }
    const ModelParams params(2, lambda);
    std::vector<BasinCell> cells(BasinMap::cell_count(resolution));
    const double res = resolution;
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; i + j <= resolution - 1; ++j) {
            BasinCell& cell = cells[BasinMap::offset(resolution, i, j)];
            cell.i = i;
            cell.j = j;
            cell.v0 = (i + 0.5) / res;
            cell.v1 = (j + 0.5) / res;
        }
    }

    WorkerPool pool(threads);
    pool.parallel_for(cells.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            BasinCell& cell = cells[c];
            cell.r0 = std::numeric_limits<double>::infinity();
            if (cell.i + cell.j + 1 == resolution) {
                cell.outcome = BasinOutcome::boundary;
                continue;
            }
            const PopulationState state({cell.v0, cell.v1, 1.0 - cell.v0 - cell.v1});
            const Classification cls = classify(params, state, options);
            if (cls.is_extinct()) {
                cell.outcome = BasinOutcome::extinct;
                cell.r0 = cls.r0;
            } else {
                cell.outcome = BasinOutcome::sustaining;
            }
        }
    });
    return BasinMap(lambda, resolution, std::move(cells));
}

void write_csv(const BasinMap& map, std::ostream& out) {
    csv::write_header(out, {"v0_init", "v1_init", "outcome", "r0"});
    for (const BasinCell& cell : map.cells()) {
        out << csv::format(cell.v0) << ',' << csv::format(cell.v1) << ',' << static_cast<int>(cell.outcome) << ',';
        if (cell.outcome == BasinOutcome::extinct) {
            out << csv::format(cell.r0);
        }
        out << '\n';
    }
}

}  // namespace gcp::uniform
