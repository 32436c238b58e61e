#pragma once

#include <variant>
#include <vector>

#include "gcp/field.hpp"
#include "gcp/grid.hpp"
#include "gcp/model.hpp"

namespace gcp::spatial {

// Shapes mixing the sustaining state (for lambda > 1) with the inert state
// (1, 0, ..., 0) use a blend weight s(x) in [0, 1]: v(x) = s v_bar + (1 - s) e_0.

/// Same state at every point.
struct UniformIc {
    std::vector<double> v;
};

/// Sustaining state for x < x0, inert for x >= x0.
struct StepIc {
    double x0 = 0.0;
};

/// Delta-kernel traveling-wave profile: s(x) = [1 - tanh(alpha (x - x0))] / 2.
struct TanhIc {
    double alpha = 0.1;
    double x0 = 0.0;
};

/// Sustaining state on |x - center| < width / 2, inert elsewhere.
struct PlugIc {
    double width = 1.0;
    double center = 0.0;
};

/// base + amplitude (offset + cos(2 pi mode x / L)) added to v_k and removed from v_0.
struct PerturbedIc {
    std::vector<double> base;
    double amplitude = 0.0;
    int mode = 1;
    double offset = 0.0;
};

using InitialCondition = std::variant<UniformIc, StepIc, TanhIc, PlugIc, PerturbedIc>;

/// Builds and validates the field; throws DomainError if any point leaves the simplex.
Field make_field(const InitialCondition& ic, const ModelParams& params, const Grid1D& grid);

/// Scalar profile base[0] + amplitude (offset + cos(2 pi mode x / L)), used for
/// the stationary R iteration where only one component exists.
std::vector<double> make_profile(const InitialCondition& ic, const Grid1D& grid);

}  // namespace gcp::spatial
