#include "gcp/initial_condition.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gcp/error.hpp"

namespace gcp::spatial {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class Blend>
Field blended(const ModelParams& params, const Grid1D& grid, Blend&& blend) {
    const PopulationState bar = sustaining_state(params);
    const int k = params.k();
    Field field(grid, k);
    for (std::size_t i = 0; i < grid.points(); ++i) {
        const double s = blend(grid.x(i));
        double inactive = 0.0;
        for (int j = 0; j < k; ++j) {
            const double v = s * bar[static_cast<std::size_t>(j)] + (j == 0 ? 1.0 - s : 0.0);
            field.at(j, i) = v;
            inactive += v;
        }
        field.at(k, i) = 1.0 - inactive;
    }
    return field;
}

double cosine_mode(const Grid1D& grid, int mode, std::size_t i) {
    return std::cos(2.0 * std::numbers::pi * mode * grid.x(i) / grid.length());
}

void validate(const Field& field) {
    const InvariantSummary summary = field.simplex_summary();
    if (!summary.within(kSimplexSumTolerance, kNegativeTolerance)) {
        std::ostringstream msg;
        msg << "initial condition leaves the simplex (max sum deviation " << summary.max_sum_deviation
            << ", min component " << summary.min_component << ")";
        throw DomainError(msg.str());
    }
}

}  // namespace

Field make_field(const InitialCondition& ic, const ModelParams& params, const Grid1D& grid) {
    const int k = params.k();
    Field field = std::visit(
        overloaded{
            [&](const UniformIc& u) {
                const PopulationState state(u.v);
                require_matching_stages(params, state);
                return uniform_field(grid, state);
            },
            [&](const StepIc& s) { return blended(params, grid, [&](double x) { return x < s.x0 ? 1.0 : 0.0; }); },
            [&](const TanhIc& t) {
                if (!(t.alpha > 0.0)) {
                    throw DomainError("tanh initial condition needs alpha > 0");
                }
                return blended(params, grid,
                               [&](double x) { return 0.5 * (1.0 - std::tanh(t.alpha * (x - t.x0))); });
            },
            [&](const PlugIc& p) {
                if (!(p.width >= 0.0)) {
                    throw DomainError("plug width must be >= 0");
                }
                return blended(params, grid,
                               [&](double x) { return std::abs(x - p.center) < 0.5 * p.width ? 1.0 : 0.0; });
            },
            [&](const PerturbedIc& p) {
                const PopulationState base(p.base);
                require_matching_stages(params, base);
                Field f = uniform_field(grid, base);
                for (std::size_t i = 0; i < grid.points(); ++i) {
                    const double delta = p.amplitude * (p.offset + cosine_mode(grid, p.mode, i));
                    f.at(k, i) += delta;
                    f.at(0, i) -= delta;
                }
                return f;
            },
        },
        ic);
    validate(field);
    return field;
}

std::vector<double> make_profile(const InitialCondition& ic, const Grid1D& grid) {
    std::vector<double> out(grid.points());
    if (const auto* u = std::get_if<UniformIc>(&ic)) {
        if (u->v.size() != 1) {
            throw DomainError("scalar profile from a uniform initial condition needs exactly one value");
        }
        std::fill(out.begin(), out.end(), u->v[0]);
    } else if (const auto* p = std::get_if<PerturbedIc>(&ic)) {
        if (p->base.size() != 1) {
            throw DomainError("scalar profile from a perturbed initial condition needs a one-element base");
        }
        for (std::size_t i = 0; i < grid.points(); ++i) {
            out[i] = p->base[0] + p->amplitude * (p->offset + cosine_mode(grid, p->mode, i));
        }
    } else {
        throw DomainError("scalar profiles support only uniform and perturbed initial conditions");
    }
    return out;
}

}  // namespace gcp::spatial
