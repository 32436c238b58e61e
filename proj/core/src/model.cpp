#include "gcp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gcp/error.hpp"

namespace gcp {

ModelParams::ModelParams(int k, double lambda) : k_(k), lambda_(lambda) {
    if (k < 1) {
        throw DomainError("model.k must be >= 1 (got " + std::to_string(k) + ")");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        std::ostringstream msg;
        msg << "model.lambda must be a finite value > 0 (got " << lambda << ")";
        throw DomainError(msg.str());
    }
}

PopulationState::PopulationState(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw DomainError("population state needs at least two components (k >= 1)");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < values_.size(); ++j) {
        const double v = values_[j];
        if (!std::isfinite(v) || v < -kNegativeTolerance) {
            std::ostringstream msg;
            msg << "population state component v_" << j << " = " << v << " is negative";
            throw DomainError(msg.str());
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "population state must sum to 1 (sum = " << sum << ")";
        throw DomainError(msg.str());
    }
}

PopulationState sustaining_state(const ModelParams& params) {
    if (!params.has_sustaining_state()) {
        throw DomainError("sustaining state requires lambda > 1");
    }
    std::vector<double> v(static_cast<std::size_t>(params.k()) + 1, params.sustaining_inactive());
    // Complement rather than (lambda-1)/lambda so the sum is exactly 1 in floating point.
    v.back() = 1.0 - std::accumulate(v.begin(), v.end() - 1, 0.0);
    return PopulationState(std::move(v));
}

PopulationState inert_state(int k) {
    if (k < 1) {
        throw DomainError("inert state requires k >= 1");
    }
    std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
    v.front() = 1.0;
    return PopulationState(std::move(v));
}

void require_matching_stages(const ModelParams& params, const PopulationState& state) {
    if (state.stages() != params.k()) {
        std::ostringstream msg;
        msg << "population state has " << state.size() << " components but k = " << params.k()
            << " needs " << params.k() + 1;
        throw DomainError(msg.str());
    }
}

void InvariantSummary::observe(double column_sum, double column_min) noexcept {
    max_sum_deviation = std::max(max_sum_deviation, std::abs(column_sum - 1.0));
    min_component = std::min(min_component, column_min);
}

void InvariantSummary::merge(const InvariantSummary& other) noexcept {
    max_sum_deviation = std::max(max_sum_deviation, other.max_sum_deviation);
    min_component = std::min(min_component, other.min_component);
}

bool InvariantSummary::within(double sum_tolerance, double negative_tolerance) const noexcept {
    return max_sum_deviation <= sum_tolerance && min_component >= -negative_tolerance;
}

}  // namespace gcp
