#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace gcp {

inline constexpr double kSimplexSumTolerance = 1e-12;
inline constexpr double kNegativeTolerance = 1e-9;

/// Number of stages k and coupling strength lambda. Every other quantity in
/// the model is a function of these two scalars.
class ModelParams {
public:
    ModelParams(int k, double lambda);

    int k() const noexcept { return k_; }
    double lambda() const noexcept { return lambda_; }

    /// Firing-driven transition rate k*lambda.
    double rate() const noexcept { return k_ * lambda_; }

    /// Sustaining fixed point: v_j = 1/(lambda k) for j < k, v_k = (lambda-1)/lambda.
    /// Only physical for lambda > 1.
    double sustaining_inactive() const noexcept { return 1.0 / rate(); }
    double sustaining_active() const noexcept { return (lambda_ - 1.0) / lambda_; }

    bool has_sustaining_state() const noexcept { return lambda_ > 1.0; }

private:
    int k_;
    double lambda_;
};

/// Stage fractions (v_0, ..., v_k) on the probability simplex.
class PopulationState {
public:
    /// Throws DomainError unless every component is >= -1e-9 and the sum is 1 within 1e-12.
    explicit PopulationState(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t j) const { return values_[j]; }
    std::size_t size() const noexcept { return values_.size(); }
    int stages() const noexcept { return static_cast<int>(values_.size()) - 1; }
    double active() const { return values_.back(); }

    const std::vector<double>& vector() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

PopulationState sustaining_state(const ModelParams& params);
PopulationState inert_state(int k);

/// Throws DomainError when the state has a different number of stages than params.
void require_matching_stages(const ModelParams& params, const PopulationState& state);

/// Worst simplex-constraint deviations seen along a run.
struct InvariantSummary {
    double max_sum_deviation = 0.0;
    double min_component = std::numeric_limits<double>::infinity();

    void observe(double column_sum, double column_min) noexcept;
    void merge(const InvariantSummary& other) noexcept;
    bool within(double sum_tolerance, double negative_tolerance) const noexcept;
};

}  // namespace gcp
