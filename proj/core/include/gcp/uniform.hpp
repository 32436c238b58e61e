#pragma once

#include <limits>
#include <span>
#include <vector>

#include "gcp/model.hpp"

namespace gcp::uniform {

// Spatially uniform dynamics. With the reparameterization dr/dt = k lambda v_k
// the inactive stages obey a linear ODE in r whose solution is a finite sum
// of Poisson weights H_j(r), and r itself follows the autonomous ODE
// dr/dt = phi(r).

/// Closed-form stage fractions v~(r) for j = 0..k. v~_k is the complement of
/// the others. Values leave the simplex only for r beyond the first root of
/// phi, which the r-flow never reaches.
std::vector<double> vtilde(const ModelParams& params, const PopulationState& v_init, double r);

/// phi(r) = k(lambda - 1 - lambda sum_{j<k} sum_{i<=j} H_{j-i}(r) [v_i(0) - 1/(lambda k)]).
/// Evaluated independently of vtilde; equals k lambda v~_k(r).
double phi(const ModelParams& params, const PopulationState& v_init, double r);

enum class Outcome {
    sustaining,
    extinct,             // phi has a finite smallest positive root r0
    extinct_asymptotic,  // lambda = 1 and no root on the scanned range: v_k -> 0 as r -> infinity
};

struct Classification {
    Outcome outcome = Outcome::sustaining;
    double r0 = std::numeric_limits<double>::infinity();

    static Classification sustaining() { return {}; }
    static Classification extinct(double root) { return {Outcome::extinct, root}; }
    static Classification extinct_asymptotic() { return {Outcome::extinct_asymptotic}; }

    bool is_extinct() const noexcept { return outcome != Outcome::sustaining; }
};

struct ClassifyOptions {
    double r_max = 50.0;
    int n_scan = 2048;
    // Each extension doubles the scanned range when the tail bound is not yet tight enough.
    int max_extensions = 16;
};

/// Scans phi for its smallest positive root. Between scan points where phi'
/// changes sign from negative to positive, the local minimum is located and
/// tested, so narrow dips below zero are not skipped. Sustaining requires no
/// root on the scanned range and an analytic tail bound showing phi stays
/// positive beyond it. Throws DomainError for a frozen state (v_k(0) = 0).
Classification classify(const ModelParams& params, const PopulationState& v_init, const ClassifyOptions& options = {});

/// t(r) = int_0^r ds / phi(s) by adaptive Gauss-Kronrod quadrature (relative
/// tolerance 1e-10). Returns +infinity when r equals the root r0 or r is
/// infinite and no root exists; throws DomainError if phi <= 0 before r.
double time_of_r(const ModelParams& params, const PopulationState& v_init, double r);

/// dv/dt of the uniform system at v (sizes k+1); components sum to zero.
void rhs(const ModelParams& params, std::span<const double> v, std::span<double> dv);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> r;  // accumulated int_0^t k lambda v_k
    std::vector<std::vector<double>> states;
    InvariantSummary invariants;
};

inline constexpr double kDefaultUniformDt = 1e-3;
inline constexpr double kMaxUniformDt = 1e-2;

/// Classical RK4 in physical time on (v, r) jointly. The step is shrunk to
/// t_end / ceil(t_end / dt) so the last sample lands on t_end. Every
/// `stride`-th step is stored along with the first and last.
/// Throws InvariantViolation if any component drops below -1e-9.
Trajectory simulate_uniform(const ModelParams& params, const PopulationState& v_init, double t_end,
                            double dt = kDefaultUniformDt, int stride = 1);

/// Logistic solution for k = 1:
/// v1(t) = v1(0) / (a v1(0) + (1 - a v1(0)) exp(-(lambda-1) t)), a = lambda/(lambda-1).
double k1_analytic(double lambda, double v1_0, double t);

/// Uniform problem bound to its initial state.
class UniformSolution {
public:
    UniformSolution(ModelParams params, PopulationState v_init);

    const ModelParams& params() const noexcept { return params_; }
    const PopulationState& initial_state() const noexcept { return v_init_; }

    std::vector<double> vtilde(double r) const { return uniform::vtilde(params_, v_init_, r); }
    double phi(double r) const { return uniform::phi(params_, v_init_, r); }
    Classification classify(const ClassifyOptions& options = {}) const {
        return uniform::classify(params_, v_init_, options);
    }
    double time_of_r(double r) const { return uniform::time_of_r(params_, v_init_, r); }

private:
    ModelParams params_;
    PopulationState v_init_;
};

}  // namespace gcp::uniform
