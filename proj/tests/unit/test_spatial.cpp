#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gcp/error.hpp"
#include "gcp/front.hpp"
#include "gcp/initial_condition.hpp"
#include "gcp/nucleus.hpp"
#include "gcp/spatial.hpp"
#include "gcp/stationary.hpp"
#include "gcp/uniform.hpp"
#include "oracles.hpp"

using namespace gcp;
using namespace gcp::spatial;
using doctest::Approx;

namespace {

std::vector<double> random_row(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> row(n);
    for (double& v : row) v = unit(rng);
    return row;
}

double mean(std::span<const double> xs) {
    double s = 0.0;
    for (const double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sup_deviation(std::span<const double> xs, double target) {
    double d = 0.0;
    for (const double x : xs) d = std::max(d, std::abs(x - target));
    return d;
}

}  // namespace

TEST_CASE("convolve examples") {
    const Grid1D grid(10.0, 200);
    const std::vector<double> constant(200, 0.37);
    for (const Kernel& k : {Kernel::box(0.5), Kernel::gaussian(0.4), Kernel::delta()}) {
        for (const double v : convolve(constant, k, grid)) CHECK(v == Approx(0.37).epsilon(1e-15));
    }
    std::mt19937_64 rng(21);
    const auto row = random_row(rng, 200);
    CHECK(convolve(row, Kernel::delta(), grid) == row);

    // unit-mass spike becomes a plateau of height 1/(2b) over width 2b
    const double h = grid.spacing();
    std::vector<double> spike(200, 0.0);
    spike[100] = 1.0 / h;
    const auto out = convolve(spike, Kernel::box(0.5), grid);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double d = std::abs(grid.x(i) - grid.x(100));
        if (d < 0.5 - h / 2) CHECK(out[i] == Approx(1.0).epsilon(1e-12));
        if (d > 0.5 + h / 2) CHECK(out[i] == 0.0);
    }
    CHECK_THROWS_AS(convolve(row, Kernel::box(5.0), grid), ConfigError);
}

TEST_CASE("box convolution matches direct summation") {
    std::mt19937_64 rng(22);
    for (const double b : {0.5, 0.73, 1.25}) {
        const Grid1D grid(12.0, 240);
        const auto row = random_row(rng, 240);
        const auto fast = convolve(row, Kernel::box(b), grid);
        const auto ref = oracle::box_convolve_direct(row, b, 12.0);
        for (std::size_t i = 0; i < row.size(); ++i) CHECK(fast[i] == Approx(ref[i]).epsilon(1e-13));
    }
}

TEST_CASE("property: convolution preserves the spatial mean") {
    std::mt19937_64 rng(23);
    const Kernel table = Kernel::table({-1.0, -0.5, 0.0, 0.5, 1.0}, {0.0, 1.0, 3.0, 1.0, 0.0});
    for (const Kernel& k : {Kernel::box(0.5), Kernel::box(1.1), Kernel::gaussian(0.3), table}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Grid1D grid(20.0, 400 + 8 * static_cast<std::size_t>(trial));
            const auto row = random_row(rng, grid.points());
            const auto out = convolve(row, k, grid);
            CHECK(std::abs(mean(out) - mean(row)) < 1e-12);
        }
    }
}

TEST_CASE("rhs examples") {
    const Grid1D grid(10.0, 100);
    for (const Kernel& k : {Kernel::box(0.5), Kernel::gaussian(0.3), Kernel::delta()}) {
        for (const int stages : {1, 2, 4}) {
            const ModelParams p(stages, 1.7);
            const Field f = uniform_field(grid, sustaining_state(p));
            for (const double v : rhs(f, p, k).data()) CHECK(std::abs(v) < 1e-13);
        }
    }
    const ModelParams p(2, 2.0);
    const Field frozen = uniform_field(grid, PopulationState({0.3, 0.7, 0.0}));
    for (const double v : rhs(frozen, p, Kernel::box(0.5)).data()) CHECK(v == 0.0);

    const PopulationState s({0.2, 0.15, 0.65});
    const auto d = rhs(uniform_field(grid, s), p, Kernel::box(0.5));
    std::vector<double> ref(3);
    uniform::rhs(p, s.values(), ref);
    for (int j = 0; j <= 2; ++j) {
        for (std::size_t i = 0; i < grid.points(); ++i) CHECK(d.at(j, i) == Approx(ref[j]).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("property: rhs columns sum to zero") {
    std::mt19937_64 rng(24);
    const Grid1D grid(10.0, 64);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 1 + trial % 4;
        Field f(grid, k);
        for (std::size_t i = 0; i < grid.points(); ++i) {
            const auto v = oracle::random_simplex(rng, k);
            for (int j = 0; j <= k; ++j) f.at(j, i) = v[j];
        }
        const auto d = rhs(f, ModelParams(k, 2.5), Kernel::box(0.5));
        for (std::size_t i = 0; i < grid.points(); ++i) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j) s += d.at(j, i);
            CHECK(std::abs(s) < 1e-14);
        }
    }
}

TEST_CASE("simulate_spatial keeps the sustaining state") {
    const Grid1D grid(10.0, 200);
    const ModelParams p(2, 2.0);
    SimulationOptions opt;
    opt.t_end = 10.0;
    opt.snapshot_stride = 100;
    const auto traj = simulate_spatial(uniform_field(grid, sustaining_state(p)), p, Kernel::box(0.5), opt);
    CHECK(traj.times.back() == 10.0);
    const auto& last = traj.snapshots.back();
    CHECK(sup_deviation(last.row(0), 0.25) < 1e-10);
    CHECK(sup_deviation(last.row(2), 0.5) < 1e-10);
}

TEST_CASE("k = 1 perturbed field converges to the sustaining value") {
    const Grid1D grid(20.0, 400);
    const ModelParams p(1, 2.0);
    Field f(grid, 1);
    for (std::size_t i = 0; i < grid.points(); ++i) {
        const double v1 = 0.1 * (1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * grid.x(i) / 20.0));
        f.at(1, i) = v1;
        f.at(0, i) = 1.0 - v1;
    }
    SimulationOptions opt;
    opt.t_end = 30.0;
    opt.snapshot_stride = 100;
    const auto traj = simulate_spatial(f, p, Kernel::box(0.5), opt);
    CHECK(sup_deviation(traj.snapshots.back().row(1), 0.5) < 1e-6);
    for (std::size_t s = 1; s < traj.snapshots.size(); ++s) {
        CHECK(lyapunov_k1(traj.snapshots[s], 2.0) <= lyapunov_k1(traj.snapshots[s - 1], 2.0) + 1e-12);
    }
    CHECK(traj.invariants.within(1e-10, 1e-9));
}

TEST_CASE("uniform field reduces to the uniform solver") {
    const Grid1D grid(10.0, 40);
    const ModelParams p(3, 1.5);
    const PopulationState s({0.4, 0.2, 0.1, 0.3});
    SimulationOptions opt;
    opt.t_end = 20.0;
    opt.dt = 1e-3;
    opt.snapshot_stride = 1000;
    const auto traj = simulate_spatial(uniform_field(grid, s), p, Kernel::box(0.5), opt);
    const auto ref = uniform::simulate_uniform(p, s, 20.0, 1e-3, 1000);
    REQUIRE(traj.times.size() == ref.times.size());
    for (std::size_t n = 0; n < traj.times.size(); ++n) {
        for (int j = 0; j <= 3; ++j) {
            CHECK(sup_deviation(traj.snapshots[n].row(j), ref.states[n][static_cast<std::size_t>(j)]) < 1e-9);
        }
    }
}

TEST_CASE("simulation rejects bad input and reports invariant violations") {
    const Grid1D grid(10.0, 50);
    const ModelParams p(1, 2.0);
    const Field ok = uniform_field(grid, PopulationState({0.5, 0.5}));
    SimulationOptions opt;
    opt.t_end = 1.0;
    opt.dt = 1.0;
    CHECK_THROWS_AS(run_spatial(ok, p, Kernel::box(0.5), opt, {}), DomainError);
    opt.dt = 0.01;
    opt.t_end = 0.0;
    CHECK_THROWS_AS(run_spatial(ok, p, Kernel::box(0.5), opt, {}), DomainError);
    opt.t_end = 1.0;
    Field broken(grid, 1, std::vector<double>(100, 0.6));
    CHECK_THROWS_WITH_AS(run_spatial(broken, p, Kernel::box(0.5), opt, {}), doctest::Contains("step 0"),
                         InvariantViolation);
    CHECK_THROWS_AS(run_spatial(ok, ModelParams(2, 2.0), Kernel::box(0.5), opt, {}), DomainError);
}

TEST_CASE("results do not depend on the worker count") {
    const Grid1D grid(100.0, 4096);
    const ModelParams p(2, 1.6);
    const Field f = make_field(StepIc{0.0}, p, grid);
    SimulationOptions opt;
    opt.t_end = 2.0;
    const auto a = run_spatial(f, p, Kernel::box(0.5), opt, {});
    opt.threads = 4;
    const auto b = run_spatial(f, p, Kernel::box(0.5), opt, {});
    CHECK(std::equal(a.final_field.data().begin(), a.final_field.data().end(), b.final_field.data().begin()));
}

TEST_CASE("lyapunov_k1 examples") {
    const Grid1D grid(20.0, 100);
    CHECK(lyapunov_k1(uniform_field(grid, PopulationState({0.5, 0.5})), 2.0) == 0.0);
    CHECK(lyapunov_k1(uniform_field(grid, PopulationState({1.0, 0.0})), 2.0) == Approx(20.0 * 0.25));
    CHECK_THROWS_AS(lyapunov_k1(uniform_field(grid, PopulationState({1.0, 0.0, 0.0})), 2.0), DomainError);
}

TEST_CASE("initial conditions") {
    const Grid1D grid(10.0, 100);
    const ModelParams p(2, 2.0);
    const Field step = make_field(StepIc{1.0}, p, grid);
    CHECK(step.at(2, 0) == 0.5);
    CHECK(step.at(0, 99) == 1.0);
    const Field tanh = make_field(TanhIc{0.5, 0.0}, p, grid);
    CHECK(tanh.at(2, 50) == Approx(0.25));
    const Field plug = make_field(PlugIc{2.0, 0.0}, p, grid);
    CHECK(plug.at(2, 50) == 0.5);
    CHECK(plug.at(2, 0) == 0.0);
    const Field pert = make_field(PerturbedIc{{0.25, 0.25, 0.5}, 0.01, 1, 0.0}, p, grid);
    CHECK(pert.at(2, 0) == Approx(0.5 - 0.01));
    CHECK_THROWS_AS(make_field(PerturbedIc{{0.25, 0.25, 0.5}, 0.6, 1, 0.0}, p, grid), DomainError);
    CHECK_THROWS_AS(make_field(UniformIc{{0.5, 0.5}}, p, grid), DomainError);
    CHECK_THROWS_AS(make_field(StepIc{0.0}, ModelParams(2, 0.8), grid), DomainError);
    const auto profile = make_profile(PerturbedIc{{0.5}, 0.15, 1, 0.0}, grid);
    CHECK(profile[0] == Approx(0.35));
    CHECK_THROWS_AS(make_profile(StepIc{0.0}, grid), DomainError);
}

TEST_CASE("stationary_iterate examples") {
    const Grid1D grid(10.0, 400);
    const Kernel box = Kernel::box(0.5);
    const auto fixed = stationary_iterate(std::vector<double>(400, 0.5), box, grid, 2.0);
    CHECK(fixed.iterations == 1);
    CHECK(fixed.residual < 1e-15);
    CHECK(sup_deviation(fixed.R, 0.5) < 1e-15);

    const auto zero = stationary_iterate(std::vector<double>(400, 0.0), box, grid, 2.0);
    CHECK(sup_deviation(zero.R, 0.0) == 0.0);

    const auto R_init = make_profile(PerturbedIc{{0.5}, 0.15, 1, 0.0}, grid);
    const auto res = stationary_iterate(R_init, box, grid, 2.0, 1e-12, 10000);
    CHECK(sup_deviation(res.R, 0.5) < 1e-10);

    CHECK_THROWS_AS(stationary_iterate(R_init, box, grid, 1.0), DomainError);
    CHECK_THROWS_AS(stationary_iterate(std::vector<double>(400, -0.1), box, grid, 2.0), DomainError);
    try {
        stationary_iterate(R_init, box, grid, 2.0, 1e-12, 3);
        FAIL("expected non-convergence");
    } catch (const ConvergenceError& e) {
        CHECK(e.iterations() == 3);
        CHECK(e.residual() > 1e-12);
    }
}

TEST_CASE("property: stationary iteration converges to the uniform value from positive data") {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    const Grid1D grid(10.0, 200);
    for (const double lambda : {1.5, 2.0, 3.0}) {
        std::vector<double> R(200);
        for (double& r : R) r = unit(rng);
        const auto res = stationary_iterate(R, Kernel::box(0.5), grid, lambda, 1e-13, 100000);
        CHECK(sup_deviation(res.R, (lambda - 1.0) / lambda) < 1e-10);
    }
}

TEST_CASE("front_position on the exact wave profile") {
    const Grid1D grid(400.0, 8000);
    const double lambda = 2.0;
    const double level = 0.25;
    for (const double shift : {0.0, 3.0, -17.3}) {
        std::vector<double> row(grid.points());
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = delta_wave(lambda, 0.1, grid.x(i) - shift, 0.0);
        CHECK(std::abs(front_position(grid, row, level) - shift) < grid.spacing());
    }
    const Field flat = uniform_field(grid, PopulationState({0.5, 0.5}));
    CHECK_THROWS_AS(front_position(flat, 0.25), MeasurementError);
}

TEST_CASE("line and tanh fits") {
    const std::vector<double> t{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> x{1.0, 3.0, 5.0, 7.0};
    const auto line = fit_line(t, x);
    CHECK(line.slope == Approx(2.0));
    CHECK(line.intercept == Approx(1.0));
    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 1.0}), DomainError);

    const Grid1D grid(200.0, 2000);
    std::vector<double> row(grid.points());
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = 0.3 * 0.5 * (1.0 - std::tanh(0.7 * (grid.x(i) - 4.0)));
    const auto fit = fit_tanh_profile(grid, row, 0.28, 3.0, 30.0);
    CHECK(fit.amplitude == Approx(0.3).epsilon(1e-8));
    CHECK(fit.alpha == Approx(0.7).epsilon(1e-8));
    CHECK(fit.center == Approx(4.0).epsilon(1e-8));
    CHECK(fit.residual < 1e-8);
}

TEST_CASE("delta_wave examples") {
    const double V = delta_wave_velocity(2.0, 0.1);
    CHECK(V == Approx(5.0));
    CHECK(delta_wave(2.0, 0.1, V * 3.0, 3.0) == Approx(0.25).epsilon(1e-15));
    CHECK(delta_wave(2.0, 0.1, -1e4, 0.0) == Approx(0.5).epsilon(1e-15));
    CHECK(0.1 * V == Approx((2.0 - 1.0) / 2.0));
    CHECK_THROWS_AS(delta_wave(1.0, 0.1, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(delta_wave(2.0, 0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("property: delta wave solves the pointwise equation") {
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> xs(-60.0, 60.0);
    std::uniform_real_distribution<double> ts(0.0, 20.0);
    for (const double lambda : {1.5, 2.0}) {
        for (const double alpha : {0.05, 0.1}) {
            for (int i = 0; i < 100; ++i) {
                const double x = xs(rng);
                const double t = ts(rng);
                CHECK(delta_wave_time_derivative(lambda, alpha, x, t) ==
                      Approx(oracle::delta_wave_dt(lambda, alpha, x, t)).epsilon(1e-13).scale(1e-3));
                CHECK(std::abs(delta_wave_residual(lambda, alpha, x, t)) < 1e-12);
            }
        }
    }
}

TEST_CASE("simulated k = 1 front moves right") {
    const Grid1D grid(100.0, 1000);
    const ModelParams p(1, 1.5);
    FrontOptions opt;
    opt.t_end = 20.0;
    opt.sample_interval = 2.0;
    const auto obs = measure_front(StepIc{-30.0}, p, Kernel::box(0.5), grid, opt);
    REQUIRE(obs.positions.size() == 11);
    for (std::size_t i = 1; i < obs.positions.size(); ++i) CHECK(obs.positions[i] > obs.positions[i - 1]);
    CHECK(obs.velocity > 0.0);
    CHECK(obs.fit_residual < 0.05);
    CHECK(obs.amplitude_fit == Approx(p.sustaining_active()).epsilon(0.05));

    std::ostringstream front, positions;
    write_front_csv(front, obs);
    write_positions_csv(positions, obs);
    CHECK(front.str().rfind("t_start,t_end,velocity,alpha_fit,fit_residual\n", 0) == 0);
    CHECK(positions.str().rfind("t,x_front\n0,", 0) == 0);
}

TEST_CASE("front entering the guard zone aborts the measurement") {
    const Grid1D grid(40.0, 400);
    FrontOptions opt;
    opt.t_end = 60.0;
    // The wrapped second front closes the inert gap before the default guard is reached.
    opt.guard = 12.0;
    CHECK_THROWS_WITH_AS(measure_front(StepIc{5.0}, ModelParams(1, 2.0), Kernel::box(0.5), grid, opt),
                         doctest::Contains("guard zone"), MeasurementError);
    CHECK_THROWS_AS(measure_front(StepIc{5.0}, ModelParams(1, 0.9), Kernel::box(0.5), grid, opt), DomainError);
}

TEST_CASE("nucleus runs and bracket") {
    const Grid1D grid(60.0, 1200);
    const ModelParams p(2, 1.3);
    NucleusOptions opt;
    opt.t_end = 300.0;
    opt.dt = 0.02;
    CHECK(run_plug(p, Kernel::box(0.5), grid, 0.2, opt).outcome == NucleusOutcome::extinct);
    CHECK(run_plug(p, Kernel::box(0.5), grid, 2.0, opt).outcome == NucleusOutcome::spreading);

    const auto a = bracket_nucleus(p, Kernel::box(0.5), grid, 0.2, 2.0, 1, opt, 1);
    const auto b = bracket_nucleus(p, Kernel::box(0.5), grid, 0.2, 2.0, 1, opt, 3);
    CHECK(a.extinct_width < a.spreading_width);
    CHECK(a.extinct_width == b.extinct_width);
    CHECK(a.spreading_width == b.spreading_width);
    std::ostringstream sa, sb;
    write_nucleus_csv(sa, a);
    write_nucleus_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK_THROWS_AS(bracket_nucleus(p, Kernel::box(0.5), grid, 2.0, 3.0, 1, opt, 1), MeasurementError);
}
