#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "gcp/csv.hpp"
#include "gcp/error.hpp"
#include "gcp/grid.hpp"
#include "gcp/kernel.hpp"
#include "gcp/model.hpp"
#include "gcp/parallel.hpp"
#include "gcp/poisson.hpp"
#include "oracles.hpp"

using namespace gcp;
using doctest::Approx;

TEST_CASE("model params validate k and lambda") {
    CHECK_THROWS_AS(ModelParams(0, 2.0), DomainError);
    CHECK_THROWS_AS(ModelParams(1, 0.0), DomainError);
    CHECK_THROWS_AS(ModelParams(1, -1.0), DomainError);
    CHECK_THROWS_AS(ModelParams(1, std::nan("")), DomainError);
    const ModelParams p(3, 2.0);
    CHECK(p.rate() == 6.0);
    CHECK(p.sustaining_inactive() == Approx(1.0 / 6.0));
    CHECK(p.sustaining_active() == 0.5);
}

TEST_CASE("population state enforces the simplex") {
    CHECK_NOTHROW(PopulationState({0.25, 0.25, 0.5}));
    CHECK_THROWS_AS(PopulationState({0.5, 0.6}), DomainError);
    CHECK_THROWS_AS(PopulationState({1.1, -0.1}), DomainError);
    CHECK_THROWS_AS(PopulationState({1.0}), DomainError);
    // small negative round-off is tolerated
    CHECK_NOTHROW(PopulationState({1.0 + 5e-10, -5e-10}));
    CHECK_THROWS_AS(PopulationState({1.0 + 1e-8, -1e-8}), DomainError);
}

TEST_CASE("sustaining and inert states") {
    const auto s = sustaining_state(ModelParams(2, 2.0));
    CHECK(s[0] == Approx(0.25));
    CHECK(s[1] == Approx(0.25));
    CHECK(s[2] == Approx(0.5));
    CHECK_THROWS_AS(sustaining_state(ModelParams(2, 1.0)), DomainError);
    const auto inert = inert_state(3);
    CHECK(inert.size() == 4);
    CHECK(inert[0] == 1.0);
    CHECK(inert.active() == 0.0);
    CHECK_THROWS_AS(require_matching_stages(ModelParams(2, 2.0), inert), DomainError);
}

TEST_CASE("h_coeff examples") {
    CHECK(h_coeff(0, 0.0) == 1.0);
    CHECK(h_coeff(3, 0.0) == 0.0);
    CHECK(h_coeff(1, 1.0) == Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(h_coeff(5, 3.0) == Approx(oracle::poisson_direct(5, 3.0)).epsilon(1e-14));
    CHECK(h_coeff(5, 3.0) == Approx(0.1008188134).epsilon(1e-9));
    CHECK_THROWS_AS(h_coeff(-1, 1.0), DomainError);
    CHECK_THROWS_AS(h_coeff(1, -1.0), DomainError);
}

TEST_CASE("h_coeff agrees with direct factorial evaluation") {
    for (int j = 0; j <= 30; ++j) {
        for (const double r : {0.01, 0.5, 1.0, 4.0, 17.0, 60.0, 150.0}) {
            const double direct = oracle::poisson_direct(j, r);
            CHECK(h_coeff(j, r) == Approx(direct).epsilon(1e-12).scale(0.0));
        }
    }
}

TEST_CASE("h_coeff stays finite for large r") {
    // Log-space branch: Poisson(r) pmf near its mode is about 1/sqrt(2 pi r).
    const double r = 5000.0;
    const double mode = h_coeff(5000, r);
    CHECK(std::isfinite(mode));
    CHECK(mode == Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * r)).epsilon(1e-3));
    CHECK(h_coeff(3, 800.0) == 0.0);
}

TEST_CASE("property: Poisson weights are bounded, sum to one and partial sums decrease") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double r = 40.0 * unit(rng);
        std::vector<double> h(200);
        h_coeffs(r, h);
        double total = 0.0;
        for (const double v : h) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            total += v;
        }
        CHECK(total == Approx(1.0).epsilon(1e-12));
        for (int k = 1; k <= 6; ++k) {
            double a = 0.0;
            double b = 0.0;
            for (int j = 0; j < k; ++j) {
                a += h_coeff(j, r);
                b += h_coeff(j, r + 0.1);
            }
            CHECK(b < a);
        }
    }
}

TEST_CASE("kernel_eval examples") {
    CHECK(kernel_eval(Kernel::box(0.5), 0.0) == 1.0);
    CHECK(kernel_eval(Kernel::box(0.5), 0.7) == 0.0);
    CHECK(kernel_eval(Kernel::box(0.5), -0.7) == 0.0);
    CHECK(kernel_eval(Kernel::gaussian(1.0), 0.0) == Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
    CHECK_THROWS_WITH_AS(kernel_eval(Kernel::delta(), 0.0), "delta kernel is not pointwise evaluable", DomainError);
    CHECK_THROWS_AS(Kernel::box(0.0), DomainError);
    CHECK_THROWS_AS(Kernel::gaussian(-1.0), DomainError);
}

TEST_CASE("kernel_fourier examples") {
    for (const Kernel& k : {Kernel::delta(), Kernel::box(0.5), Kernel::gaussian(0.7)}) {
        CHECK(kernel_fourier(k, 0.0) == 1.0);
    }
    CHECK(kernel_fourier(Kernel::delta(), 37.2) == 1.0);
    CHECK(std::abs(kernel_fourier(Kernel::box(0.5), 1.0)) < 1e-15);
    CHECK(kernel_fourier(Kernel::box(0.5), 0.25) == Approx(std::sin(0.25 * std::numbers::pi) / (0.25 * std::numbers::pi)));
    CHECK(kernel_fourier(Kernel::gaussian(0.3), 1.5) == Approx(std::exp(-2.0 * std::numbers::pi * std::numbers::pi * 0.09 * 2.25)));
}

TEST_CASE("property: |J^(xi)| <= 1 with equality only at 0") {
    for (const Kernel& k : {Kernel::box(0.5), Kernel::box(2.0), Kernel::gaussian(0.4)}) {
        for (int i = 1; i <= 2000; ++i) {
            const double xi = 0.01 * i;
            const double f = kernel_fourier(k, xi);
            CHECK(std::abs(f) <= 1.0);
            CHECK(f < 1.0);
            CHECK(kernel_fourier(k, -xi) == f);
        }
    }
}

TEST_CASE("table kernel normalizes, interpolates and transforms") {
    // tent on [-1, 1] with raw mass 2
    const Kernel tent = Kernel::table({-1.0, 0.0, 1.0}, {0.0, 2.0, 0.0});
    CHECK(kernel_eval(tent, 0.0) == Approx(1.0));
    CHECK(kernel_eval(tent, 0.5) == Approx(0.5));
    CHECK(kernel_eval(tent, 1.5) == 0.0);
    CHECK(tent.support() == 1.0);
    CHECK(kernel_fourier(tent, 0.0) == Approx(1.0).epsilon(1e-10));
    // Unit tent transform: sinc^2(xi).
    const double xi = 0.3;
    const double s = std::sin(std::numbers::pi * xi) / (std::numbers::pi * xi);
    CHECK(kernel_fourier(tent, xi) == Approx(s * s).epsilon(1e-10));
    CHECK_THROWS_AS(Kernel::table({-1.0, 0.0, 2.0}, {1.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(Kernel::table({-1.0, 0.0, 1.0}, {1.0, -1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(Kernel::table({-1.0, 1.0}, {0.0, 0.0}), DomainError);
}

TEST_CASE("grid geometry and kernel fit") {
    const Grid1D g(10.0, 400);
    CHECK(g.spacing() == 0.025);
    CHECK(g.x(0) == -5.0);
    CHECK(g.x_max() == Approx(5.0 - 0.025));
    CHECK_NOTHROW(g.require_fits(Kernel::box(0.5)));
    CHECK_THROWS_AS(g.require_fits(Kernel::box(5.0)), ConfigError);
    CHECK_THROWS_AS(g.require_fits(Kernel::gaussian(1.0)), ConfigError);  // truncated at 8 sigma
    CHECK_THROWS_AS(Grid1D(0.0, 10), DomainError);
    CHECK_THROWS_AS(Grid1D(1.0, 0), DomainError);
}

TEST_CASE("csv formatting round-trips") {
    CHECK(csv::format(0.1) == "0.1");
    CHECK(csv::format(1e-300) == "1e-300");
    CHECK(csv::format(std::numeric_limits<double>::infinity()) == "inf");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(csv::format(x)) == x);
    std::ostringstream out;
    csv::write_header(out, {"a", "b"});
    const double row[] = {1.0, 2.5};
    csv::write_row(out, row);
    CHECK(out.str() == "a,b\n1,2.5\n");
}

TEST_CASE("worker pool covers every index once and propagates errors") {
    for (const int threads : {1, 2, 5, 8}) {
        WorkerPool pool(threads);
        for (const std::size_t count : {0UL, 1UL, 3UL, 17UL, 1000UL}) {
            std::vector<int> hits(count, 0);
            pool.parallel_for(count, [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i) ++hits[i];
            });
            for (const int h : hits) CHECK(h == 1);
        }
        CHECK_THROWS_AS(pool.parallel_for(100, [](std::size_t, std::size_t e) {
            if (e == 100) throw NumericalError("boom");
        }), NumericalError);
    }
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
}
