#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "expander/errors.hpp"
#include "expander/phase.hpp"

using namespace expander;

TEST_CASE("net_exponent: frozen value at k=2, n=2^10, N=2^11, d=8, eps=1/6") {
    // Direct evaluation; the 3 s ln(5d) term dominates here so the value is
    // positive (the bound is vacuous at this scale).
    CHECK(net_exponent(2, 1024, 2048, 8, 1.0 / 6.0) ==
          doctest::Approx(0.014462842750181306).epsilon(1e-12));
}

TEST_CASE("net_exponent: infeasibility and domain errors") {
    // (1-eps) d k > n
    CHECK_THROWS_AS(net_exponent(200, 1024, 2048, 8, 1.0 / 6.0), InfeasibleError);
    CHECK_THROWS_AS(net_exponent(1.5, 1024, 2048, 8, 1.0 / 6.0), DomainError);
    CHECK_THROWS_AS(net_exponent(4, 1024, 512, 8, 1.0 / 6.0), DomainError);  // N < n
    CHECK_THROWS_AS(net_exponent(4, 1024, 2048, 8, 0.7), DomainError);
}

TEST_CASE("net_exponent: continuous within a smooth segment") {
    // between the dyadic jumps (here inside (2, 4))
    const double base = net_exponent(3.0, 1024, 2048, 8, 1.0 / 6.0);
    for (double h : {1e-4, 1e-6, 1e-8})
        CHECK(std::abs(net_exponent(3.0 + h, 1024, 2048, 8, 1.0 / 6.0) - base) <
              1e3 * h + 1e-12);
}

TEST_CASE("net_exponent: downward jump across a dyadic set size") {
    // the general-s relaxation makes the exponent discontinuous at powers of
    // two; the drop is what creates the root windows
    const double below = net_exponent(2.0, 1024, 2048, 8, 1.0 / 6.0);
    const double above = net_exponent(2.0 * (1 + 1e-9), 1024, 2048, 8, 1.0 / 6.0);
    CHECK(below > 0.0);
    CHECK(above < below - 1e-3);
}

TEST_CASE("rho_exp: d=8 root at delta=0.5 is certified") {
    const auto r = rho_exp(0.5, 8, 1.0 / 6.0, 1024);
    CHECK(std::abs(r.residual) < 1e-6);
    CHECK(r.rho > 0.0015);
    CHECK(r.rho < 0.0035);
    // root certification: sign change across rho* (1 +/- 1e-4)
    const double k = r.rho * 1024;
    const double lo = net_exponent(k * (1 - 1e-4), 1024, 2048, 8, 1.0 / 6.0);
    const double hi = net_exponent(k * (1 + 1e-4), 1024, 2048, 8, 1.0 / 6.0);
    CHECK(((lo > 0) != (hi > 0)));
    // feasibility cap
    CHECK((1.0 - 1.0 / 6.0) * 8 * r.rho * 1024 <= 1024.0);
}

TEST_CASE("rho_exp: no transition for d=4 at eps=1/6, n=2^10") {
    // the net exponent stays positive on the whole feasible interval
    CHECK_THROWS_AS(rho_exp(0.5, 4, 1.0 / 6.0, 1024), NoTransitionError);
    try {
        rho_exp(0.5, 4, 1.0 / 6.0, 1024);
    } catch (const NoTransitionError& e) {
        CHECK(e.k_low == 2.0);
        CHECK(e.k_high > 100.0);
        CHECK(e.net_low > 0.0);
        CHECK(e.net_high > 0.0);
    }
}

TEST_CASE("rho_exp: monotone response to eps") {
    const auto loose = rho_exp(0.5, 8, 0.25, 1024);
    const auto mid = rho_exp(0.5, 8, 1.0 / 6.0, 1024);
    const auto tight = rho_exp(0.5, 8, 1.0 / 16.0, 1024);
    CHECK(loose.rho >= mid.rho);
    CHECK(mid.rho >= tight.rho);
}

TEST_CASE("rho_exp: d ordering at fixed delta") {
    const auto d8 = rho_exp(0.5, 8, 1.0 / 6.0, 1024);
    const auto d16 = rho_exp(0.5, 16, 1.0 / 6.0, 1024);
    CHECK(d16.rho > d8.rho);
}

TEST_CASE("rho_exp: argument validation") {
    CHECK_THROWS_AS(rho_exp(0.0, 8, 1.0 / 6.0, 1024), DomainError);
    CHECK_THROWS_AS(rho_exp(1.0, 8, 1.0 / 6.0, 1024), DomainError);
    CHECK_THROWS_AS(rho_exp(0.5, 0, 1.0 / 6.0, 1024), InfeasibleError);
    CHECK_THROWS_AS(rho_exp(0.5, 8, 0.6, 1024), DomainError);
}

TEST_CASE("sweep: single point matches rho_exp and reruns are identical") {
    const std::vector<double> one{0.5};
    const auto curve = sweep_serial(one, 8, 1.0 / 6.0, 1024);
    REQUIRE(curve.rho_values.size() == 1);
    const auto direct = rho_exp(0.5, 8, 1.0 / 6.0, 1024);
    CHECK(curve.rho_values[0] == direct.rho);
    CHECK(curve.residuals[0] == direct.residual);
    CHECK(curve.iterations[0] == direct.iterations);

    const auto again = sweep_serial(one, 8, 1.0 / 6.0, 1024);
    CHECK(curve_to_csv(curve) == curve_to_csv(again));
}

TEST_CASE("sweep: parallel equals serial, failures recorded not thrown") {
    std::vector<double> grid;
    for (int i = 0; i < 9; ++i) grid.push_back(0.1 + 0.1 * i);

    const auto serial = sweep_serial(grid, 8, 1.0 / 6.0, 1024);
    const auto parallel = sweep(grid, 8, 1.0 / 6.0, 1024, 4);
    CHECK(curve_to_csv(serial) == curve_to_csv(parallel));
    CHECK(serial.all_converged());

    // d=4 has no transition anywhere: every point flagged, sweep survives
    const auto failed = sweep_serial(grid, 4, 1.0 / 6.0, 1024);
    CHECK(failed.failed_points() == grid.size());
    for (const auto& err : failed.errors) CHECK_FALSE(err.empty());
    for (double rho : failed.rho_values) CHECK(std::isnan(rho));
}

TEST_CASE("sweep: grid validation") {
    CHECK_THROWS_AS(sweep_serial(std::vector<double>{0.5, 0.4}, 8, 1.0 / 6.0, 1024),
                    DomainError);
    CHECK_THROWS_AS(sweep_serial(std::vector<double>{0.0, 0.5}, 8, 1.0 / 6.0, 1024),
                    DomainError);
}

TEST_CASE("curve_to_csv: header, 17-digit round trip") {
    const std::vector<double> one{0.37};
    const auto curve = sweep_serial(one, 16, 1.0 / 6.0, 1024);
    const auto csv = curve_to_csv(curve);
    CHECK(csv.rfind("delta,rho,residual,iterations\n", 0) == 0);
    // parse the row back; %.17g must reproduce the doubles exactly
    const auto line = csv.substr(csv.find('\n') + 1);
    double delta = 0, rho = 0, residual = 0;
    int iters = 0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%d", &delta, &rho, &residual,
                        &iters) == 4);
    CHECK(delta == 0.37);
    CHECK(rho == curve.rho_values[0]);
    CHECK(residual == curve.residuals[0]);
    CHECK(iters == curve.iterations[0]);
}
