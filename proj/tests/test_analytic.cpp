#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "cellsim/analytic.hpp"
#include "doctest.h"

using namespace cellsim;

namespace {

// Direct Erlang-B from the definition, term-by-term to dodge factorial
// overflow: B = (rho^c/c!) / sum_k rho^k/k!.
double erlang_b_direct(int c, double rho) {
    double term = 1.0;  // rho^k / k! at k = 0
    double denom = 1.0;
    for (int k = 1; k <= c; ++k) {
        term *= rho / k;
        denom += term;
    }
    return term / denom;
}

// Direct M/M/c/K full-system probability from the stationary distribution:
// p_n ~ rho^n/n! for n <= c, then geometric decay with ratio rho/c.
double mmck_direct(int c, int K, double rho) {
    std::vector<double> p(static_cast<std::size_t>(K) + 1);
    p[0] = 1.0;
    for (int n = 1; n <= K; ++n) {
        const double divisor = n <= c ? n : c;
        p[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n) - 1] * rho / divisor;
    }
    double total = 0.0;
    for (double v : p) total += v;
    return p[static_cast<std::size_t>(K)] / total;
}

}  // namespace

TEST_CASE("erlang_b hand values") {
    CHECK(erlang_b(0, 0.0) == 1.0);
    CHECK(erlang_b(0, 3.7) == 1.0);
    CHECK(erlang_b(1, 1.0) == doctest::Approx(0.5));
    CHECK(erlang_b(2, 1.0) == doctest::Approx(0.2));
    CHECK(erlang_b(4, 1.0) == doctest::Approx(1.0 / 65.0));
    CHECK(erlang_b(5, 0.0) == 0.0);
    CHECK_THROWS_AS(erlang_b(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(erlang_b(1, -0.5), std::invalid_argument);
}

TEST_CASE("erlang_b matches the direct definition on a grid") {
    const std::array<double, 6> loads = {0.25, 0.5, 1.0, 2.0, 5.0, 20.0};
    for (int c = 0; c <= 30; ++c)
        for (double rho : loads)
            CHECK(erlang_b(c, rho) == doctest::Approx(erlang_b_direct(c, rho)).epsilon(1e-12));
    // Large systems stay finite and sane where naive factorials would overflow.
    const double big = erlang_b(200, 180.0);
    CHECK(big > 0.0);
    CHECK(big < 1.0);
}

TEST_CASE("erlang_b monotonicity") {
    for (int c = 0; c < 20; ++c)
        CHECK(erlang_b(c + 1, 7.0) < erlang_b(c, 7.0));
    for (double rho = 0.5; rho < 10.0; rho += 0.5)
        CHECK(erlang_b(6, rho + 0.5) > erlang_b(6, rho));
}

TEST_CASE("mmck_blocking hand values and faults") {
    CHECK(mmck_blocking(1, 2, 1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(mmck_blocking(1, 1, 1.0) == doctest::Approx(0.5));
    CHECK(mmck_blocking(3, 6, 0.0) == 0.0);
    CHECK_THROWS_AS(mmck_blocking(0, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(mmck_blocking(2, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(mmck_blocking(1, 2, -1.0), std::invalid_argument);
}

TEST_CASE("mmck_blocking reduces to erlang_b when no queue places exist") {
    const std::array<double, 4> loads = {0.5, 1.0, 3.0, 9.0};
    for (int c = 1; c <= 12; ++c)
        for (double rho : loads)
            CHECK(mmck_blocking(c, c, rho) == doctest::Approx(erlang_b(c, rho)).epsilon(1e-13));
}

TEST_CASE("mmck_blocking matches the direct stationary distribution") {
    const std::array<double, 3> loads = {0.5, 1.0, 3.0};
    for (int c = 1; c <= 4; ++c)
        for (int K = c; K <= c + 5; ++K)
            for (double rho : loads)
                CHECK(mmck_blocking(c, K, rho) ==
                      doctest::Approx(mmck_direct(c, K, rho)).epsilon(1e-12));
}

TEST_CASE("queue places only reduce loss") {
    for (int extra = 0; extra < 5; ++extra)
        CHECK(mmck_blocking(3, 3 + extra + 1, 4.0) < mmck_blocking(3, 3 + extra, 4.0));
}

TEST_CASE("disjoint_cost composes per-pool erlang losses") {
    const CostWeights unit{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

    // Two active classes on pools of 2 at rho = 1: cost = 0.2 + 0.2.
    const std::array<double, 4> two_active = {1.0, 0.0, 1.0, 0.0};
    CHECK(disjoint_cost({0, 2, 0, 2}, 4, two_active, unit, 0.0) == doctest::Approx(0.4));

    // Idle classes contribute nothing even with empty pools.
    const std::array<double, 4> one_active = {2.0, 0.0, 0.0, 0.0};
    CHECK(disjoint_cost({0, 3, 0, 1}, 4, one_active, unit, 0.0) ==
          doctest::Approx(erlang_b(3, 2.0)));

    // Default weights scale each term; delta adds the capped latency term.
    CostWeights w;  // (1, 1, 10, 5, 1), l_ref = 1
    const std::array<double, 4> rho = {1.0, 1.0, 1.0, 1.0};
    const double expected = 1.0 * erlang_b(2, 1.0) + 1.0 * erlang_b(1, 1.0) +
                            10.0 * erlang_b(2, 1.0) + 5.0 * erlang_b(3, 1.0) + 1.0 * 0.1;
    CHECK(disjoint_cost({1, 2, 3, 2}, 8, rho, w, 0.1) == doctest::Approx(expected));

    // Latency term saturates at w_l.
    CHECK(disjoint_cost({1, 1, 1, 1}, 4, {0, 0, 0, 0}, w, 5.0) == doctest::Approx(w.w_l));

    // The shared pool must be empty for the disjoint decomposition to hold.
    CHECK_THROWS_AS(disjoint_cost({1, 1, 1, 0}, 4, rho, w, 0.0), std::invalid_argument);
}

TEST_CASE("brute_force_optimum on the two-class toy") {
    const CostWeights unit{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    const std::array<double, 4> rho = {1.0, 0.0, 1.0, 0.0};  // RT_O and RT_H only
    const ReservationVector best = brute_force_optimum(4, rho, unit, 1, 0.0);
    CHECK(best == ReservationVector{0, 2, 0, 2});
    CHECK(disjoint_cost(best, 4, rho, unit, 0.0) == doctest::Approx(0.4));
}

TEST_CASE("brute_force_optimum matches an independent lattice scan") {
    const int channels = 12;
    const int stride = 3;
    CostWeights w;
    const std::array<double, 4> rho = {4.0, 9.0, 1.5, 2.5};
    const double delta = 0.1;

    ReservationVector best_ref;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int noc = 0; noc <= channels; noc += stride)
        for (int roc = 0; noc + roc <= channels; roc += stride)
            for (int nhc = 0; noc + roc + nhc <= channels; nhc += stride) {
                const int rhc = channels - noc - roc - nhc;
                if (rhc % stride != 0) continue;
                const ReservationVector rv{noc, roc, nhc, rhc};
                const double c = disjoint_cost(rv, channels, rho, w, delta);
                if (c < best_cost) {
                    best_cost = c;
                    best_ref = rv;
                }
            }

    const ReservationVector got = brute_force_optimum(channels, rho, w, stride, delta);
    CHECK(got == best_ref);
    CHECK(disjoint_cost(got, channels, rho, w, delta) == doctest::Approx(best_cost));
}

TEST_CASE("brute_force_optimum is no worse than any lattice point") {
    CostWeights w;
    const std::array<double, 4> rho = {8.0, 13.3, 3.3, 6.7};
    const ReservationVector got = brute_force_optimum(60, rho, w, 5, 0.1);
    const double got_cost = disjoint_cost(got, 60, rho, w, 0.1);
    CHECK(got_cost <= disjoint_cost({15, 15, 15, 15}, 60, rho, w, 0.1) + 1e-12);
    CHECK(got_cost <= disjoint_cost({0, 0, 0, 60}, 60, rho, w, 0.1) + 1e-12);
    CHECK(got.sum() == 60);
}

TEST_CASE("idle classes receive no channels at the optimum") {
    const CostWeights unit{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    const std::array<double, 4> rho = {3.0, 0.0, 0.0, 0.0};  // only RT_O active
    const ReservationVector got = brute_force_optimum(6, rho, unit, 1, 0.0);
    CHECK(got == ReservationVector{0, 6, 0, 0});
}

TEST_CASE("brute_force_optimum faults on an empty lattice") {
    CostWeights w;
    const std::array<double, 4> rho = {1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(brute_force_optimum(10, rho, w, 3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_optimum(10, rho, w, 0, 0.0), std::invalid_argument);
}
