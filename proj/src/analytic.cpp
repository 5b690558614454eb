#include "cellsim/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace cellsim {

double erlang_b(int servers, double erlangs) {
    if (servers < 0) throw std::invalid_argument("erlang_b: servers must be >= 0");
    if (erlangs < 0.0) throw std::invalid_argument("erlang_b: erlangs must be >= 0");
    double b = 1.0;
    for (int c = 1; c <= servers; ++c) b = erlangs * b / (c + erlangs * b);
    return b;
}

double mmck_blocking(int servers, int capacity, double erlangs) {
    if (servers < 1) throw std::invalid_argument("mmck_blocking: servers must be >= 1");
    if (capacity < servers)
        throw std::invalid_argument("mmck_blocking: capacity must be >= servers");
    if (erlangs < 0.0) throw std::invalid_argument("mmck_blocking: erlangs must be >= 0");

    // P(full) = B*a^(K-c) / (1 + B*sum_{j=1..K-c} a^j) with B = Erlang-B and
    // a = rho/c; exact for the birth-death chain with capped service rate.
    const double b = erlang_b(servers, erlangs);
    const double a = erlangs / servers;
    double tail_top = 1.0;  // a^(K-c)
    double tail_sum = 0.0;  // sum of a^j, j = 1..K-c
    for (int j = 1; j <= capacity - servers; ++j) {
        tail_top *= a;
        tail_sum += tail_top;
    }
    return b * tail_top / (1.0 + b * tail_sum);
}

double disjoint_cost(const ReservationVector& rv, int channels,
                     const std::array<double, 4>& rho, const CostWeights& weights,
                     double signaling_delay) {
    if (auto bad = validate_reservation(rv, channels))
        throw std::invalid_argument("disjoint_cost: " + *bad);
    if (rv.sum() != channels)
        throw std::invalid_argument("disjoint_cost: shared pool must be empty (sum == C)");

    const std::array<double, 4> class_weight = {weights.w_b_rt, weights.w_b_nrt,
                                                weights.w_d_rt, weights.w_d_nrt};
    double cost = 0.0;
    for (CallClass c : kAllClasses) {
        const double load = rho[class_index(c)];
        if (load <= 0.0) continue;  // no traffic, no defined refusal probability
        cost += class_weight[class_index(c)] * erlang_b(rv.pool(c), load);
    }
    cost += weights.w_l * std::min(signaling_delay / weights.l_ref, 1.0);
    return cost;
}

ReservationVector brute_force_optimum(int channels, const std::array<double, 4>& rho,
                                      const CostWeights& weights, int stride,
                                      double signaling_delay) {
    if (channels < 1) throw std::invalid_argument("brute_force_optimum: channels must be >= 1");
    if (stride < 1 || channels % stride != 0)
        throw std::invalid_argument(
            "brute_force_optimum: stride must be >= 1 and divide channels (empty lattice)");

    const int n = channels / stride;
    ReservationVector best;
    double best_cost = std::numeric_limits<double>::infinity();
    // Lexicographic ascending scan with strict improvement keeps the
    // lexicographically smallest argmin.
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n - i; ++j)
            for (int k = 0; k <= n - i - j; ++k) {
                const int l = n - i - j - k;
                const ReservationVector rv{i * stride, j * stride, k * stride, l * stride};
                const double cost = disjoint_cost(rv, channels, rho, weights, signaling_delay);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = rv;
                }
            }
    return best;
}

}  // namespace cellsim
