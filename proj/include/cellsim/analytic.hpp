// Closed-form teletraffic oracles: Erlang-B, M/M/c/K blocking, and the
// exhaustive reservation optimum over a stride lattice. Pure functions.
#pragma once

#include <array>

#include "cellsim/core.hpp"

namespace cellsim {

// Erlang-B blocking of an M/M/c/c loss system, by the stable recursion
// B(0) = 1, B(c) = rho*B(c-1) / (c + rho*B(c-1)). Note B(0, 0) = 1: with no
// servers every arrival is lost regardless of load.
double erlang_b(int servers, double erlangs);

// Stationary probability of a full M/M/c/K system (K = servers + queue
// places). Reduces exactly to erlang_b when capacity == servers.
double mmck_blocking(int servers, int capacity, double erlangs);

// Weighted cost of four independent pure-loss pools under offered loads
// rho (indexed by CallClass). Requires the vector to use all channels
// (shared pool empty); classes with rho == 0 contribute nothing. The
// latency term is the constant w_l * min(delta/l_ref, 1): under pure loss
// an admitted handoff waits exactly the signaling delay.
double disjoint_cost(const ReservationVector& rv, int channels,
                     const std::array<double, 4>& rho, const CostWeights& weights,
                     double signaling_delay);

// Argmin of disjoint_cost over all four-way stride-lattice partitions of
// `channels`; ties resolve to the lexicographically smallest (noc, roc,
// nhc, rhc). stride must be >= 1 and divide channels.
ReservationVector brute_force_optimum(int channels, const std::array<double, 4>& rho,
                                      const CostWeights& weights, int stride,
                                      double signaling_delay);

}  // namespace cellsim
