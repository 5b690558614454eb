// The simulator: wires traffic sources, per-cell channel state, controllers,
// and the metrics recorder into one deterministic event loop.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cellsim/controllers.hpp"
#include "cellsim/core.hpp"
#include "cellsim/metrics.hpp"

namespace cellsim {

// Whole-run counters for one (cell, class), kept from t=0 regardless of
// warmup. Every arrival is accounted for exactly once.
struct CellClassTotals {
    std::uint64_t arrived = 0;
    std::uint64_t admitted = 0;
    std::uint64_t refused = 0;
    std::uint64_t reneged = 0;
    std::uint64_t still_queued = 0;  // waiting when the run ended

    bool conserved() const {
        return arrived == admitted + refused + reneged + still_queued;
    }
};

// One cell's metrics over one control period, with the reservation that was
// in force.
struct WindowRecord {
    int window_index = 0;
    int cell = 0;
    ReservationVector reservation;
    MetricsWindow window;
    double cost = 0.0;
};

struct RunResult {
    std::vector<WindowRecord> windows;  // only windows starting at/after warmup
    MetricsWindow aggregate;            // network-wide, events at/after warmup

    // totals[cell][class_index], from t=0. Verified conserved before return.
    std::vector<std::array<CellClassTotals, 4>> totals;

    std::uint64_t handoff_requests = 0;      // dwell expiries at/after warmup
    std::uint64_t originating_admitted = 0;  // at/after warmup; denominator for
                                             // handoffs per admitted call
    int max_busy = 0;                        // peak busy channels in any one cell
    double mean_window_cost = 0.0;           // over every (cell, window), incl. warmup
    std::vector<ReservationVector> final_reservation;  // per cell, at run end
    std::uint64_t events_processed = 0;
};

// Runs the configuration to sim_duration. All randomness derives from
// `seed`; identical (cfg, seed) gives an identical result. Controllers are
// built per cell from the configuration.
RunResult simulate(const NetworkConfig& cfg, std::uint64_t seed);

// Same, but with caller-owned controllers (one per cell), so learning state
// can persist across consecutive runs. The vector size must equal num_cells.
RunResult simulate(const NetworkConfig& cfg, std::uint64_t seed,
                   const std::vector<Controller*>& controllers);

}  // namespace cellsim
