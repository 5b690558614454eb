// Traffic generation: Poisson originating (and, in exogenous mode, handoff)
// arrivals, exponential call durations, dwell times, and ring-topology
// handoff targets.
#pragma once

#include <cstdint>
#include <vector>

#include "cellsim/core.hpp"
#include "cellsim/rng.hpp"

namespace cellsim {

// A Poisson arrival process for one (cell, class). rate is per cell and
// already scaled by load_multiplier; a zero-rate source never fires.
struct TrafficSource {
    int cell = 0;
    CallClass call_class = CallClass::RtOriginating;
    double rate = 0.0;  // calls/s
};

// Per-cell arrival rate of one class: network rate * load_multiplier / cells.
double per_cell_rate(const NetworkConfig& cfg, CallClass c);

// Sources active under the configuration: all four classes per cell in
// exogenous mode; originating classes only in mobility mode, where handoff
// arrivals emerge from dwell expiry instead.
std::vector<TrafficSource> build_sources(const NetworkConfig& cfg);

// Time to the source's next arrival. Requires rate > 0.
double next_interarrival(const TrafficSource& src, RandomStream& stream);

// Mints calls with strictly increasing ids and Exp(1/mean_duration) total
// service times.
class CallFactory {
public:
    explicit CallFactory(double mean_duration);

    Call draw_call(CallClass c, int cell, double now, RandomStream& durations);

    std::uint64_t calls_created() const { return next_id_ - 1; }

private:
    double mean_duration_;
    std::uint64_t next_id_ = 1;
};

// Time until an admitted call leaves its current cell: Exp with mean
// cell_diameter / velocity. Faults unless velocity and diameter are > 0.
double draw_dwell(const NetworkConfig& cfg, RandomStream& stream);

// Uniformly one of the two ring neighbours of `cell`. Requires
// num_cells >= 2 (with one cell there is nowhere to hand off to).
int handoff_target(int cell, int num_cells, RandomStream& stream);

}  // namespace cellsim
