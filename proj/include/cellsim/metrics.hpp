// Per-window counting and the three performance measures: blocking
// probability, dropping probability, and mean handoff latency, plus the
// dimensionless system load of a configuration.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cellsim/core.hpp"

namespace cellsim {

struct ClassCounts {
    std::uint64_t arrived = 0;
    std::uint64_t admitted = 0;
    std::uint64_t refused = 0;
    std::uint64_t reneged = 0;
};

// Counters accumulated over one observation interval. handoff_waits holds
// the queue wait (grant time - request time) of every handoff admission in
// the window; the signaling delay is added when latency is reported.
// Admissions granted from a queue are counted in the window of the grant,
// which under queueing can trail the window of the arrival.
struct MetricsWindow {
    double start = 0.0;
    double end = 0.0;
    std::array<ClassCounts, 4> per_class{};
    std::vector<double> handoff_waits;
    double busy_channel_time = 0.0;  // integral of busy channels over the window

    std::uint64_t arrived(CallClass c) const { return per_class[class_index(c)].arrived; }
    std::uint64_t refusals(CallClass c) const {
        const ClassCounts& k = per_class[class_index(c)];
        return k.refused + k.reneged;
    }

    // Commutative merge: counts add, waits concatenate.
    void merge(const MetricsWindow& other);
};

// Fraction of arrivals of one class that were refused or reneged; nullopt
// when the class saw no arrivals.
std::optional<double> refusal_probability(const MetricsWindow& w, CallClass c);

// Refusals over arrivals across both originating classes.
std::optional<double> blocking_probability(const MetricsWindow& w);

// Refusals over arrivals across both handoff classes.
std::optional<double> dropping_probability(const MetricsWindow& w);

// Mean over admitted handoff calls of (queue wait + signaling delay);
// nullopt when no handoff call was admitted in the window.
std::optional<double> mean_handoff_latency(const MetricsWindow& w, double signaling_delay);

// Offered Erlangs per channel per cell:
// (sum_k rate_k * multiplier / cells) * mean duration / channels.
double system_load(const NetworkConfig& cfg);

}  // namespace cellsim
