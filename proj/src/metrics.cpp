#include "cellsim/metrics.hpp"

#include <algorithm>

namespace cellsim {

void MetricsWindow::merge(const MetricsWindow& other) {
    for (int k = 0; k < kNumClasses; ++k) {
        per_class[k].arrived += other.per_class[k].arrived;
        per_class[k].admitted += other.per_class[k].admitted;
        per_class[k].refused += other.per_class[k].refused;
        per_class[k].reneged += other.per_class[k].reneged;
    }
    handoff_waits.insert(handoff_waits.end(), other.handoff_waits.begin(),
                         other.handoff_waits.end());
    busy_channel_time += other.busy_channel_time;
    start = std::min(start, other.start);
    end = std::max(end, other.end);
}

std::optional<double> refusal_probability(const MetricsWindow& w, CallClass c) {
    const std::uint64_t n = w.arrived(c);
    if (n == 0) return std::nullopt;
    return static_cast<double>(w.refusals(c)) / static_cast<double>(n);
}

namespace {

std::optional<double> combined_refusal(const MetricsWindow& w, CallClass a, CallClass b) {
    const std::uint64_t n = w.arrived(a) + w.arrived(b);
    if (n == 0) return std::nullopt;
    return static_cast<double>(w.refusals(a) + w.refusals(b)) / static_cast<double>(n);
}

}  // namespace

std::optional<double> blocking_probability(const MetricsWindow& w) {
    return combined_refusal(w, CallClass::RtOriginating, CallClass::NrtOriginating);
}

std::optional<double> dropping_probability(const MetricsWindow& w) {
    return combined_refusal(w, CallClass::RtHandoff, CallClass::NrtHandoff);
}

std::optional<double> mean_handoff_latency(const MetricsWindow& w, double signaling_delay) {
    if (w.handoff_waits.empty()) return std::nullopt;
    double sum = 0.0;
    for (double wait : w.handoff_waits) sum += wait;
    return sum / static_cast<double>(w.handoff_waits.size()) + signaling_delay;
}

double system_load(const NetworkConfig& cfg) {
    double total_rate = 0.0;
    for (double r : cfg.arrival_rates) total_rate += r;
    const double per_cell = total_rate * cfg.load_multiplier / cfg.num_cells;
    return per_cell * cfg.mean_call_duration / cfg.channels_per_cell;
}

}  // namespace cellsim
