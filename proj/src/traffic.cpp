#include "cellsim/traffic.hpp"

#include <stdexcept>

namespace cellsim {

double per_cell_rate(const NetworkConfig& cfg, CallClass c) {
    return cfg.arrival_rates[class_index(c)] * cfg.load_multiplier / cfg.num_cells;
}

std::vector<TrafficSource> build_sources(const NetworkConfig& cfg) {
    std::vector<TrafficSource> sources;
    sources.reserve(static_cast<std::size_t>(cfg.num_cells) * kNumClasses);
    for (int cell = 0; cell < cfg.num_cells; ++cell) {
        for (CallClass c : kAllClasses) {
            if (cfg.handoff_mode == HandoffMode::Mobility && is_handoff(c)) continue;
            sources.push_back({cell, c, per_cell_rate(cfg, c)});
        }
    }
    return sources;
}

double next_interarrival(const TrafficSource& src, RandomStream& stream) {
    return stream.exponential(src.rate);
}

CallFactory::CallFactory(double mean_duration) : mean_duration_(mean_duration) {
    if (mean_duration <= 0.0)
        throw std::invalid_argument("CallFactory: mean duration must be > 0");
}

Call CallFactory::draw_call(CallClass c, int cell, double now, RandomStream& durations) {
    Call call;
    call.id = next_id_++;
    call.call_class = c;
    call.cell = cell;
    call.created_at = now;
    call.total_duration = durations.exponential(1.0 / mean_duration_);
    call.remaining_duration = call.total_duration;
    return call;
}

double draw_dwell(const NetworkConfig& cfg, RandomStream& stream) {
    if (cfg.velocity <= 0.0) throw std::invalid_argument("draw_dwell: velocity must be > 0");
    if (cfg.cell_diameter <= 0.0)
        throw std::invalid_argument("draw_dwell: cell diameter must be > 0");
    return stream.exponential(cfg.velocity / cfg.cell_diameter);
}

int handoff_target(int cell, int num_cells, RandomStream& stream) {
    if (num_cells < 2)
        throw std::invalid_argument("handoff_target: need at least two cells");
    const int left = (cell + num_cells - 1) % num_cells;
    const int right = (cell + 1) % num_cells;
    return stream.uniform_int(2) == 0 ? left : right;
}

}  // namespace cellsim
