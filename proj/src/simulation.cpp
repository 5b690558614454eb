#include "cellsim/simulation.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cellsim/channels.hpp"
#include "cellsim/kernel.hpp"
#include "cellsim/rng.hpp"
#include "cellsim/traffic.hpp"

namespace cellsim {

namespace {

struct ActiveCall {
    Call call;  // call.call_class and call.cell track the current cell
    PoolKind pool = PoolKind::Dedicated;
    bool in_service = false;
    double service_start = 0.0;
    std::uint64_t epoch = 0;  // bumped on every grant; stale renege events compare unequal
};

class Engine {
public:
    Engine(const NetworkConfig& cfg, std::uint64_t seed,
           const std::vector<Controller*>& controllers)
        : cfg_(cfg), factory_(cfg.mean_call_duration) {
        if (auto violations = validate_config(cfg); !violations.empty()) {
            std::ostringstream msg;
            msg << "invalid configuration:";
            for (const auto& rule : violations) msg << " [" << rule << "]";
            throw ConfigError(msg.str());
        }

        if (controllers.empty()) {
            owned_.reserve(static_cast<std::size_t>(cfg.num_cells));
            for (int cell = 0; cell < cfg.num_cells; ++cell)
                owned_.push_back(make_controller(cfg, cell, seed));
            for (auto& c : owned_) controllers_.push_back(c.get());
        } else {
            if (static_cast<int>(controllers.size()) != cfg.num_cells)
                throw std::invalid_argument("simulate: need one controller per cell");
            controllers_ = controllers;
        }

        for (int cell = 0; cell < cfg.num_cells; ++cell)
            cells_.emplace_back(cell, cfg.channels_per_cell, cfg.initial_reservation(),
                                cfg.queue_capacity);

        sources_ = build_sources(cfg);
        source_index_.assign(static_cast<std::size_t>(cfg.num_cells) * kNumClasses, -1);
        for (std::size_t i = 0; i < sources_.size(); ++i) {
            const auto& src = sources_[i];
            source_index_[static_cast<std::size_t>(src.cell) * kNumClasses +
                          class_index(src.call_class)] = static_cast<int>(i);
            arrival_streams_.emplace_back(derive_stream_seed(
                seed, src.cell, class_index(src.call_class), StreamPurpose::Arrival));
        }
        for (int cell = 0; cell < cfg.num_cells; ++cell) {
            for (CallClass c : kAllClasses) {
                duration_streams_.emplace_back(
                    derive_stream_seed(seed, cell, class_index(c), StreamPurpose::Duration));
                dwell_streams_.emplace_back(
                    derive_stream_seed(seed, cell, class_index(c), StreamPurpose::Dwell));
            }
            target_streams_.emplace_back(
                derive_stream_seed(seed, cell, -1, StreamPurpose::HandoffTarget));
        }

        const std::size_t n = static_cast<std::size_t>(cfg.num_cells);
        current_.resize(n);
        rv_in_force_.resize(n);
        last_busy_change_.assign(n, 0.0);
        result_.totals.resize(n);
    }

    RunResult run() {
        open_first_windows();
        for (std::size_t i = 0; i < sources_.size(); ++i) {
            if (sources_[i].rate <= 0.0) continue;
            Event e;
            e.time = next_interarrival(sources_[i], arrival_streams_[i]);
            e.kind = EventKind::Arrival;
            e.cell = sources_[i].cell;
            e.call_class = sources_[i].call_class;
            queue_.schedule(e);
        }
        if (cfg_.control_period < cfg_.sim_duration) {
            Event tick;
            tick.time = cfg_.control_period;
            tick.kind = EventKind::ControlTick;
            tick.call_id = 1;  // tick index
            queue_.schedule(tick);
        }

        while (const Event* next = queue_.peek()) {
            if (next->time >= cfg_.sim_duration) break;
            const Event e = *queue_.pop_next();
            ++result_.events_processed;
            dispatch(e);
        }

        close_windows(cfg_.sim_duration, /*decide=*/false);
        finalize();
        return std::move(result_);
    }

private:
    const TrafficSource& source(int cell, CallClass c) const {
        const int i =
            source_index_[static_cast<std::size_t>(cell) * kNumClasses + class_index(c)];
        if (i < 0) throw std::logic_error("no traffic source for this cell and class");
        return sources_[static_cast<std::size_t>(i)];
    }
    RandomStream& arrival_stream(int cell, CallClass c) {
        const int i =
            source_index_[static_cast<std::size_t>(cell) * kNumClasses + class_index(c)];
        if (i < 0) throw std::logic_error("no traffic source for this cell and class");
        return arrival_streams_[static_cast<std::size_t>(i)];
    }
    RandomStream& duration_stream(int cell, CallClass c) {
        return duration_streams_[static_cast<std::size_t>(cell) * kNumClasses +
                                 class_index(c)];
    }
    RandomStream& dwell_stream(int cell, CallClass c) {
        return dwell_streams_[static_cast<std::size_t>(cell) * kNumClasses + class_index(c)];
    }

    void dispatch(const Event& e) {
        switch (e.kind) {
        case EventKind::Arrival: handle_arrival(e); break;
        case EventKind::ServiceEnd: handle_service_end(e); break;
        case EventKind::HandoffRequest: handle_handoff_request(e); break;
        case EventKind::Renege: handle_renege(e); break;
        case EventKind::ControlTick: handle_control_tick(e); break;
        }
    }

    // Busy-channel time accrues against the occupancy in force since the
    // last change, so this must run before any occupancy mutation.
    void touch_cell(int cell, double now) {
        double& last = last_busy_change_[static_cast<std::size_t>(cell)];
        if (now <= last) return;
        const int busy = cells_[static_cast<std::size_t>(cell)].total_busy();
        current_[static_cast<std::size_t>(cell)].busy_channel_time += busy * (now - last);
        const double from = std::max(last, cfg_.warmup);
        if (now > from) result_.aggregate.busy_channel_time += busy * (now - from);
        last = now;
    }

    void count_arrival(int cell, CallClass c, double now) {
        const int k = class_index(c);
        ++current_[static_cast<std::size_t>(cell)].per_class[k].arrived;
        ++result_.totals[static_cast<std::size_t>(cell)][k].arrived;
        if (now >= cfg_.warmup) ++result_.aggregate.per_class[k].arrived;
    }

    void count_refusal(int cell, CallClass c, double now) {
        const int k = class_index(c);
        ++current_[static_cast<std::size_t>(cell)].per_class[k].refused;
        ++result_.totals[static_cast<std::size_t>(cell)][k].refused;
        if (now >= cfg_.warmup) ++result_.aggregate.per_class[k].refused;
    }

    void count_renege(int cell, CallClass c, double now) {
        const int k = class_index(c);
        ++current_[static_cast<std::size_t>(cell)].per_class[k].reneged;
        ++result_.totals[static_cast<std::size_t>(cell)][k].reneged;
        if (now >= cfg_.warmup) ++result_.aggregate.per_class[k].reneged;
    }

    void count_admission(int cell, CallClass c, double wait, double now) {
        const int k = class_index(c);
        ++current_[static_cast<std::size_t>(cell)].per_class[k].admitted;
        ++result_.totals[static_cast<std::size_t>(cell)][k].admitted;
        if (is_handoff(c)) current_[static_cast<std::size_t>(cell)].handoff_waits.push_back(wait);
        if (now >= cfg_.warmup) {
            ++result_.aggregate.per_class[k].admitted;
            if (is_handoff(c))
                result_.aggregate.handoff_waits.push_back(wait);
            else
                ++result_.originating_admitted;
        }
    }

    // Schedules the one event that ends this call's stay in its cell:
    // a handoff request if (in mobility mode) the dwell expires first,
    // otherwise the service end. Exactly one is scheduled, so nothing ever
    // needs cancelling.
    void schedule_departure(ActiveCall& ac, double now) {
        const int cell = ac.call.cell;
        if (cfg_.handoff_mode == HandoffMode::Mobility && cfg_.num_cells >= 2) {
            const double dwell = draw_dwell(cfg_, dwell_stream(cell, ac.call.call_class));
            if (dwell < ac.call.remaining_duration) {
                Event e;
                e.time = now + dwell;
                e.kind = EventKind::HandoffRequest;
                e.call_id = ac.call.id;
                e.cell = cell;
                queue_.schedule(e);
                return;
            }
        }
        Event e;
        e.time = now + ac.call.remaining_duration;
        e.kind = EventKind::ServiceEnd;
        e.call_id = ac.call.id;
        e.cell = cell;
        queue_.schedule(e);
    }

    void handle_grant(int cell, const Grant& g, double now) {
        ActiveCall& ac = active_.at(g.call_id);
        ac.in_service = true;
        ac.pool = g.pool;
        ac.service_start = now;
        ++ac.epoch;  // any pending renege event is now stale
        count_admission(cell, ac.call.call_class, g.wait, now);
        schedule_departure(ac, now);
    }

    // Admission attempt shared by fresh arrivals and incoming handoffs. The
    // call must already be counted as arrived.
    void admit_or_queue(Call call, double now) {
        const int cell = call.cell;
        const CallClass c = call.call_class;
        touch_cell(cell, now);
        const AdmitOutcome outcome = cells_[static_cast<std::size_t>(cell)].try_admit(
            c, call.id, now);
        switch (outcome) {
        case AdmitOutcome::AdmittedDedicated:
        case AdmitOutcome::AdmittedShared: {
            ActiveCall ac;
            ac.call = call;
            ac.pool = outcome == AdmitOutcome::AdmittedDedicated ? PoolKind::Dedicated
                                                                 : PoolKind::Shared;
            ac.in_service = true;
            ac.service_start = now;
            auto [it, inserted] = active_.emplace(call.id, std::move(ac));
            count_admission(cell, c, 0.0, now);
            schedule_departure(it->second, now);
            break;
        }
        case AdmitOutcome::Queued: {
            ActiveCall ac;
            ac.call = call;
            ac.in_service = false;
            auto [it, inserted] = active_.emplace(call.id, std::move(ac));
            const double deadline = cfg_.renege_deadline[class_index(c)];
            if (deadline > 0.0) {
                Event e;
                e.time = now + deadline;
                e.kind = EventKind::Renege;
                e.call_id = call.id;
                e.epoch = it->second.epoch;
                e.cell = cell;
                queue_.schedule(e);
            }
            break;
        }
        case AdmitOutcome::Refused:
            count_refusal(cell, c, now);
            break;
        }
    }

    void handle_arrival(const Event& e) {
        const double now = e.time;
        count_arrival(e.cell, e.call_class, now);
        Call call = factory_.draw_call(e.call_class, e.cell, now,
                                       duration_stream(e.cell, e.call_class));
        if (is_handoff(e.call_class)) call.handoff_requested_at = now;
        admit_or_queue(std::move(call), now);

        Event next = e;
        next.time = now + next_interarrival(source(e.cell, e.call_class),
                                            arrival_stream(e.cell, e.call_class));
        queue_.schedule(next);
    }

    void handle_service_end(const Event& e) {
        const double now = e.time;
        const ActiveCall& ac = active_.at(e.call_id);
        const int cell = ac.call.cell;
        const PoolKind pool = ac.pool;
        const CallClass c = ac.call.call_class;
        touch_cell(cell, now);
        active_.erase(e.call_id);
        const auto grant = cells_[static_cast<std::size_t>(cell)].release(pool, c, now);
        if (grant) handle_grant(cell, *grant, now);
    }

    void handle_handoff_request(const Event& e) {
        const double now = e.time;
        auto it = active_.find(e.call_id);
        if (it == active_.end())
            throw std::logic_error("handoff request for an unknown call");
        ActiveCall& ac = it->second;

        const int from = ac.call.cell;
        touch_cell(from, now);
        const auto grant =
            cells_[static_cast<std::size_t>(from)].release(ac.pool, ac.call.call_class, now);
        if (now >= cfg_.warmup) ++result_.handoff_requests;

        ac.call.remaining_duration =
            std::max(0.0, ac.call.remaining_duration - (now - ac.service_start));
        ac.call.call_class = handoff_reclass(ac.call.call_class);
        ac.call.cell = handoff_target(from, cfg_.num_cells, target_streams_[from]);
        ac.call.handoff_requested_at = now;
        ac.in_service = false;

        if (grant) handle_grant(from, *grant, now);

        // Re-admission in the target cell; the moved call keeps its id,
        // remaining duration, and epoch.
        Call moved = ac.call;
        const std::uint64_t epoch = ac.epoch;
        count_arrival(moved.cell, moved.call_class, now);
        active_.erase(it);
        ActiveCall replacement;
        replacement.call = std::move(moved);
        replacement.epoch = epoch;
        readmit(std::move(replacement), now);
    }

    // admit_or_queue for a call object that already has history (epoch).
    void readmit(ActiveCall ac, double now) {
        const int cell = ac.call.cell;
        const CallClass c = ac.call.call_class;
        touch_cell(cell, now);
        const AdmitOutcome outcome =
            cells_[static_cast<std::size_t>(cell)].try_admit(c, ac.call.id, now);
        switch (outcome) {
        case AdmitOutcome::AdmittedDedicated:
        case AdmitOutcome::AdmittedShared: {
            ac.pool = outcome == AdmitOutcome::AdmittedDedicated ? PoolKind::Dedicated
                                                                 : PoolKind::Shared;
            ac.in_service = true;
            ac.service_start = now;
            auto [it, inserted] = active_.emplace(ac.call.id, std::move(ac));
            count_admission(cell, c, 0.0, now);
            schedule_departure(it->second, now);
            break;
        }
        case AdmitOutcome::Queued: {
            ac.in_service = false;
            const std::uint64_t id = ac.call.id;
            auto [it, inserted] = active_.emplace(id, std::move(ac));
            const double deadline = cfg_.renege_deadline[class_index(c)];
            if (deadline > 0.0) {
                Event e;
                e.time = now + deadline;
                e.kind = EventKind::Renege;
                e.call_id = id;
                e.epoch = it->second.epoch;
                e.cell = cell;
                queue_.schedule(e);
            }
            break;
        }
        case AdmitOutcome::Refused:
            count_refusal(cell, c, now);
            break;
        }
    }

    void handle_renege(const Event& e) {
        const double now = e.time;
        auto it = active_.find(e.call_id);
        if (it == active_.end()) return;                          // call already gone
        if (it->second.in_service || it->second.epoch != e.epoch) return;  // granted since
        const int cell = it->second.call.cell;
        const CallClass c = it->second.call.call_class;
        cells_[static_cast<std::size_t>(cell)].renege(e.call_id, c);
        count_renege(cell, c, now);
        active_.erase(it);
    }

    void handle_control_tick(const Event& e) {
        close_windows(e.time, /*decide=*/true);
        const double next = static_cast<double>(e.call_id + 1) * cfg_.control_period;
        if (next < cfg_.sim_duration) {
            Event tick;
            tick.time = next;
            tick.kind = EventKind::ControlTick;
            tick.call_id = e.call_id + 1;
            queue_.schedule(tick);
        }
    }

    // The run opens with a decision from each controller against an empty
    // window, so the first period already runs under policy control.
    void open_first_windows() {
        const MetricsWindow empty{};
        for (int cell = 0; cell < cfg_.num_cells; ++cell) {
            const ReservationVector rv =
                controllers_[static_cast<std::size_t>(cell)]->decide(
                    empty, cfg_.initial_reservation());
            cells_[static_cast<std::size_t>(cell)].set_reservation(rv, 0.0);
            current_[static_cast<std::size_t>(cell)].start = 0.0;
            rv_in_force_[static_cast<std::size_t>(cell)] = rv;
        }
    }

    void close_windows(double now, bool decide) {
        for (int cell = 0; cell < cfg_.num_cells; ++cell) {
            const auto i = static_cast<std::size_t>(cell);
            touch_cell(cell, now);
            MetricsWindow& w = current_[i];
            w.end = now;
            const double cost = window_cost(w, cfg_.cost_weights, cfg_.signaling_delay);
            controllers_[i]->notify_reward(cost);
            cost_sum_ += cost;
            ++cost_count_;

            ReservationVector next_rv;
            if (decide) next_rv = controllers_[i]->decide(w, cells_[i].reservation());

            if (w.start >= cfg_.warmup)
                result_.windows.push_back({window_index_, cell, rv_in_force_[i], w, cost});

            w = MetricsWindow{};
            w.start = now;
            if (decide) {
                const auto grants = cells_[i].set_reservation(next_rv, now);
                for (const Grant& g : grants) handle_grant(cell, g, now);
            }
            rv_in_force_[i] = cells_[i].reservation();
        }
        ++window_index_;
    }

    void finalize() {
        for (int cell = 0; cell < cfg_.num_cells; ++cell) {
            const auto i = static_cast<std::size_t>(cell);
            for (CallClass c : kAllClasses) {
                auto& t = result_.totals[i][class_index(c)];
                t.still_queued = static_cast<std::uint64_t>(cells_[i].queue_length(c));
                if (!t.conserved()) {
                    std::ostringstream msg;
                    msg << "conservation violated in cell " << cell << " class "
                        << to_string(c) << ": arrived " << t.arrived << " != admitted "
                        << t.admitted << " + refused " << t.refused << " + reneged "
                        << t.reneged << " + queued " << t.still_queued;
                    throw std::logic_error(msg.str());
                }
            }
            result_.max_busy = std::max(result_.max_busy, cells_[i].max_busy_seen());
            result_.final_reservation.push_back(cells_[i].reservation());
        }
        result_.aggregate.start = cfg_.warmup;
        result_.aggregate.end = cfg_.sim_duration;
        result_.mean_window_cost = cost_count_ > 0 ? cost_sum_ / cost_count_ : 0.0;
    }

    NetworkConfig cfg_;
    CallFactory factory_;
    EventQueue queue_;
    std::vector<CellState> cells_;
    std::vector<Controller*> controllers_;
    std::vector<std::unique_ptr<Controller>> owned_;

    std::vector<TrafficSource> sources_;
    std::vector<int> source_index_;  // (cell, class) -> index into sources_, -1 if none
    std::vector<RandomStream> arrival_streams_;
    std::vector<RandomStream> duration_streams_;
    std::vector<RandomStream> dwell_streams_;
    std::vector<RandomStream> target_streams_;

    std::unordered_map<std::uint64_t, ActiveCall> active_;
    std::vector<MetricsWindow> current_;
    std::vector<ReservationVector> rv_in_force_;
    std::vector<double> last_busy_change_;
    int window_index_ = 0;
    double cost_sum_ = 0.0;
    std::uint64_t cost_count_ = 0;

    RunResult result_;
};

}  // namespace

RunResult simulate(const NetworkConfig& cfg, std::uint64_t seed) {
    return Engine(cfg, seed, {}).run();
}

RunResult simulate(const NetworkConfig& cfg, std::uint64_t seed,
                   const std::vector<Controller*>& controllers) {
    if (controllers.empty())
        throw std::invalid_argument("simulate: controller list must not be empty");
    return Engine(cfg, seed, controllers).run();
}

}  // namespace cellsim
