// Discrete-event kernel: timestamped events ordered by (time, insertion seq)
// and a clock that only moves forward.
#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "cellsim/core.hpp"

namespace cellsim {

enum class EventKind : int {
    Arrival = 0,
    ServiceEnd = 1,
    HandoffRequest = 2,
    Renege = 3,
    ControlTick = 4,
};

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;  // assigned by the queue at insertion
    EventKind kind = EventKind::Arrival;

    // Payload; which fields are meaningful depends on kind.
    std::uint64_t call_id = 0;
    std::uint64_t epoch = 0;
    int cell = -1;
    CallClass call_class = CallClass::RtOriginating;
};

// Min-heap on (time, seq). Equal-time events pop in insertion order, which
// pins the whole event trace for a given seed.
class EventQueue {
public:
    double clock() const { return clock_; }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    void schedule(Event e) {
        if (e.time < clock_)
            throw std::logic_error("EventQueue::schedule: event in the past");
        e.seq = next_seq_++;
        heap_.push(e);
    }

    std::optional<Event> pop_next() {
        if (heap_.empty()) return std::nullopt;
        Event e = heap_.top();
        heap_.pop();
        clock_ = e.time;
        return e;
    }

    const Event* peek() const { return heap_.empty() ? nullptr : &heap_.top(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    double clock_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
};

}  // namespace cellsim
