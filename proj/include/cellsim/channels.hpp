// Per-cell channel state: four dedicated pools plus a shared overflow pool,
// optional per-class FIFO queues with reneging, and promotion of queued
// calls when capacity frees up.
#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "cellsim/core.hpp"

namespace cellsim {

enum class PoolKind { Dedicated, Shared };

enum class AdmitOutcome { AdmittedDedicated, AdmittedShared, Queued, Refused };

constexpr bool is_admitted(AdmitOutcome o) {
    return o == AdmitOutcome::AdmittedDedicated || o == AdmitOutcome::AdmittedShared;
}

// A queued call granted a channel after waiting.
struct Grant {
    std::uint64_t call_id = 0;
    CallClass call_class = CallClass::RtOriginating;
    PoolKind pool = PoolKind::Dedicated;
    double wait = 0.0;
};

// Queued handoff calls are served before queued originating calls, and
// real-time before non-real-time, when a shared channel frees up.
inline constexpr std::array<CallClass, 4> kPromotionOrder = {
    CallClass::RtHandoff,
    CallClass::NrtHandoff,
    CallClass::RtOriginating,
    CallClass::NrtOriginating,
};

class CellState {
public:
    CellState(int cell, int channels, const ReservationVector& rv,
              const std::array<int, 4>& queue_capacity);

    // A call tries its dedicated pool first, then the shared pool, then its
    // class queue; Refused means blocked (originating) or dropped (handoff).
    // Every grant also respects the hard cap of `channels` busy channels,
    // which matters while a shrunken pool drains.
    AdmitOutcome try_admit(CallClass c, std::uint64_t call_id, double now);

    // Frees one channel of the given pool, then grants the freed capacity to
    // the highest-priority queued call whose pool has room under the
    // reservation currently in force (dedicated pools scanned in
    // kPromotionOrder, then shared). While no pool is draining this reduces
    // to: a dedicated channel serves only its own class, a shared channel
    // serves any class in priority order.
    std::optional<Grant> release(PoolKind pool, CallClass released_class, double now);

    // Removes a queued call that gave up waiting. Fault if it is not queued.
    void renege(std::uint64_t call_id, CallClass c);

    // Installs a new reservation vector. In-service calls are never
    // preempted; pools that shrank below their occupancy drain naturally.
    // Pools that grew absorb queued calls immediately; the grants are
    // returned in the order they were made.
    std::vector<Grant> set_reservation(const ReservationVector& rv, double now);

    int cell() const { return cell_; }
    int channels() const { return channels_; }
    const ReservationVector& reservation() const { return rv_; }
    int shared_capacity() const { return rv_.shared(channels_); }
    int busy(CallClass c) const { return busy_[class_index(c)]; }
    int shared_busy() const { return shared_busy_; }
    int total_busy() const;
    int max_busy_seen() const { return max_busy_seen_; }
    int queue_length(CallClass c) const {
        return static_cast<int>(queues_[class_index(c)].size());
    }

private:
    struct QueueEntry {
        std::uint64_t call_id;
        double enqueue_time;
    };

    bool has_headroom() const { return total_busy() < channels_; }
    std::optional<Grant> promote_dedicated(CallClass c, double now);
    std::optional<Grant> promote_shared(double now);
    std::optional<Grant> promote_any(double now);
    void note_busy();

    int cell_;
    int channels_;
    ReservationVector rv_;
    std::array<int, 4> busy_{};
    int shared_busy_ = 0;
    std::array<std::deque<QueueEntry>, 4> queues_;
    std::array<int, 4> queue_capacity_;
    int max_busy_seen_ = 0;
};

}  // namespace cellsim
