#include "cellsim/channels.hpp"

#include <stdexcept>

namespace cellsim {

CellState::CellState(int cell, int channels, const ReservationVector& rv,
                     const std::array<int, 4>& queue_capacity)
    : cell_(cell), channels_(channels), rv_(rv), queue_capacity_(queue_capacity) {
    if (auto bad = validate_reservation(rv, channels))
        throw std::invalid_argument("CellState: " + *bad);
    for (int cap : queue_capacity_)
        if (cap < 0) throw std::invalid_argument("CellState: queue capacity must be >= 0");
}

int CellState::total_busy() const {
    return busy_[0] + busy_[1] + busy_[2] + busy_[3] + shared_busy_;
}

void CellState::note_busy() {
    const int total = total_busy();
    if (total > channels_)
        throw std::logic_error("CellState: busy channels exceed cell capacity");
    if (total > max_busy_seen_) max_busy_seen_ = total;
}

AdmitOutcome CellState::try_admit(CallClass c, std::uint64_t call_id, double now) {
    const int k = class_index(c);
    if (has_headroom() && busy_[k] < rv_.pool(c)) {
        ++busy_[k];
        note_busy();
        return AdmitOutcome::AdmittedDedicated;
    }
    if (has_headroom() && shared_busy_ < shared_capacity()) {
        ++shared_busy_;
        note_busy();
        return AdmitOutcome::AdmittedShared;
    }
    if (static_cast<int>(queues_[k].size()) < queue_capacity_[k]) {
        queues_[k].push_back({call_id, now});
        return AdmitOutcome::Queued;
    }
    return AdmitOutcome::Refused;
}

std::optional<Grant> CellState::promote_dedicated(CallClass c, double now) {
    const int k = class_index(c);
    if (queues_[k].empty()) return std::nullopt;
    if (!has_headroom() || busy_[k] >= rv_.pool(c)) return std::nullopt;
    const QueueEntry entry = queues_[k].front();
    queues_[k].pop_front();
    ++busy_[k];
    note_busy();
    return Grant{entry.call_id, c, PoolKind::Dedicated, now - entry.enqueue_time};
}

std::optional<Grant> CellState::promote_shared(double now) {
    if (!has_headroom() || shared_busy_ >= shared_capacity()) return std::nullopt;
    for (CallClass c : kPromotionOrder) {
        auto& q = queues_[class_index(c)];
        if (q.empty()) continue;
        const QueueEntry entry = q.front();
        q.pop_front();
        ++shared_busy_;
        note_busy();
        return Grant{entry.call_id, c, PoolKind::Shared, now - entry.enqueue_time};
    }
    return std::nullopt;
}

std::optional<Grant> CellState::promote_any(double now) {
    for (CallClass c : kPromotionOrder)
        if (auto g = promote_dedicated(c, now)) return g;
    return promote_shared(now);
}

std::optional<Grant> CellState::release(PoolKind pool, CallClass released_class, double now) {
    if (pool == PoolKind::Dedicated) {
        int& n = busy_[class_index(released_class)];
        if (n <= 0) throw std::logic_error("CellState::release: dedicated pool is empty");
        --n;
    } else {
        if (shared_busy_ <= 0)
            throw std::logic_error("CellState::release: shared pool is empty");
        --shared_busy_;
    }
    // One freed channel opens at most one grant: pool and headroom gates are
    // restored the moment a queued call is served.
    return promote_any(now);
}

void CellState::renege(std::uint64_t call_id, CallClass c) {
    auto& q = queues_[class_index(c)];
    for (auto it = q.begin(); it != q.end(); ++it) {
        if (it->call_id == call_id) {
            q.erase(it);
            return;
        }
    }
    throw std::logic_error("CellState::renege: call is not queued");
}

std::vector<Grant> CellState::set_reservation(const ReservationVector& rv, double now) {
    if (auto bad = validate_reservation(rv, channels_))
        throw std::invalid_argument("CellState::set_reservation: " + *bad);
    rv_ = rv;

    std::vector<Grant> grants;
    for (CallClass c : kPromotionOrder)
        while (auto g = promote_dedicated(c, now)) grants.push_back(*g);
    while (auto g = promote_shared(now)) grants.push_back(*g);
    return grants;
}

}  // namespace cellsim
