// Core domain types: call classes, per-cell channel reservation vectors,
// calls, and the network configuration shared by every other component.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellsim {

// The four traffic classes: {real-time, non-real-time} x {originating, handoff}.
// Refusing an originating call counts as blocking; refusing a handoff call
// counts as dropping.
enum class CallClass : int {
    RtOriginating = 0,
    NrtOriginating = 1,
    RtHandoff = 2,
    NrtHandoff = 3,
};

inline constexpr int kNumClasses = 4;

inline constexpr std::array<CallClass, kNumClasses> kAllClasses = {
    CallClass::RtOriginating,
    CallClass::NrtOriginating,
    CallClass::RtHandoff,
    CallClass::NrtHandoff,
};

constexpr int class_index(CallClass c) { return static_cast<int>(c); }

constexpr bool is_handoff(CallClass c) {
    return c == CallClass::RtHandoff || c == CallClass::NrtHandoff;
}

constexpr bool is_realtime(CallClass c) {
    return c == CallClass::RtOriginating || c == CallClass::RtHandoff;
}

// Class a call presents as when it re-enters admission at the next cell.
constexpr CallClass handoff_reclass(CallClass c) {
    switch (c) {
    case CallClass::RtOriginating: return CallClass::RtHandoff;
    case CallClass::NrtOriginating: return CallClass::NrtHandoff;
    default: return c;
    }
}

const char* to_string(CallClass c);

// Sizes of the four dedicated channel pools within a cell. Pool ownership:
// noc serves non-real-time originating, roc real-time originating, nhc
// non-real-time handoff, rhc real-time handoff. Whatever is left of the
// cell's C channels (S = C - sum) is a shared overflow pool usable by any
// class once its dedicated pool is full.
struct ReservationVector {
    int noc = 0;
    int roc = 0;
    int nhc = 0;
    int rhc = 0;

    int sum() const { return noc + roc + nhc + rhc; }
    int shared(int channels) const { return channels - sum(); }

    int pool(CallClass c) const {
        switch (c) {
        case CallClass::RtOriginating: return roc;
        case CallClass::NrtOriginating: return noc;
        case CallClass::RtHandoff: return rhc;
        case CallClass::NrtHandoff: return nhc;
        }
        return 0;
    }

    int& pool(CallClass c) {
        switch (c) {
        case CallClass::RtOriginating: return roc;
        case CallClass::NrtOriginating: return noc;
        case CallClass::RtHandoff: return rhc;
        default: return nhc;
        }
    }

    friend auto operator<=>(const ReservationVector&, const ReservationVector&) = default;
};

// Equal four-way split of the cell's channels; any remainder goes to the
// shared pool.
ReservationVector equal_split(int channels);

// One admission-seeking entity. remaining_duration is the service time
// still owed; it shrinks only while the call holds a channel.
struct Call {
    std::uint64_t id = 0;
    CallClass call_class = CallClass::RtOriginating;
    int cell = 0;
    double created_at = 0.0;
    double total_duration = 0.0;
    double remaining_duration = 0.0;
    std::optional<double> handoff_requested_at;
};

enum class HandoffMode { Exogenous, Mobility };

enum class ControllerKind { Static, LearningAutomata, Neural, Oracle };

// Weights of the scalar cost a controller minimises. The latency term is
// capped at w_l once the mean handoff latency reaches l_ref.
struct CostWeights {
    double w_b_rt = 1.0;
    double w_b_nrt = 1.0;
    double w_d_rt = 10.0;
    double w_d_nrt = 5.0;
    double w_l = 1.0;
    double l_ref = 1.0;

    friend bool operator==(const CostWeights&, const CostWeights&) = default;
};

struct LaParams {
    double learning_rate = 0.1;  // reward-inaction step, in (0,1)
    double j_scale = 1.0;        // cost-to-reward scale: beta = max(0, 1 - J/j_scale)

    friend bool operator==(const LaParams&, const LaParams&) = default;
};

struct NeuralParams {
    int hidden_units = 16;
    double learning_rate = 0.01;
    double baseline_decay = 0.9;

    friend bool operator==(const NeuralParams&, const NeuralParams&) = default;
};

// Full simulation configuration. Per-class arrays are indexed by CallClass
// in the order (RT originating, NRT originating, RT handoff, NRT handoff).
// Arrival rates are network-wide; each cell sees rate * load_multiplier /
// num_cells. A renege deadline of 0 disables reneging for that class.
struct NetworkConfig {
    int num_cells = 15;
    int channels_per_cell = 60;
    std::array<double, 4> arrival_rates = {12.0, 20.0, 5.0, 10.0};
    double mean_call_duration = 10.0;
    double velocity = 20.0;
    double cell_diameter = 1000.0;
    HandoffMode handoff_mode = HandoffMode::Exogenous;
    std::array<int, 4> queue_capacity = {0, 0, 0, 0};
    std::array<double, 4> renege_deadline = {2.0, 10.0, 2.0, 10.0};
    double signaling_delay = 0.1;
    double control_period = 100.0;
    double load_multiplier = 1.0;
    std::uint64_t seed = 1;
    double sim_duration = 1000.0;
    double warmup = 0.0;

    // Reservation policy.
    ControllerKind controller = ControllerKind::Static;
    std::optional<ReservationVector> reservation;  // defaults to equal_split(C)
    CostWeights cost_weights;
    LaParams la;
    NeuralParams neural;
    int action_stride = 0;  // 0 -> ceil(C / 12)

    ReservationVector initial_reservation() const {
        return reservation ? *reservation : equal_split(channels_per_cell);
    }
    int effective_stride() const {
        return action_stride > 0 ? action_stride : (channels_per_cell + 11) / 12;
    }

    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

const char* to_string(HandoffMode m);
const char* to_string(ControllerKind k);

// Returns the list of violated invariants; empty means the configuration is
// usable. Violations are data, not faults.
std::vector<std::string> validate_config(const NetworkConfig& cfg);

// Checks component non-negativity and sum <= channels. Returns the violation
// text, or nullopt when the vector is valid.
std::optional<std::string> validate_reservation(const ReservationVector& rv, int channels);

// Raised by configuration ingestion on malformed documents.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON ingestion. Field names match the struct members; unknown keys are an
// error so typos do not silently fall back to defaults.
NetworkConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const NetworkConfig& cfg);
NetworkConfig load_config(const std::filesystem::path& path);

}  // namespace cellsim
