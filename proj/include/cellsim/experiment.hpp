// Experiment orchestration on top of the simulator: run summaries, sweeps
// over load or velocity with replications, the analytic-oracle validation
// harness, brute-force optimisation, controller training with warm starts,
// and deterministic CSV emission for all of them.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cellsim/core.hpp"
#include "cellsim/simulation.hpp"

namespace cellsim {

// Headline scalars of one run, computed from the post-warmup aggregate.
// A metric is absent when its denominator saw no events.
struct RunSummary {
    std::optional<double> pb_rt;      // RT originating refusal fraction
    std::optional<double> pb_nrt;     // NRT originating refusal fraction
    std::optional<double> pd_rt;      // RT handoff refusal fraction
    std::optional<double> pd_nrt;     // NRT handoff refusal fraction
    std::optional<double> blocking;   // both originating classes combined
    std::optional<double> dropping;   // both handoff classes combined
    std::optional<double> latency;    // mean handoff latency, seconds
    std::optional<double> handoffs_per_call;  // handoff requests / admitted originating
    double load = 0.0;                // offered Erlangs per channel per cell
    std::uint64_t arrivals = 0;       // post-warmup arrivals, all classes
};

RunSummary summarize_run(const NetworkConfig& cfg, const RunResult& result);

// Per-window per-cell CSV; fixed header, one row per (window, cell).
void write_run_csv(std::ostream& out, const NetworkConfig& cfg, const RunResult& result);

struct SweepSpec {
    std::string variable = "load_multiplier";  // or "velocity"
    std::vector<double> values;                // strictly increasing
    int replications = 1;
    NetworkConfig base;
};

// The base configuration with one sweep value applied.
NetworkConfig apply_sweep_value(const NetworkConfig& base, const std::string& variable,
                                double value);

struct SweepRow {
    double value = 0.0;
    int replication = 0;
    RunSummary summary;
};

// Mean and sample standard deviation over the replications in which the
// metric was defined.
struct Stat {
    double mean = 0.0;
    double sd = 0.0;
    int n = 0;
};

struct SweepAggregate {
    double value = 0.0;
    Stat pb_rt, pb_nrt, pd_rt, pd_nrt, blocking, dropping, latency, handoffs_per_call;
    Stat load, arrivals;
};

struct SweepResult {
    std::vector<SweepRow> rows;             // (value, replication) order
    std::vector<SweepAggregate> aggregates; // one per value
};

// Replication r of every value runs with seed base.seed + r, so points share
// common random numbers.
SweepResult run_sweep(const SweepSpec& spec);

// Data rows plus, per value, a mean row and an sd row (replication column
// "mean" / "sd").
void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result);

// Figure series: per-class blocking vs load, dropping vs load (both from a
// load_multiplier sweep), and handoff latency vs velocity with a 95% CI
// (from a velocity sweep).
void write_blocking_figure(std::ostream& out, const SweepSpec& spec, const SweepResult& r);
void write_dropping_figure(std::ostream& out, const SweepSpec& spec, const SweepResult& r);
void write_latency_figure(std::ostream& out, const SweepSpec& spec, const SweepResult& r);

// Oracle-equivalence harness: a single-cell pure-loss exogenous run whose
// four disjoint pools are independent Erlang loss systems, compared per
// class against the closed-form blocking.
struct ValidationOptions {
    std::uint64_t seed = 1234;
    int replications = 10;
    double sim_duration = 12000.0;  // per replication, seconds
    double warmup = 1000.0;
};

struct ValidationClassReport {
    CallClass call_class = CallClass::RtOriginating;
    double rho = 0.0;        // offered Erlangs
    int pool = 0;            // dedicated pool size
    double analytic = 0.0;   // closed-form blocking
    double simulated = 0.0;  // mean across replications
    double abs_diff = 0.0;
    double stderr_mean = 0.0;  // cross-replication standard error
    std::uint64_t arrivals = 0;
    bool pass = false;
};

struct ValidationReport {
    std::array<ValidationClassReport, 4> classes;
    std::uint64_t min_class_arrivals = 0;
    bool sufficient_samples = false;  // >= 100000 arrivals in every class
    bool pass = false;
    NetworkConfig config;
};

ValidationReport run_validation(const ValidationOptions& options);
void write_validation_report(std::ostream& out, const ValidationReport& report);

struct OptimizeReport {
    ReservationVector best;
    double best_cost = 0.0;
    std::optional<double> initial_cost;  // cost of the configured reservation,
                                         // when it uses all channels
    int stride = 1;
    std::array<double, 4> rho{};
};

// Brute-force reservation optimum for an exogenous pure-loss configuration.
// Throws ConfigError outside that domain.
OptimizeReport run_optimize(const NetworkConfig& cfg);
nlohmann::json optimize_report_to_json(const OptimizeReport& report);

struct TrainingState {
    int episodes_completed = 0;
    std::vector<nlohmann::json> cell_states;  // one per cell
};

nlohmann::json training_state_to_json(const TrainingState& state, const NetworkConfig& cfg);
TrainingState training_state_from_json(const nlohmann::json& j, const NetworkConfig& cfg);

struct TrainingResult {
    std::vector<int> episode;        // absolute episode numbers
    std::vector<double> mean_cost;   // per-episode mean window cost
    TrainingState state;             // after the last episode
};

// Runs `episodes` training episodes. Each episode is one full simulation
// with seed cfg.seed + episode number; controller state carries across
// episodes, and `resume` (when given) carries it across invocations.
// Requires a learning controller (la or neural) and episodes >= 1.
TrainingResult run_training(const NetworkConfig& cfg, int episodes,
                            const TrainingState* resume);

void write_training_csv(std::ostream& out, const TrainingResult& result);

}  // namespace cellsim
