#include "cellsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cellsim/analytic.hpp"
#include "cellsim/metrics.hpp"
#include "cellsim/traffic.hpp"

namespace cellsim {

namespace {

// All numeric CSV output funnels through here: 6 significant digits, '.'
// decimal, so identical results are byte-identical files.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string fmt_stat_mean(const Stat& s) { return s.n > 0 ? fmt(s.mean) : std::string(); }
std::string fmt_stat_sd(const Stat& s) { return s.n > 0 ? fmt(s.sd) : std::string(); }

template <typename... Fields>
void row(std::ostream& out, const Fields&... fields) {
    const char* sep = "";
    ((out << sep << fields, sep = ","), ...);
    out << "\n";
}

Stat stat_of(const std::vector<std::optional<double>>& xs) {
    Stat s;
    double sum = 0.0;
    for (const auto& x : xs)
        if (x) {
            sum += *x;
            ++s.n;
        }
    if (s.n == 0) return s;
    s.mean = sum / s.n;
    if (s.n >= 2) {
        double ss = 0.0;
        for (const auto& x : xs)
            if (x) ss += (*x - s.mean) * (*x - s.mean);
        s.sd = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

}  // namespace

RunSummary summarize_run(const NetworkConfig& cfg, const RunResult& result) {
    const MetricsWindow& agg = result.aggregate;
    RunSummary s;
    s.pb_rt = refusal_probability(agg, CallClass::RtOriginating);
    s.pb_nrt = refusal_probability(agg, CallClass::NrtOriginating);
    s.pd_rt = refusal_probability(agg, CallClass::RtHandoff);
    s.pd_nrt = refusal_probability(agg, CallClass::NrtHandoff);
    s.blocking = blocking_probability(agg);
    s.dropping = dropping_probability(agg);
    s.latency = mean_handoff_latency(agg, cfg.signaling_delay);
    if (result.originating_admitted > 0)
        s.handoffs_per_call = static_cast<double>(result.handoff_requests) /
                              static_cast<double>(result.originating_admitted);
    s.load = system_load(cfg);
    for (CallClass c : kAllClasses) s.arrivals += agg.arrived(c);
    return s;
}

void write_run_csv(std::ostream& out, const NetworkConfig& cfg, const RunResult& result) {
    out << "window,cell,start_s,end_s,noc,roc,nhc,rhc";
    for (const char* cls : {"rt_o", "nrt_o", "rt_h", "nrt_h"})
        out << ",arrived_" << cls << ",admitted_" << cls << ",refused_" << cls
            << ",reneged_" << cls;
    out << ",pb_rt,pb_nrt,pd_rt,pd_nrt,blocking,dropping,latency_mean_s,utilization,cost\n";

    for (const WindowRecord& rec : result.windows) {
        const MetricsWindow& w = rec.window;
        out << rec.window_index << "," << rec.cell << "," << fmt(w.start) << ","
            << fmt(w.end) << "," << rec.reservation.noc << "," << rec.reservation.roc << ","
            << rec.reservation.nhc << "," << rec.reservation.rhc;
        for (CallClass c : kAllClasses) {
            const ClassCounts& k = w.per_class[class_index(c)];
            out << "," << k.arrived << "," << k.admitted << "," << k.refused << ","
                << k.reneged;
        }
        const double span = w.end - w.start;
        std::optional<double> utilization;
        if (span > 0.0 && cfg.channels_per_cell > 0)
            utilization = w.busy_channel_time / (cfg.channels_per_cell * span);
        out << "," << fmt(refusal_probability(w, CallClass::RtOriginating)) << ","
            << fmt(refusal_probability(w, CallClass::NrtOriginating)) << ","
            << fmt(refusal_probability(w, CallClass::RtHandoff)) << ","
            << fmt(refusal_probability(w, CallClass::NrtHandoff)) << ","
            << fmt(blocking_probability(w)) << "," << fmt(dropping_probability(w)) << ","
            << fmt(mean_handoff_latency(w, cfg.signaling_delay)) << "," << fmt(utilization)
            << "," << fmt(rec.cost) << "\n";
    }
}

NetworkConfig apply_sweep_value(const NetworkConfig& base, const std::string& variable,
                                double value) {
    NetworkConfig cfg = base;
    if (variable == "load_multiplier")
        cfg.load_multiplier = value;
    else if (variable == "velocity")
        cfg.velocity = value;
    else
        throw ConfigError("unknown sweep variable '" + variable +
                          "' (expected load_multiplier|velocity)");
    return cfg;
}

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw ConfigError("sweep values must not be empty");
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (spec.values[i] <= spec.values[i - 1])
            throw ConfigError("sweep values must be strictly increasing");
    if (spec.replications < 1) throw ConfigError("replications must be >= 1");

    SweepResult result;
    for (double value : spec.values) {
        const NetworkConfig cfg = apply_sweep_value(spec.base, spec.variable, value);

        std::vector<std::optional<double>> pb_rt, pb_nrt, pd_rt, pd_nrt, blocking, dropping,
            latency, hpc, load, arrivals;
        for (int r = 0; r < spec.replications; ++r) {
            const RunResult run = simulate(cfg, spec.base.seed + static_cast<std::uint64_t>(r));
            const RunSummary s = summarize_run(cfg, run);
            result.rows.push_back({value, r, s});
            pb_rt.push_back(s.pb_rt);
            pb_nrt.push_back(s.pb_nrt);
            pd_rt.push_back(s.pd_rt);
            pd_nrt.push_back(s.pd_nrt);
            blocking.push_back(s.blocking);
            dropping.push_back(s.dropping);
            latency.push_back(s.latency);
            hpc.push_back(s.handoffs_per_call);
            load.push_back(s.load);
            arrivals.push_back(static_cast<double>(s.arrivals));
        }
        SweepAggregate agg;
        agg.value = value;
        agg.pb_rt = stat_of(pb_rt);
        agg.pb_nrt = stat_of(pb_nrt);
        agg.pd_rt = stat_of(pd_rt);
        agg.pd_nrt = stat_of(pd_nrt);
        agg.blocking = stat_of(blocking);
        agg.dropping = stat_of(dropping);
        agg.latency = stat_of(latency);
        agg.handoffs_per_call = stat_of(hpc);
        agg.load = stat_of(load);
        agg.arrivals = stat_of(arrivals);
        result.aggregates.push_back(agg);
    }
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result) {
    row(out, "variable", "value", "replication", "pb_rt", "pb_nrt", "pd_rt", "pd_nrt",
        "latency_mean_s", "load", "blocking", "dropping", "handoffs_per_call", "arrivals");
    for (const SweepRow& r : result.rows)
        row(out, spec.variable, fmt(r.value), r.replication, fmt(r.summary.pb_rt),
            fmt(r.summary.pb_nrt), fmt(r.summary.pd_rt), fmt(r.summary.pd_nrt),
            fmt(r.summary.latency), fmt(r.summary.load), fmt(r.summary.blocking),
            fmt(r.summary.dropping), fmt(r.summary.handoffs_per_call),
            fmt(r.summary.arrivals));
    for (const SweepAggregate& a : result.aggregates) {
        row(out, spec.variable, fmt(a.value), "mean", fmt_stat_mean(a.pb_rt),
            fmt_stat_mean(a.pb_nrt), fmt_stat_mean(a.pd_rt), fmt_stat_mean(a.pd_nrt),
            fmt_stat_mean(a.latency), fmt_stat_mean(a.load), fmt_stat_mean(a.blocking),
            fmt_stat_mean(a.dropping), fmt_stat_mean(a.handoffs_per_call),
            fmt_stat_mean(a.arrivals));
        row(out, spec.variable, fmt(a.value), "sd", fmt_stat_sd(a.pb_rt),
            fmt_stat_sd(a.pb_nrt), fmt_stat_sd(a.pd_rt), fmt_stat_sd(a.pd_nrt),
            fmt_stat_sd(a.latency), fmt_stat_sd(a.load), fmt_stat_sd(a.blocking),
            fmt_stat_sd(a.dropping), fmt_stat_sd(a.handoffs_per_call),
            fmt_stat_sd(a.arrivals));
    }
}

void write_blocking_figure(std::ostream& out, const SweepSpec& spec, const SweepResult& r) {
    row(out, "load", "value", "pb_rt_mean", "pb_rt_sd", "pb_nrt_mean", "pb_nrt_sd",
        "blocking_mean", "blocking_sd", "replications");
    for (const SweepAggregate& a : r.aggregates) {
        const double load =
            system_load(apply_sweep_value(spec.base, spec.variable, a.value));
        row(out, fmt(load), fmt(a.value), fmt_stat_mean(a.pb_rt), fmt_stat_sd(a.pb_rt),
            fmt_stat_mean(a.pb_nrt), fmt_stat_sd(a.pb_nrt), fmt_stat_mean(a.blocking),
            fmt_stat_sd(a.blocking), spec.replications);
    }
}

void write_dropping_figure(std::ostream& out, const SweepSpec& spec, const SweepResult& r) {
    row(out, "load", "value", "pd_rt_mean", "pd_rt_sd", "pd_nrt_mean", "pd_nrt_sd",
        "dropping_mean", "dropping_sd", "replications");
    for (const SweepAggregate& a : r.aggregates) {
        const double load =
            system_load(apply_sweep_value(spec.base, spec.variable, a.value));
        row(out, fmt(load), fmt(a.value), fmt_stat_mean(a.pd_rt), fmt_stat_sd(a.pd_rt),
            fmt_stat_mean(a.pd_nrt), fmt_stat_sd(a.pd_nrt), fmt_stat_mean(a.dropping),
            fmt_stat_sd(a.dropping), spec.replications);
    }
}

void write_latency_figure(std::ostream& out, const SweepSpec& spec, const SweepResult& r) {
    row(out, "velocity_mps", "latency_mean_s", "latency_sd_s", "latency_ci95_s",
        "handoffs_per_call_mean", "replications");
    for (const SweepAggregate& a : r.aggregates) {
        std::string ci;
        if (a.latency.n > 0)
            ci = fmt(1.96 * a.latency.sd / std::sqrt(static_cast<double>(a.latency.n)));
        row(out, fmt(a.value), fmt_stat_mean(a.latency), fmt_stat_sd(a.latency), ci,
            fmt_stat_mean(a.handoffs_per_call), spec.replications);
    }
}

ValidationReport run_validation(const ValidationOptions& options) {
    // One cell whose four dedicated pools use every channel: each class is an
    // independent Erlang loss system with a closed-form blocking probability.
    NetworkConfig cfg;
    cfg.num_cells = 1;
    cfg.channels_per_cell = 60;
    cfg.arrival_rates = {1.0, 1.1, 1.2, 1.3};
    cfg.mean_call_duration = 10.0;
    cfg.handoff_mode = HandoffMode::Exogenous;
    cfg.queue_capacity = {0, 0, 0, 0};
    cfg.renege_deadline = {0.0, 0.0, 0.0, 0.0};
    cfg.signaling_delay = 0.1;
    cfg.control_period = 1000.0;
    cfg.load_multiplier = 1.0;
    cfg.seed = options.seed;
    cfg.sim_duration = options.sim_duration;
    cfg.warmup = options.warmup;
    cfg.controller = ControllerKind::Static;
    cfg.reservation = ReservationVector{15, 15, 15, 15};

    ValidationReport report;
    report.config = cfg;

    std::array<std::vector<std::optional<double>>, 4> per_rep;
    std::array<std::uint64_t, 4> arrived{};
    for (int r = 0; r < options.replications; ++r) {
        const RunResult run = simulate(cfg, cfg.seed + static_cast<std::uint64_t>(r));
        for (CallClass c : kAllClasses) {
            const int k = class_index(c);
            per_rep[k].push_back(refusal_probability(run.aggregate, c));
            arrived[k] += run.aggregate.per_class[k].arrived;
        }
    }

    report.min_class_arrivals = *std::min_element(arrived.begin(), arrived.end());
    report.sufficient_samples = report.min_class_arrivals >= 100000;

    bool all_pass = true;
    for (CallClass c : kAllClasses) {
        const int k = class_index(c);
        ValidationClassReport& cls = report.classes[k];
        cls.call_class = c;
        cls.pool = cfg.initial_reservation().pool(c);
        cls.rho = cfg.arrival_rates[k] * cfg.mean_call_duration;
        cls.analytic = erlang_b(cls.pool, cls.rho);
        const Stat s = stat_of(per_rep[k]);
        cls.simulated = s.mean;
        cls.abs_diff = std::abs(s.mean - cls.analytic);
        cls.stderr_mean = s.n > 0 ? s.sd / std::sqrt(static_cast<double>(s.n)) : 0.0;
        cls.arrivals = arrived[k];
        cls.pass = s.n == options.replications && cls.abs_diff <= 0.01 &&
                   cls.abs_diff <= 3.0 * cls.stderr_mean;
        all_pass = all_pass && cls.pass;
    }
    report.pass = all_pass && report.sufficient_samples;
    return report;
}

void write_validation_report(std::ostream& out, const ValidationReport& report) {
    out << "oracle equivalence: pure-loss disjoint pools vs closed-form blocking\n";
    for (const ValidationClassReport& cls : report.classes) {
        out << "  " << to_string(cls.call_class) << ": pool " << cls.pool << " rho "
            << fmt(cls.rho) << " analytic " << fmt(cls.analytic) << " simulated "
            << fmt(cls.simulated) << " |diff| " << fmt(cls.abs_diff) << " se "
            << fmt(cls.stderr_mean) << " arrivals " << cls.arrivals << " "
            << (cls.pass ? "PASS" : "FAIL") << "\n";
    }
    out << "  samples: min class arrivals " << report.min_class_arrivals
        << (report.sufficient_samples ? " (sufficient)" : " (insufficient)") << "\n";
    out << "overall: " << (report.pass ? "PASS" : "FAIL") << "\n";
}

OptimizeReport run_optimize(const NetworkConfig& cfg) {
    if (auto violations = validate_config(cfg); !violations.empty())
        throw ConfigError("invalid configuration: " + violations.front());
    const bool pure_loss = cfg.queue_capacity == std::array<int, 4>{0, 0, 0, 0};
    if (cfg.handoff_mode != HandoffMode::Exogenous || !pure_loss)
        throw ConfigError("optimize requires an exogenous pure-loss configuration");

    OptimizeReport report;
    report.stride = cfg.effective_stride();
    for (CallClass c : kAllClasses)
        report.rho[class_index(c)] = per_cell_rate(cfg, c) * cfg.mean_call_duration;
    report.best = brute_force_optimum(cfg.channels_per_cell, report.rho, cfg.cost_weights,
                                      report.stride, cfg.signaling_delay);
    report.best_cost = disjoint_cost(report.best, cfg.channels_per_cell, report.rho,
                                     cfg.cost_weights, cfg.signaling_delay);
    const ReservationVector initial = cfg.initial_reservation();
    if (initial.sum() == cfg.channels_per_cell)
        report.initial_cost = disjoint_cost(initial, cfg.channels_per_cell, report.rho,
                                            cfg.cost_weights, cfg.signaling_delay);
    return report;
}

nlohmann::json optimize_report_to_json(const OptimizeReport& report) {
    nlohmann::json j{{"reservation",
                      {{"noc", report.best.noc},
                       {"roc", report.best.roc},
                       {"nhc", report.best.nhc},
                       {"rhc", report.best.rhc}}},
                     {"cost", report.best_cost},
                     {"stride", report.stride},
                     {"rho", report.rho}};
    if (report.initial_cost) j["initial_cost"] = *report.initial_cost;
    return j;
}

nlohmann::json training_state_to_json(const TrainingState& state, const NetworkConfig& cfg) {
    return {{"format", "cellsim-train-state"},
            {"episodes_completed", state.episodes_completed},
            {"controller", to_string(cfg.controller)},
            {"num_cells", cfg.num_cells},
            {"channels", cfg.channels_per_cell},
            {"stride", cfg.effective_stride()},
            {"cells", state.cell_states}};
}

TrainingState training_state_from_json(const nlohmann::json& j, const NetworkConfig& cfg) {
    if (j.value("format", "") != "cellsim-train-state")
        throw ConfigError("training state: unrecognised file format");
    if (j.value("controller", "") != to_string(cfg.controller))
        throw ConfigError("training state: controller kind mismatch");
    if (j.value("num_cells", -1) != cfg.num_cells ||
        j.value("channels", -1) != cfg.channels_per_cell ||
        j.value("stride", -1) != cfg.effective_stride())
        throw ConfigError("training state: topology mismatch with configuration");
    TrainingState state;
    state.episodes_completed = j.value("episodes_completed", 0);
    if (state.episodes_completed < 0)
        throw ConfigError("training state: negative episode counter");
    state.cell_states = j.at("cells").get<std::vector<nlohmann::json>>();
    if (static_cast<int>(state.cell_states.size()) != cfg.num_cells)
        throw ConfigError("training state: wrong number of per-cell states");
    return state;
}

TrainingResult run_training(const NetworkConfig& cfg, int episodes,
                            const TrainingState* resume) {
    if (auto violations = validate_config(cfg); !violations.empty())
        throw ConfigError("invalid configuration: " + violations.front());
    if (cfg.controller != ControllerKind::LearningAutomata &&
        cfg.controller != ControllerKind::Neural)
        throw ConfigError("training requires a learning controller (la or neural)");
    if (episodes < 1) throw ConfigError("training requires episodes >= 1");

    std::vector<std::unique_ptr<Controller>> owned;
    std::vector<Controller*> controllers;
    for (int cell = 0; cell < cfg.num_cells; ++cell) {
        owned.push_back(make_controller(cfg, cell, cfg.seed));
        controllers.push_back(owned.back().get());
    }

    int start_episode = 0;
    if (resume) {
        start_episode = resume->episodes_completed;
        for (int cell = 0; cell < cfg.num_cells; ++cell)
            controllers[static_cast<std::size_t>(cell)]->from_state(
                resume->cell_states[static_cast<std::size_t>(cell)]);
    }

    TrainingResult result;
    for (int e = 0; e < episodes; ++e) {
        const int episode = start_episode + e;
        const RunResult run =
            simulate(cfg, cfg.seed + static_cast<std::uint64_t>(episode), controllers);
        result.episode.push_back(episode);
        result.mean_cost.push_back(run.mean_window_cost);
    }

    result.state.episodes_completed = start_episode + episodes;
    for (const Controller* c : controllers) result.state.cell_states.push_back(c->to_state());
    return result;
}

void write_training_csv(std::ostream& out, const TrainingResult& result) {
    row(out, "episode", "mean_cost");
    for (std::size_t i = 0; i < result.episode.size(); ++i)
        row(out, result.episode[i], fmt(result.mean_cost[i]));
}

}  // namespace cellsim
