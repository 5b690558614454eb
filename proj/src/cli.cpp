#include "cellsim/cli.hpp"

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cellsim/experiment.hpp"

namespace cellsim {

namespace {

// Loads and validates the configuration or reports why it cannot be used.
NetworkConfig load_valid_config(const std::string& path,
                                const std::optional<std::uint64_t>& seed_override) {
    NetworkConfig cfg = load_config(path);
    if (seed_override) cfg.seed = *seed_override;
    if (auto violations = validate_config(cfg); !violations.empty()) {
        std::ostringstream msg;
        msg << "configuration violates:";
        for (const auto& rule : violations) msg << "\n  " << rule;
        throw ConfigError(msg.str());
    }
    return cfg;
}

// Runs `work(stream)` against --out or stdout. The file is only considered
// written once the stream flushed cleanly.
template <typename Work>
void with_output(const std::string& out, Work&& work) {
    if (out.empty()) {
        work(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot open output file '" + out + "'");
    work(file);
    file.flush();
    if (!file) throw std::runtime_error("failed writing output file '" + out + "'");
}

// Uniform exit-code mapping: configuration problems are usage errors,
// everything else that throws is an internal fault.
template <typename Body>
int guarded(Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace

int cmd_run(const RunCmd& cmd) {
    return guarded([&] {
        const NetworkConfig cfg = load_valid_config(cmd.config_path, cmd.seed);
        const RunResult result = simulate(cfg, cfg.seed);
        with_output(cmd.out, [&](std::ostream& out) { write_run_csv(out, cfg, result); });
        return kExitOk;
    });
}

int cmd_sweep(const SweepCmd& cmd) {
    return guarded([&] {
        SweepSpec spec;
        spec.base = load_valid_config(cmd.config_path, cmd.seed);
        spec.variable = cmd.variable;
        spec.values = cmd.values;
        spec.replications = cmd.replications;
        const SweepResult result = run_sweep(spec);
        with_output(cmd.out,
                    [&](std::ostream& out) { write_sweep_csv(out, spec, result); });
        return kExitOk;
    });
}

int cmd_validate(const ValidateCmd& cmd) {
    return guarded([&] {
        ValidationOptions options;
        if (cmd.seed) options.seed = *cmd.seed;
        if (cmd.replications) {
            if (*cmd.replications < 2) throw ConfigError("validate needs >= 2 replications");
            options.replications = *cmd.replications;
        }
        if (cmd.sim_duration) {
            if (*cmd.sim_duration <= 0.0) throw ConfigError("--duration must be > 0");
            options.sim_duration = *cmd.sim_duration;
            options.warmup = *cmd.sim_duration / 12.0;  // keep the default ratio
        }
        const ValidationReport report = run_validation(options);
        with_output(cmd.out,
                    [&](std::ostream& out) { write_validation_report(out, report); });
        if (!report.sufficient_samples) {
            std::cerr << "error: insufficient samples (min class arrivals "
                      << report.min_class_arrivals << " < 100000)\n";
            return kExitUsage;
        }
        if (!report.pass) {
            for (const auto& cls : report.classes)
                if (!cls.pass)
                    std::cerr << "error: tolerance breach for " << to_string(cls.call_class)
                              << "\n";
            return kExitFailure;
        }
        return kExitOk;
    });
}

int cmd_optimize(const OptimizeCmd& cmd) {
    return guarded([&] {
        const NetworkConfig cfg = load_valid_config(cmd.config_path, std::nullopt);
        const OptimizeReport report = run_optimize(cfg);
        std::cout << "optimum noc=" << report.best.noc << " roc=" << report.best.roc
                  << " nhc=" << report.best.nhc << " rhc=" << report.best.rhc
                  << " cost=" << report.best_cost;
        if (report.initial_cost) std::cout << " (configured reservation costs "
                                           << *report.initial_cost << ")";
        std::cout << "\n";
        if (!cmd.out.empty())
            with_output(cmd.out, [&](std::ostream& out) {
                out << optimize_report_to_json(report).dump(2) << "\n";
            });
        return kExitOk;
    });
}

int cmd_train(const TrainCmd& cmd) {
    return guarded([&] {
        const NetworkConfig cfg = load_valid_config(cmd.config_path, cmd.seed);
        if (cmd.episodes < 1) throw ConfigError("--episodes must be >= 1");

        std::string state_path = cmd.state_path;
        if (state_path.empty()) {
            if (!cmd.out.empty())
                state_path =
                    std::filesystem::path(cmd.out).replace_extension(".state.json").string();
            else
                state_path = "train_state.json";
        }

        TrainingState resume;
        const TrainingState* resume_ptr = nullptr;
        if (std::filesystem::exists(state_path)) {
            std::ifstream in(state_path);
            if (!in) throw ConfigError("cannot read state file '" + state_path + "'");
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("malformed state file '" + state_path + "': " + e.what());
            }
            resume = training_state_from_json(j, cfg);
            resume_ptr = &resume;
            std::cerr << "resuming from episode " << resume.episodes_completed << "\n";
        }

        const TrainingResult result = run_training(cfg, cmd.episodes, resume_ptr);
        with_output(cmd.out,
                    [&](std::ostream& out) { write_training_csv(out, result); });

        std::ofstream state_file(state_path, std::ios::binary | std::ios::trunc);
        if (!state_file) throw ConfigError("cannot open state file '" + state_path + "'");
        state_file << training_state_to_json(result.state, cfg).dump(2) << "\n";
        state_file.flush();
        if (!state_file)
            throw std::runtime_error("failed writing state file '" + state_path + "'");
        std::cerr << "state written to " << state_path << "\n";
        return kExitOk;
    });
}

}  // namespace cellsim
