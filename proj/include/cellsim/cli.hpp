// Command implementations behind the executable: run, sweep, validate,
// optimize, train. Each returns a process exit code: 0 success, 1 internal
// fault or tolerance failure, 2 usage or configuration error. Output goes to
// --out when given, else stdout; diagnostics go to stderr.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cellsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // internal fault or tolerance breach
inline constexpr int kExitUsage = 2;    // bad flags, missing file, invalid config

struct RunCmd {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;  // empty -> stdout
};
int cmd_run(const RunCmd& cmd);

struct SweepCmd {
    std::string config_path;
    std::string variable = "load_multiplier";
    std::vector<double> values;
    int replications = 1;
    std::optional<std::uint64_t> seed;
    std::string out;
};
int cmd_sweep(const SweepCmd& cmd);

struct ValidateCmd {
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;
    std::optional<double> sim_duration;  // per replication; warmup scales with it
    std::string out;                     // report text; empty -> stdout
};
int cmd_validate(const ValidateCmd& cmd);

struct OptimizeCmd {
    std::string config_path;
    std::string out;  // JSON report; empty -> stdout only prints the summary
};
int cmd_optimize(const OptimizeCmd& cmd);

struct TrainCmd {
    std::string config_path;
    int episodes = 0;
    std::optional<std::uint64_t> seed;
    std::string out;         // learning-curve CSV; empty -> stdout
    std::string state_path;  // empty -> derived from out, else train_state.json
};
int cmd_train(const TrainCmd& cmd);

}  // namespace cellsim
