// cellsim: deterministic multi-cell channel-reservation simulator.
#include <cstdint>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cellsim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"deterministic cellular channel-reservation simulator"};
    app.require_subcommand(1);

    cellsim::RunCmd run;
    std::uint64_t seed_value = 0;
    auto* run_cmd = app.add_subcommand("run", "simulate one configuration, CSV per window");
    run_cmd->add_option("--config", run.config_path, "configuration JSON")->required();
    auto* run_seed = run_cmd->add_option("--seed", seed_value, "override the config seed");
    run_cmd->add_option("--out", run.out, "output CSV path (default stdout)");

    cellsim::SweepCmd sweep;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "replicate runs over load multipliers or velocities");
    sweep_cmd->add_option("--config", sweep.config_path, "configuration JSON")->required();
    sweep_cmd->add_option("--variable", sweep.variable, "load_multiplier or velocity")
        ->required();
    sweep_cmd->add_option("--values", sweep.values, "comma-separated sweep values")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--replications", sweep.replications, "replications per value");
    auto* sweep_seed = sweep_cmd->add_option("--seed", seed_value, "override the config seed");
    sweep_cmd->add_option("--out", sweep.out, "output CSV path (default stdout)");

    cellsim::ValidateCmd validate;
    int validate_reps = 0;
    double validate_duration = 0.0;
    auto* validate_cmd =
        app.add_subcommand("validate", "compare simulated blocking with the analytic oracle");
    auto* validate_seed =
        validate_cmd->add_option("--seed", seed_value, "override the harness seed");
    auto* validate_reps_opt =
        validate_cmd->add_option("--replications", validate_reps, "replications (default 10)");
    auto* validate_duration_opt = validate_cmd->add_option(
        "--duration", validate_duration, "seconds per replication (default 12000)");
    validate_cmd->add_option("--out", validate.out, "report path (default stdout)");

    cellsim::OptimizeCmd optimize;
    auto* optimize_cmd =
        app.add_subcommand("optimize", "brute-force reservation optimum for a config");
    optimize_cmd->add_option("--config", optimize.config_path, "configuration JSON")
        ->required();
    optimize_cmd->add_option("--out", optimize.out, "JSON report path");

    cellsim::TrainCmd train;
    auto* train_cmd =
        app.add_subcommand("train", "train a learning controller over repeated episodes");
    train_cmd->add_option("--config", train.config_path, "configuration JSON")->required();
    train_cmd->add_option("--episodes", train.episodes, "number of episodes")->required();
    auto* train_seed = train_cmd->add_option("--seed", seed_value, "override the config seed");
    train_cmd->add_option("--out", train.out, "learning-curve CSV path (default stdout)");
    train_cmd->add_option("--state", train.state_path,
                          "controller state file for warm starts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cellsim::kExitOk : cellsim::kExitUsage;
    }

    if (run_cmd->parsed()) {
        if (run_seed->count() > 0) run.seed = seed_value;
        return cellsim::cmd_run(run);
    }
    if (sweep_cmd->parsed()) {
        if (sweep_seed->count() > 0) sweep.seed = seed_value;
        return cellsim::cmd_sweep(sweep);
    }
    if (validate_cmd->parsed()) {
        if (validate_seed->count() > 0) validate.seed = seed_value;
        if (validate_reps_opt->count() > 0) validate.replications = validate_reps;
        if (validate_duration_opt->count() > 0) validate.sim_duration = validate_duration;
        return cellsim::cmd_validate(validate);
    }
    if (optimize_cmd->parsed()) return cellsim::cmd_optimize(optimize);
    if (train_cmd->parsed()) {
        if (train_seed->count() > 0) train.seed = seed_value;
        return cellsim::cmd_train(train);
    }
    return cellsim::kExitUsage;
}
