#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cellsim/cli.hpp"
#include "doctest.h"

using namespace cellsim;
namespace fs = std::filesystem;

namespace {

const fs::path& temp_root() {
    static const fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "cellsim_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

std::string tmp(const std::string& name) { return (temp_root() / name).string(); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out << text;
    REQUIRE(out.good());
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// Single-cell pure-loss run: 4 windows of 50 s.
const char* kRunConfig = R"({
  "num_cells": 1,
  "channels_per_cell": 4,
  "action_stride": 1,
  "arrival_rates": [1.0, 1.0, 1.0, 1.0],
  "mean_call_duration": 1.0,
  "handoff_mode": "exogenous",
  "queue_capacity": [0, 0, 0, 0],
  "renege_deadline": [0.0, 0.0, 0.0, 0.0],
  "control_period": 50.0,
  "sim_duration": 200.0,
  "reservation": {"noc": 1, "roc": 1, "nhc": 1, "rhc": 1}
})";

// Two active classes, unit weights, zero signaling delay: optimum (0,2,0,2).
const char* kOptimizeConfig = R"({
  "num_cells": 1,
  "channels_per_cell": 4,
  "action_stride": 1,
  "arrival_rates": [1.0, 0.0, 1.0, 0.0],
  "mean_call_duration": 1.0,
  "handoff_mode": "exogenous",
  "queue_capacity": [0, 0, 0, 0],
  "signaling_delay": 0.0,
  "cost_weights": {"w_b_rt": 1, "w_b_nrt": 1, "w_d_rt": 1, "w_d_nrt": 1, "w_l": 1, "l_ref": 1}
})";

const char* kTrainConfig = R"({
  "num_cells": 1,
  "channels_per_cell": 4,
  "action_stride": 1,
  "arrival_rates": [1.0, 0.0, 1.0, 0.0],
  "mean_call_duration": 1.0,
  "handoff_mode": "exogenous",
  "queue_capacity": [0, 0, 0, 0],
  "renege_deadline": [0.0, 0.0, 0.0, 0.0],
  "signaling_delay": 0.0,
  "control_period": 50.0,
  "sim_duration": 200.0,
  "controller": "la",
  "cost_weights": {"w_b_rt": 1, "w_b_nrt": 1, "w_d_rt": 1, "w_d_nrt": 1, "w_l": 1, "l_ref": 1}
})";

const std::string kRunHeader =
    "window,cell,start_s,end_s,noc,roc,nhc,rhc,"
    "arrived_rt_o,admitted_rt_o,refused_rt_o,reneged_rt_o,"
    "arrived_nrt_o,admitted_nrt_o,refused_nrt_o,reneged_nrt_o,"
    "arrived_rt_h,admitted_rt_h,refused_rt_h,reneged_rt_h,"
    "arrived_nrt_h,admitted_nrt_h,refused_nrt_h,reneged_nrt_h,"
    "pb_rt,pb_nrt,pd_rt,pd_nrt,blocking,dropping,latency_mean_s,utilization,cost";

}  // namespace

TEST_CASE("cmd_run writes one csv row per (window, cell)") {
    const std::string config = tmp("run_config.json");
    write_text(config, kRunConfig);
    const std::string out = tmp("run.csv");

    CHECK(cmd_run({config, std::nullopt, out}) == kExitOk);
    const auto lines = lines_of(read_text(out));
    REQUIRE(lines.size() == 5);  // header + 4 windows
    CHECK(lines[0] == kRunHeader);
    CHECK(lines[1].rfind("0,0,0,50,1,1,1,1,", 0) == 0);
    CHECK(lines[4].rfind("3,0,150,200,", 0) == 0);
}

TEST_CASE("cmd_run is byte-deterministic and seed-sensitive") {
    const std::string config = tmp("run_config2.json");
    write_text(config, kRunConfig);
    const std::string out_a = tmp("run_a.csv");
    const std::string out_b = tmp("run_b.csv");
    const std::string out_c = tmp("run_c.csv");

    CHECK(cmd_run({config, std::nullopt, out_a}) == kExitOk);
    CHECK(cmd_run({config, std::nullopt, out_b}) == kExitOk);
    CHECK(read_text(out_a) == read_text(out_b));

    CHECK(cmd_run({config, 424242, out_c}) == kExitOk);
    CHECK(read_text(out_a) != read_text(out_c));
}

TEST_CASE("cmd_run maps bad input to usage errors") {
    CHECK(cmd_run({tmp("missing.json"), std::nullopt, ""}) == kExitUsage);

    const std::string malformed = tmp("malformed.json");
    write_text(malformed, "{ not json");
    CHECK(cmd_run({malformed, std::nullopt, ""}) == kExitUsage);

    const std::string invalid = tmp("invalid.json");
    write_text(invalid, R"({"channels_per_cell": 0})");
    CHECK(cmd_run({invalid, std::nullopt, ""}) == kExitUsage);

    const std::string config = tmp("run_config3.json");
    write_text(config, kRunConfig);
    CHECK(cmd_run({config, std::nullopt, tmp("no_such_dir/out.csv")}) == kExitUsage);
}

TEST_CASE("cmd_sweep emits replications plus aggregate rows") {
    const std::string config = tmp("sweep_config.json");
    write_text(config, kRunConfig);
    const std::string out = tmp("sweep.csv");

    SweepCmd cmd{config, "load_multiplier", {0.5, 1.0}, 2, std::nullopt, out};
    CHECK(cmd_sweep(cmd) == kExitOk);
    const auto lines = lines_of(read_text(out));
    REQUIRE(lines.size() == 9);  // header + 2x2 data + 2x(mean, sd)
    CHECK(lines[0].rfind("variable,value,replication,", 0) == 0);
    CHECK(lines[1].rfind("load_multiplier,0.5,0,", 0) == 0);
    CHECK(lines[2].rfind("load_multiplier,0.5,1,", 0) == 0);
    CHECK(lines[5].rfind("load_multiplier,0.5,mean,", 0) == 0);
    CHECK(lines[6].rfind("load_multiplier,0.5,sd,", 0) == 0);
    CHECK(lines[8].rfind("load_multiplier,1,sd,", 0) == 0);

    const std::string again = tmp("sweep_again.csv");
    SweepCmd cmd2 = cmd;
    cmd2.out = again;
    CHECK(cmd_sweep(cmd2) == kExitOk);
    CHECK(read_text(out) == read_text(again));
}

TEST_CASE("cmd_sweep rejects malformed sweeps") {
    const std::string config = tmp("sweep_config2.json");
    write_text(config, kRunConfig);
    CHECK(cmd_sweep({config, "frequency", {1.0}, 1, std::nullopt, ""}) == kExitUsage);
    CHECK(cmd_sweep({config, "velocity", {}, 1, std::nullopt, ""}) == kExitUsage);
    CHECK(cmd_sweep({config, "velocity", {2.0, 1.0}, 1, std::nullopt, ""}) == kExitUsage);
    CHECK(cmd_sweep({config, "velocity", {1.0, 2.0}, 0, std::nullopt, ""}) == kExitUsage);
}

TEST_CASE("cmd_validate flags insufficient samples as a usage error") {
    ValidateCmd cmd;
    cmd.replications = 2;
    cmd.sim_duration = 60.0;  // far too short for 1e5 arrivals per class
    cmd.out = tmp("validate_short.txt");
    CHECK(cmd_validate(cmd) == kExitUsage);
    const std::string report = read_text(cmd.out);
    CHECK(report.find("insufficient") != std::string::npos);
    CHECK(report.find("overall: FAIL") != std::string::npos);

    ValidateCmd bad_reps;
    bad_reps.replications = 1;
    CHECK(cmd_validate(bad_reps) == kExitUsage);

    ValidateCmd bad_duration;
    bad_duration.sim_duration = 0.0;
    CHECK(cmd_validate(bad_duration) == kExitUsage);
}

TEST_CASE("cmd_optimize reports the analytic optimum as json") {
    const std::string config = tmp("optimize_config.json");
    write_text(config, kOptimizeConfig);
    const std::string out = tmp("optimize.json");

    CHECK(cmd_optimize({config, out}) == kExitOk);
    const nlohmann::json j = nlohmann::json::parse(read_text(out));
    CHECK(j["reservation"]["noc"] == 0);
    CHECK(j["reservation"]["roc"] == 2);
    CHECK(j["reservation"]["nhc"] == 0);
    CHECK(j["reservation"]["rhc"] == 2);
    CHECK(j["cost"].get<double>() == doctest::Approx(0.4));
    CHECK(j["stride"] == 1);
    CHECK(j["rho"][0].get<double>() == doctest::Approx(1.0));
    // Default reservation equal_split(4) uses all channels -> comparable cost.
    CHECK(j["initial_cost"].get<double>() == doctest::Approx(1.0));  // B(1,1) twice
}

TEST_CASE("cmd_optimize rejects configurations outside the oracle's domain") {
    CHECK(cmd_optimize({tmp("missing.json"), ""}) == kExitUsage);

    const std::string queued = tmp("optimize_queued.json");
    write_text(queued, R"({"channels_per_cell": 4, "action_stride": 1,
                           "queue_capacity": [0, 1, 0, 0]})");
    CHECK(cmd_optimize({queued, ""}) == kExitUsage);

    const std::string mobile = tmp("optimize_mobile.json");
    write_text(mobile, R"({"channels_per_cell": 4, "action_stride": 1,
                           "handoff_mode": "mobility"})");
    CHECK(cmd_optimize({mobile, ""}) == kExitUsage);
}

TEST_CASE("cmd_train writes a learning curve and resumable state") {
    const std::string config = tmp("train_config.json");
    write_text(config, kTrainConfig);
    const std::string curve = tmp("curve.csv");
    const std::string state = tmp("train.state.json");

    TrainCmd first{config, 3, std::nullopt, curve, state};
    CHECK(cmd_train(first) == kExitOk);
    auto lines = lines_of(read_text(curve));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "episode,mean_cost");
    CHECK(lines[1].rfind("0,", 0) == 0);
    CHECK(lines[3].rfind("2,", 0) == 0);

    nlohmann::json s = nlohmann::json::parse(read_text(state));
    CHECK(s["format"] == "cellsim-train-state");
    CHECK(s["episodes_completed"] == 3);
    CHECK(s["controller"] == "la");
    CHECK(s["cells"].size() == 1);

    // Resuming continues the absolute episode numbering and the counter.
    TrainCmd second{config, 2, std::nullopt, curve, state};
    CHECK(cmd_train(second) == kExitOk);
    lines = lines_of(read_text(curve));
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].rfind("3,", 0) == 0);
    CHECK(lines[2].rfind("4,", 0) == 0);
    s = nlohmann::json::parse(read_text(state));
    CHECK(s["episodes_completed"] == 5);
}

TEST_CASE("cmd_train derives the state path from --out when unset") {
    const std::string config = tmp("train_config2.json");
    write_text(config, kTrainConfig);
    const std::string curve = tmp("warm.csv");

    CHECK(cmd_train({config, 1, std::nullopt, curve, ""}) == kExitOk);
    CHECK(fs::exists(tmp("warm.state.json")));
}

TEST_CASE("cmd_train rejects bad requests and corrupt state") {
    const std::string config = tmp("train_config3.json");
    write_text(config, kTrainConfig);
    CHECK(cmd_train({config, 0, std::nullopt, tmp("x.csv"), tmp("x.state.json")}) ==
          kExitUsage);

    const std::string static_cfg = tmp("train_static.json");
    write_text(static_cfg, kRunConfig);  // static controller cannot train
    CHECK(cmd_train({static_cfg, 2, std::nullopt, tmp("y.csv"), tmp("y.state.json")}) ==
          kExitUsage);

    const std::string corrupt = tmp("corrupt.state.json");
    write_text(corrupt, "{]");
    CHECK(cmd_train({config, 2, std::nullopt, tmp("z.csv"), corrupt}) == kExitUsage);

    // State saved for one topology cannot warm-start another.
    const std::string good_state = tmp("topo.state.json");
    CHECK(cmd_train({config, 1, std::nullopt, tmp("t.csv"), good_state}) == kExitOk);
    const std::string other = tmp("train_other.json");
    std::string other_cfg = kTrainConfig;
    const auto pos = other_cfg.find("\"channels_per_cell\": 4");
    REQUIRE(pos != std::string::npos);
    other_cfg.replace(pos, 22, "\"channels_per_cell\": 8");
    write_text(other, other_cfg);
    CHECK(cmd_train({other, 1, std::nullopt, tmp("t2.csv"), good_state}) == kExitUsage);
}
