#include "cellsim/core.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cellsim {

using nlohmann::json;

const char* to_string(CallClass c) {
    switch (c) {
    case CallClass::RtOriginating: return "rt_o";
    case CallClass::NrtOriginating: return "nrt_o";
    case CallClass::RtHandoff: return "rt_h";
    case CallClass::NrtHandoff: return "nrt_h";
    }
    return "?";
}

const char* to_string(HandoffMode m) {
    return m == HandoffMode::Exogenous ? "exogenous" : "mobility";
}

const char* to_string(ControllerKind k) {
    switch (k) {
    case ControllerKind::Static: return "static";
    case ControllerKind::LearningAutomata: return "la";
    case ControllerKind::Neural: return "neural";
    case ControllerKind::Oracle: return "oracle";
    }
    return "?";
}

ReservationVector equal_split(int channels) {
    if (channels < 0) throw std::invalid_argument("equal_split: channels must be >= 0");
    const int q = channels / 4;
    return ReservationVector{q, q, q, q};
}

std::optional<std::string> validate_reservation(const ReservationVector& rv, int channels) {
    if (channels < 1) return "channels must be >= 1";
    if (rv.noc < 0 || rv.roc < 0 || rv.nhc < 0 || rv.rhc < 0)
        return "reservation components must be >= 0";
    if (rv.sum() > channels) {
        std::ostringstream os;
        os << "reservation sum exceeds C (" << rv.sum() << " > " << channels << ")";
        return os.str();
    }
    return std::nullopt;
}

std::vector<std::string> validate_config(const NetworkConfig& cfg) {
    std::vector<std::string> v;
    auto require = [&](bool ok, const std::string& rule) {
        if (!ok) v.push_back(rule);
    };

    require(cfg.num_cells >= 1, "num_cells >= 1");
    require(cfg.channels_per_cell >= 1, "channels_per_cell >= 1");
    for (CallClass c : kAllClasses) {
        const int k = class_index(c);
        require(cfg.arrival_rates[k] >= 0.0,
                std::string("arrival_rates[") + to_string(c) + "] >= 0");
        require(cfg.queue_capacity[k] >= 0,
                std::string("queue_capacity[") + to_string(c) + "] >= 0");
        require(cfg.renege_deadline[k] >= 0.0,
                std::string("renege_deadline[") + to_string(c) + "] >= 0");
    }
    require(cfg.mean_call_duration > 0.0, "mean_call_duration > 0");
    require(cfg.velocity > 0.0, "velocity > 0");
    require(cfg.cell_diameter > 0.0, "cell_diameter > 0");
    require(cfg.signaling_delay >= 0.0, "signaling_delay >= 0");
    require(cfg.control_period > 0.0, "control_period > 0");
    require(cfg.load_multiplier >= 0.0, "load_multiplier >= 0");
    require(cfg.warmup >= 0.0, "warmup >= 0");
    require(cfg.sim_duration > cfg.warmup, "sim_duration > warmup");

    if (cfg.channels_per_cell >= 1) {
        if (auto bad = validate_reservation(cfg.initial_reservation(), cfg.channels_per_cell))
            v.push_back("reservation: " + *bad);
        const int g = cfg.effective_stride();
        if (g < 1)
            v.push_back("action_stride >= 1");
        else if (cfg.channels_per_cell % g != 0)
            v.push_back("action_stride must divide channels_per_cell");
    }

    require(cfg.cost_weights.w_b_rt >= 0.0 && cfg.cost_weights.w_b_nrt >= 0.0 &&
                cfg.cost_weights.w_d_rt >= 0.0 && cfg.cost_weights.w_d_nrt >= 0.0 &&
                cfg.cost_weights.w_l >= 0.0,
            "cost weights >= 0");
    require(cfg.cost_weights.l_ref > 0.0, "cost_weights.l_ref > 0");
    require(cfg.la.learning_rate > 0.0 && cfg.la.learning_rate < 1.0,
            "la.learning_rate in (0,1)");
    require(cfg.la.j_scale > 0.0, "la.j_scale > 0");
    require(cfg.neural.hidden_units >= 1, "neural.hidden_units >= 1");
    require(cfg.neural.learning_rate > 0.0, "neural.learning_rate > 0");
    require(cfg.neural.baseline_decay >= 0.0 && cfg.neural.baseline_decay < 1.0,
            "neural.baseline_decay in [0,1)");
    return v;
}

namespace {

HandoffMode handoff_mode_from_string(const std::string& s) {
    if (s == "exogenous") return HandoffMode::Exogenous;
    if (s == "mobility") return HandoffMode::Mobility;
    throw ConfigError("unknown handoff_mode '" + s + "' (expected exogenous|mobility)");
}

ControllerKind controller_from_string(const std::string& s) {
    if (s == "static") return ControllerKind::Static;
    if (s == "la") return ControllerKind::LearningAutomata;
    if (s == "neural") return ControllerKind::Neural;
    if (s == "oracle") return ControllerKind::Oracle;
    throw ConfigError("unknown controller '" + s + "' (expected static|la|neural|oracle)");
}

template <typename T>
std::array<T, 4> array4(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 4)
        throw ConfigError(key + " must be an array of 4 values");
    std::array<T, 4> out{};
    for (int i = 0; i < 4; ++i) out[i] = j[i].get<T>();
    return out;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& scope) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) { found = true; break; }
        if (!found)
            throw ConfigError("unknown key '" + it.key() + "' in " + scope);
    }
}

ReservationVector reservation_from_json(const json& j) {
    reject_unknown_keys(j, {"noc", "roc", "nhc", "rhc"}, "reservation");
    ReservationVector rv;
    rv.noc = j.value("noc", 0);
    rv.roc = j.value("roc", 0);
    rv.nhc = j.value("nhc", 0);
    rv.rhc = j.value("rhc", 0);
    return rv;
}

}  // namespace

NetworkConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    reject_unknown_keys(j,
                        {"num_cells", "channels_per_cell", "arrival_rates",
                         "mean_call_duration", "velocity", "cell_diameter", "handoff_mode",
                         "queue_capacity", "renege_deadline", "signaling_delay",
                         "control_period", "load_multiplier", "seed", "sim_duration",
                         "warmup", "controller", "reservation", "cost_weights", "la",
                         "neural", "action_stride"},
                        "config");

    NetworkConfig cfg;
    try {
        if (j.contains("num_cells")) cfg.num_cells = j["num_cells"].get<int>();
        if (j.contains("channels_per_cell"))
            cfg.channels_per_cell = j["channels_per_cell"].get<int>();
        if (j.contains("arrival_rates"))
            cfg.arrival_rates = array4<double>(j["arrival_rates"], "arrival_rates");
        if (j.contains("mean_call_duration"))
            cfg.mean_call_duration = j["mean_call_duration"].get<double>();
        if (j.contains("velocity")) cfg.velocity = j["velocity"].get<double>();
        if (j.contains("cell_diameter")) cfg.cell_diameter = j["cell_diameter"].get<double>();
        if (j.contains("handoff_mode"))
            cfg.handoff_mode = handoff_mode_from_string(j["handoff_mode"].get<std::string>());
        if (j.contains("queue_capacity"))
            cfg.queue_capacity = array4<int>(j["queue_capacity"], "queue_capacity");
        if (j.contains("renege_deadline"))
            cfg.renege_deadline = array4<double>(j["renege_deadline"], "renege_deadline");
        if (j.contains("signaling_delay"))
            cfg.signaling_delay = j["signaling_delay"].get<double>();
        if (j.contains("control_period")) cfg.control_period = j["control_period"].get<double>();
        if (j.contains("load_multiplier"))
            cfg.load_multiplier = j["load_multiplier"].get<double>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("sim_duration")) cfg.sim_duration = j["sim_duration"].get<double>();
        if (j.contains("warmup")) cfg.warmup = j["warmup"].get<double>();
        if (j.contains("controller"))
            cfg.controller = controller_from_string(j["controller"].get<std::string>());
        if (j.contains("reservation"))
            cfg.reservation = reservation_from_json(j["reservation"]);
        if (j.contains("cost_weights")) {
            const json& w = j["cost_weights"];
            reject_unknown_keys(w, {"w_b_rt", "w_b_nrt", "w_d_rt", "w_d_nrt", "w_l", "l_ref"},
                                "cost_weights");
            cfg.cost_weights.w_b_rt = w.value("w_b_rt", cfg.cost_weights.w_b_rt);
            cfg.cost_weights.w_b_nrt = w.value("w_b_nrt", cfg.cost_weights.w_b_nrt);
            cfg.cost_weights.w_d_rt = w.value("w_d_rt", cfg.cost_weights.w_d_rt);
            cfg.cost_weights.w_d_nrt = w.value("w_d_nrt", cfg.cost_weights.w_d_nrt);
            cfg.cost_weights.w_l = w.value("w_l", cfg.cost_weights.w_l);
            cfg.cost_weights.l_ref = w.value("l_ref", cfg.cost_weights.l_ref);
        }
        if (j.contains("la")) {
            const json& l = j["la"];
            reject_unknown_keys(l, {"learning_rate", "j_scale"}, "la");
            cfg.la.learning_rate = l.value("learning_rate", cfg.la.learning_rate);
            cfg.la.j_scale = l.value("j_scale", cfg.la.j_scale);
        }
        if (j.contains("neural")) {
            const json& n = j["neural"];
            reject_unknown_keys(n, {"hidden_units", "learning_rate", "baseline_decay"},
                                "neural");
            cfg.neural.hidden_units = n.value("hidden_units", cfg.neural.hidden_units);
            cfg.neural.learning_rate = n.value("learning_rate", cfg.neural.learning_rate);
            cfg.neural.baseline_decay = n.value("baseline_decay", cfg.neural.baseline_decay);
        }
        if (j.contains("action_stride")) cfg.action_stride = j["action_stride"].get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

std::string config_to_json_text(const NetworkConfig& cfg) {
    json j;
    j["num_cells"] = cfg.num_cells;
    j["channels_per_cell"] = cfg.channels_per_cell;
    j["arrival_rates"] = cfg.arrival_rates;
    j["mean_call_duration"] = cfg.mean_call_duration;
    j["velocity"] = cfg.velocity;
    j["cell_diameter"] = cfg.cell_diameter;
    j["handoff_mode"] = to_string(cfg.handoff_mode);
    j["queue_capacity"] = cfg.queue_capacity;
    j["renege_deadline"] = cfg.renege_deadline;
    j["signaling_delay"] = cfg.signaling_delay;
    j["control_period"] = cfg.control_period;
    j["load_multiplier"] = cfg.load_multiplier;
    j["seed"] = cfg.seed;
    j["sim_duration"] = cfg.sim_duration;
    j["warmup"] = cfg.warmup;
    j["controller"] = to_string(cfg.controller);
    if (cfg.reservation) {
        j["reservation"] = {{"noc", cfg.reservation->noc},
                            {"roc", cfg.reservation->roc},
                            {"nhc", cfg.reservation->nhc},
                            {"rhc", cfg.reservation->rhc}};
    }
    j["cost_weights"] = {{"w_b_rt", cfg.cost_weights.w_b_rt},
                         {"w_b_nrt", cfg.cost_weights.w_b_nrt},
                         {"w_d_rt", cfg.cost_weights.w_d_rt},
                         {"w_d_nrt", cfg.cost_weights.w_d_nrt},
                         {"w_l", cfg.cost_weights.w_l},
                         {"l_ref", cfg.cost_weights.l_ref}};
    j["la"] = {{"learning_rate", cfg.la.learning_rate}, {"j_scale", cfg.la.j_scale}};
    j["neural"] = {{"hidden_units", cfg.neural.hidden_units},
                   {"learning_rate", cfg.neural.learning_rate},
                   {"baseline_decay", cfg.neural.baseline_decay}};
    j["action_stride"] = cfg.action_stride;
    return j.dump(2);
}

NetworkConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

}  // namespace cellsim
