#include "cellsim/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cellsim/analytic.hpp"
#include "cellsim/traffic.hpp"

namespace cellsim {

double window_cost(const MetricsWindow& w, const CostWeights& weights, double signaling_delay) {
    auto term = [&](CallClass c, double weight) {
        const auto p = refusal_probability(w, c);
        return p ? weight * *p : 0.0;
    };
    double j = term(CallClass::RtOriginating, weights.w_b_rt) +
               term(CallClass::NrtOriginating, weights.w_b_nrt) +
               term(CallClass::RtHandoff, weights.w_d_rt) +
               term(CallClass::NrtHandoff, weights.w_d_nrt);
    if (const auto latency = mean_handoff_latency(w, signaling_delay))
        j += weights.w_l * std::min(*latency / weights.l_ref, 1.0);
    return j;
}

std::vector<ReservationVector> build_action_set(int channels, int stride) {
    if (stride < 1 || channels < 1 || channels % stride != 0)
        throw std::invalid_argument(
            "build_action_set: stride must be >= 1 and divide channels (empty lattice)");
    std::vector<ReservationVector> actions;
    for (int noc = 0; noc <= channels; noc += stride)
        for (int roc = 0; noc + roc <= channels; roc += stride)
            for (int nhc = 0; noc + roc + nhc <= channels; nhc += stride)
                actions.push_back({noc, roc, nhc, channels - noc - roc - nhc});
    return actions;
}

void la_update(std::vector<double>& probs, int chosen, double beta, double a) {
    if (probs.empty()) throw std::invalid_argument("la_update: empty distribution");
    if (chosen < 0 || chosen >= static_cast<int>(probs.size()))
        throw std::invalid_argument("la_update: chosen index out of range");
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("la_update: a must be in (0,1)");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("la_update: beta must be in [0,1]");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("la_update: probability outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("la_update: probabilities do not sum to 1");

    const double step = a * beta;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        if (static_cast<int>(j) == chosen)
            probs[j] += step * (1.0 - probs[j]);
        else
            probs[j] -= step * probs[j];
    }
}

double cost_to_reward(double cost, double j_scale) {
    if (j_scale <= 0.0) throw std::invalid_argument("cost_to_reward: j_scale must be > 0");
    return std::max(0.0, 1.0 - cost / j_scale);
}

LaController::LaController(std::vector<ReservationVector> actions, const LaParams& params,
                           std::uint64_t stream_seed)
    : actions_(std::move(actions)),
      params_(params),
      stream_(stream_seed) {
    if (actions_.empty()) throw std::invalid_argument("LaController: empty action set");
    probs_.assign(actions_.size(), 1.0 / static_cast<double>(actions_.size()));
}

ReservationVector LaController::decide(const MetricsWindow&, const ReservationVector&) {
    const int idx = stream_.categorical(probs_);
    last_choice_ = idx;
    return actions_[static_cast<std::size_t>(idx)];
}

void LaController::notify_reward(double cost) {
    if (!last_choice_) return;
    la_update(probs_, *last_choice_, cost_to_reward(cost, params_.j_scale),
              params_.learning_rate);
    last_choice_.reset();
}

nlohmann::json LaController::to_state() const {
    return {{"controller", "la"}, {"num_actions", actions_.size()}, {"probs", probs_}};
}

void LaController::from_state(const nlohmann::json& state) {
    if (state.value("controller", "") != "la")
        throw ConfigError("controller state: expected la state");
    if (state.value("num_actions", std::size_t{0}) != actions_.size())
        throw ConfigError("controller state: action set size mismatch");
    std::vector<double> probs = state.at("probs").get<std::vector<double>>();
    if (probs.size() != actions_.size())
        throw ConfigError("controller state: probability vector size mismatch");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError("controller state: probability outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw ConfigError("controller state: probabilities do not sum to 1");
    probs_ = std::move(probs);
    last_choice_.reset();
}

std::vector<double> policy_features(const MetricsWindow& w, const ReservationVector& current,
                                    int channels, const CostWeights& weights,
                                    double signaling_delay) {
    std::vector<double> f(10, 0.0);
    f[0] = refusal_probability(w, CallClass::RtOriginating).value_or(0.0);
    f[1] = refusal_probability(w, CallClass::NrtOriginating).value_or(0.0);
    f[2] = refusal_probability(w, CallClass::RtHandoff).value_or(0.0);
    f[3] = refusal_probability(w, CallClass::NrtHandoff).value_or(0.0);
    const double latency = mean_handoff_latency(w, signaling_delay).value_or(0.0);
    f[4] = std::min(latency / weights.l_ref, 1.0);
    const double span = w.end - w.start;
    if (span > 0.0 && channels > 0)
        f[5] = std::clamp(w.busy_channel_time / (channels * span), 0.0, 1.0);
    const double c = static_cast<double>(channels);
    f[6] = current.noc / c;
    f[7] = current.roc / c;
    f[8] = current.nhc / c;
    f[9] = current.rhc / c;
    return f;
}

NeuralController::NeuralController(std::vector<ReservationVector> actions,
                                   const NeuralParams& params, int channels,
                                   const CostWeights& weights, double signaling_delay,
                                   std::uint64_t stream_seed)
    : actions_(std::move(actions)),
      params_(params),
      channels_(channels),
      weights_(weights),
      signaling_delay_(signaling_delay),
      stream_(stream_seed) {
    if (actions_.empty()) throw std::invalid_argument("NeuralController: empty action set");
    net_ = make_mlp(10, params_.hidden_units, static_cast<int>(actions_.size()), stream_);
}

ReservationVector NeuralController::decide(const MetricsWindow& w,
                                           const ReservationVector& current) {
    last_features_ = policy_features(w, current, channels_, weights_, signaling_delay_);
    const MlpForward f = mlp_forward(net_, last_features_);
    const int idx = stream_.categorical(f.probs);
    last_choice_ = idx;
    return actions_[static_cast<std::size_t>(idx)];
}

void NeuralController::notify_reward(double cost) {
    if (!last_choice_) return;
    const double reward = -cost;
    double advantage = 0.0;
    if (baseline_) {
        advantage = reward - *baseline_;
        baseline_ = params_.baseline_decay * *baseline_ +
                    (1.0 - params_.baseline_decay) * reward;
    } else {
        baseline_ = reward;
    }
    const auto grad = mlp_gradient(net_, last_features_, *last_choice_, advantage);
    apply_gradient(net_, grad, params_.learning_rate);
    last_choice_.reset();
}

nlohmann::json NeuralController::to_state() const {
    nlohmann::json j{{"controller", "neural"},
                     {"input_dim", net_.input_dim},
                     {"hidden_dim", net_.hidden_dim},
                     {"output_dim", net_.output_dim},
                     {"w1", net_.w1},
                     {"b1", net_.b1},
                     {"w2", net_.w2},
                     {"b2", net_.b2}};
    if (baseline_)
        j["baseline"] = *baseline_;
    else
        j["baseline"] = nullptr;
    return j;
}

void NeuralController::from_state(const nlohmann::json& state) {
    if (state.value("controller", "") != "neural")
        throw ConfigError("controller state: expected neural state");
    if (state.value("input_dim", -1) != net_.input_dim ||
        state.value("hidden_dim", -1) != net_.hidden_dim ||
        state.value("output_dim", -1) != net_.output_dim)
        throw ConfigError("controller state: network dimensions mismatch");
    MlpParams loaded = net_;
    loaded.w1 = state.at("w1").get<std::vector<double>>();
    loaded.b1 = state.at("b1").get<std::vector<double>>();
    loaded.w2 = state.at("w2").get<std::vector<double>>();
    loaded.b2 = state.at("b2").get<std::vector<double>>();
    if (loaded.w1.size() != net_.w1.size() || loaded.b1.size() != net_.b1.size() ||
        loaded.w2.size() != net_.w2.size() || loaded.b2.size() != net_.b2.size())
        throw ConfigError("controller state: parameter array size mismatch");
    net_ = std::move(loaded);
    const auto& b = state.at("baseline");
    baseline_ = b.is_null() ? std::nullopt : std::optional<double>(b.get<double>());
    last_choice_.reset();
}

std::unique_ptr<Controller> make_controller(const NetworkConfig& cfg, int cell,
                                            std::uint64_t master_seed) {
    const std::uint64_t seed =
        derive_stream_seed(master_seed, cell, -1, StreamPurpose::Controller);
    switch (cfg.controller) {
    case ControllerKind::Static:
        return std::make_unique<StaticController>(cfg.initial_reservation());
    case ControllerKind::LearningAutomata:
        return std::make_unique<LaController>(
            build_action_set(cfg.channels_per_cell, cfg.effective_stride()), cfg.la, seed);
    case ControllerKind::Neural:
        return std::make_unique<NeuralController>(
            build_action_set(cfg.channels_per_cell, cfg.effective_stride()), cfg.neural,
            cfg.channels_per_cell, cfg.cost_weights, cfg.signaling_delay, seed);
    case ControllerKind::Oracle: {
        const bool pure_loss = cfg.queue_capacity == std::array<int, 4>{0, 0, 0, 0};
        if (cfg.handoff_mode != HandoffMode::Exogenous || !pure_loss)
            throw ConfigError(
                "oracle controller requires an exogenous pure-loss configuration");
        std::array<double, 4> rho{};
        for (CallClass c : kAllClasses)
            rho[class_index(c)] = per_cell_rate(cfg, c) * cfg.mean_call_duration;
        return std::make_unique<OracleController>(
            brute_force_optimum(cfg.channels_per_cell, rho, cfg.cost_weights,
                                cfg.effective_stride(), cfg.signaling_delay));
    }
    }
    throw std::logic_error("make_controller: unknown controller kind");
}

}  // namespace cellsim
