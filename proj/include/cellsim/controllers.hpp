// Reservation controllers: at every control tick each cell maps its last
// metrics window to the reservation vector for the next period. Four
// interchangeable policies: fixed vector, linear reward-inaction learning
// automaton, softmax policy network, and the analytic brute-force oracle.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"

#include "cellsim/core.hpp"
#include "cellsim/metrics.hpp"
#include "cellsim/mlp.hpp"
#include "cellsim/rng.hpp"

namespace cellsim {

// Scalar cost of one window: weighted per-class blocking and dropping plus
// a capped latency term. Undefined probabilities (no arrivals of a class,
// or no admitted handoff) contribute zero.
double window_cost(const MetricsWindow& w, const CostWeights& weights, double signaling_delay);

// All four-way partitions of `channels` into multiples of `stride`
// (shared pool empty), in lexicographically ascending (noc, roc, nhc, rhc)
// order. Faults unless stride >= 1 and divides channels. Contains the
// equal-split vector whenever that vector is itself such a partition
// (channels divisible by 4 and stride divides channels/4).
std::vector<ReservationVector> build_action_set(int channels, int stride);

// One linear reward-inaction step: the chosen action's probability gains
// a*beta*(1 - p_chosen) and every other loses a*beta*p_j. Faults unless
// probs is a distribution (sum within 1e-9 of 1), 0 < a < 1, beta in [0,1].
void la_update(std::vector<double>& probs, int chosen, double beta, double a);

// Maps a window cost to the automaton's reward signal in [0, 1].
double cost_to_reward(double cost, double j_scale);

class Controller {
public:
    virtual ~Controller() = default;

    // Reservation to use for the next period, given the window just closed.
    // The very first call of a run sees an empty window.
    virtual ReservationVector decide(const MetricsWindow& w, const ReservationVector& current) = 0;

    // Cost observed over the period configured by the last decide. Learning
    // controllers consume (and then forget) that remembered choice, so a
    // choice is never credited twice and never across runs.
    virtual void notify_reward(double cost) = 0;

    virtual ControllerKind kind() const = 0;

    // State round-trip for warm starts. Stateless controllers return {}.
    virtual nlohmann::json to_state() const { return nlohmann::json::object(); }
    virtual void from_state(const nlohmann::json&) {}
};

class StaticController final : public Controller {
public:
    explicit StaticController(const ReservationVector& rv) : rv_(rv) {}

    ReservationVector decide(const MetricsWindow&, const ReservationVector&) override {
        return rv_;
    }
    void notify_reward(double) override {}
    ControllerKind kind() const override { return ControllerKind::Static; }

private:
    ReservationVector rv_;
};

class LaController final : public Controller {
public:
    LaController(std::vector<ReservationVector> actions, const LaParams& params,
                 std::uint64_t stream_seed);

    ReservationVector decide(const MetricsWindow& w, const ReservationVector& current) override;
    void notify_reward(double cost) override;
    ControllerKind kind() const override { return ControllerKind::LearningAutomata; }

    nlohmann::json to_state() const override;
    void from_state(const nlohmann::json& state) override;

    const std::vector<double>& probabilities() const { return probs_; }
    const std::vector<ReservationVector>& actions() const { return actions_; }

private:
    std::vector<ReservationVector> actions_;
    std::vector<double> probs_;
    LaParams params_;
    RandomStream stream_;
    std::optional<int> last_choice_;
};

class NeuralController final : public Controller {
public:
    // Needs the channel count for feature normalisation and the cost scale
    // implied by the weights only through the features; the network itself
    // maps the 10 features below to a softmax over the action set.
    NeuralController(std::vector<ReservationVector> actions, const NeuralParams& params,
                     int channels, const CostWeights& weights, double signaling_delay,
                     std::uint64_t stream_seed);

    ReservationVector decide(const MetricsWindow& w, const ReservationVector& current) override;
    void notify_reward(double cost) override;
    ControllerKind kind() const override { return ControllerKind::Neural; }

    nlohmann::json to_state() const override;
    void from_state(const nlohmann::json& state) override;

    const MlpParams& network() const { return net_; }

private:
    std::vector<ReservationVector> actions_;
    NeuralParams params_;
    int channels_;
    CostWeights weights_;
    double signaling_delay_;
    MlpParams net_;
    RandomStream stream_;
    std::optional<int> last_choice_;
    std::vector<double> last_features_;
    std::optional<double> baseline_;
};

class OracleController final : public Controller {
public:
    explicit OracleController(const ReservationVector& optimum) : rv_(optimum) {}

    ReservationVector decide(const MetricsWindow&, const ReservationVector&) override {
        return rv_;
    }
    void notify_reward(double) override {}
    ControllerKind kind() const override { return ControllerKind::Oracle; }

private:
    ReservationVector rv_;
};

// The policy network's input: per-class refusal probabilities, capped
// normalised latency, channel utilisation, and the current reservation
// normalised by the channel count. All components lie in [0, 1].
std::vector<double> policy_features(const MetricsWindow& w, const ReservationVector& current,
                                    int channels, const CostWeights& weights,
                                    double signaling_delay);

// Builds the configured controller for one cell. Stream seeds derive from
// (master_seed, cell) so cells learn independently. The oracle flavour
// requires an exogenous pure-loss configuration and throws ConfigError
// otherwise.
std::unique_ptr<Controller> make_controller(const NetworkConfig& cfg, int cell,
                                            std::uint64_t master_seed);

}  // namespace cellsim
