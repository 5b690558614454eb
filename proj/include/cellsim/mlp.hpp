// Minimal multilayer perceptron for the policy controller: one tanh hidden
// layer, linear output, softmax over actions. Exact analytic gradients of
// the log-probability of a chosen action, for REINFORCE-style updates.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cellsim/rng.hpp"

namespace cellsim {

// Parameters flattened per layer, row-major: w1 is hidden x input, w2 is
// output x hidden. The flat index order (w1, b1, w2, b2) is shared by
// mlp_gradient and the param() accessors, which exist so tests can perturb
// one scalar at a time.
struct MlpParams {
    int input_dim = 0;
    int hidden_dim = 0;
    int output_dim = 0;
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    std::vector<double> b2;

    std::size_t parameter_count() const {
        return w1.size() + b1.size() + w2.size() + b2.size();
    }
    double param(std::size_t i) const;
    double& param(std::size_t i);
};

// Weights drawn N(0, 1/sqrt(fan_in)), biases zero.
MlpParams make_mlp(int input_dim, int hidden_dim, int output_dim, RandomStream& stream);

struct MlpForward {
    std::vector<double> hidden;  // tanh activations
    std::vector<double> probs;   // softmax over the output layer
};

// Faults on a dimension mismatch between params and input.
MlpForward mlp_forward(const MlpParams& p, std::span<const double> x);

// Gradient of advantage * log softmax(scores)[chosen] with respect to every
// parameter, in param() index order.
std::vector<double> mlp_gradient(const MlpParams& p, std::span<const double> x, int chosen,
                                 double advantage);

// In-place ascent step: params += learning_rate * grad.
void apply_gradient(MlpParams& p, const std::vector<double>& grad, double learning_rate);

}  // namespace cellsim
