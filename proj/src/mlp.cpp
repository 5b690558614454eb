#include "cellsim/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cellsim {

namespace {

void check_dims(const MlpParams& p, std::size_t input_size) {
    const std::size_t in = static_cast<std::size_t>(p.input_dim);
    const std::size_t hid = static_cast<std::size_t>(p.hidden_dim);
    const std::size_t out = static_cast<std::size_t>(p.output_dim);
    if (p.input_dim <= 0 || p.hidden_dim <= 0 || p.output_dim <= 0 ||
        p.w1.size() != hid * in || p.b1.size() != hid || p.w2.size() != out * hid ||
        p.b2.size() != out || input_size != in)
        throw std::invalid_argument("mlp: dimension mismatch");
}

}  // namespace

double MlpParams::param(std::size_t i) const {
    return const_cast<MlpParams*>(this)->param(i);
}

double& MlpParams::param(std::size_t i) {
    if (i < w1.size()) return w1[i];
    i -= w1.size();
    if (i < b1.size()) return b1[i];
    i -= b1.size();
    if (i < w2.size()) return w2[i];
    i -= w2.size();
    if (i < b2.size()) return b2[i];
    throw std::out_of_range("MlpParams::param: index out of range");
}

MlpParams make_mlp(int input_dim, int hidden_dim, int output_dim, RandomStream& stream) {
    if (input_dim <= 0 || hidden_dim <= 0 || output_dim <= 0)
        throw std::invalid_argument("make_mlp: dimensions must be positive");
    MlpParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    p.output_dim = output_dim;
    p.w1.resize(static_cast<std::size_t>(hidden_dim) * input_dim);
    p.b1.assign(static_cast<std::size_t>(hidden_dim), 0.0);
    p.w2.resize(static_cast<std::size_t>(output_dim) * hidden_dim);
    p.b2.assign(static_cast<std::size_t>(output_dim), 0.0);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    for (double& w : p.w1) w = stream.normal() * s1;
    for (double& w : p.w2) w = stream.normal() * s2;
    return p;
}

MlpForward mlp_forward(const MlpParams& p, std::span<const double> x) {
    check_dims(p, x.size());
    MlpForward f;
    f.hidden.resize(static_cast<std::size_t>(p.hidden_dim));
    for (int j = 0; j < p.hidden_dim; ++j) {
        double z = p.b1[j];
        const double* row = &p.w1[static_cast<std::size_t>(j) * p.input_dim];
        for (int k = 0; k < p.input_dim; ++k) z += row[k] * x[k];
        f.hidden[j] = std::tanh(z);
    }
    std::vector<double> scores(static_cast<std::size_t>(p.output_dim));
    for (int i = 0; i < p.output_dim; ++i) {
        double z = p.b2[i];
        const double* row = &p.w2[static_cast<std::size_t>(i) * p.hidden_dim];
        for (int j = 0; j < p.hidden_dim; ++j) z += row[j] * f.hidden[j];
        scores[i] = z;
    }
    const double peak = *std::max_element(scores.begin(), scores.end());
    double total = 0.0;
    f.probs.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        f.probs[i] = std::exp(scores[i] - peak);
        total += f.probs[i];
    }
    for (double& pr : f.probs) pr /= total;
    return f;
}

std::vector<double> mlp_gradient(const MlpParams& p, std::span<const double> x, int chosen,
                                 double advantage) {
    check_dims(p, x.size());
    if (chosen < 0 || chosen >= p.output_dim)
        throw std::invalid_argument("mlp_gradient: chosen action out of range");
    const MlpForward f = mlp_forward(p, x);

    // d log softmax[chosen] / d score_i = [i == chosen] - probs[i].
    std::vector<double> dscore(static_cast<std::size_t>(p.output_dim));
    for (int i = 0; i < p.output_dim; ++i)
        dscore[i] = advantage * ((i == chosen ? 1.0 : 0.0) - f.probs[i]);

    std::vector<double> grad(p.parameter_count(), 0.0);
    const std::size_t w1n = p.w1.size();
    const std::size_t b1n = p.b1.size();
    const std::size_t w2n = p.w2.size();

    std::vector<double> dhidden(static_cast<std::size_t>(p.hidden_dim), 0.0);
    for (int i = 0; i < p.output_dim; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * p.hidden_dim;
        for (int j = 0; j < p.hidden_dim; ++j) {
            grad[w1n + b1n + row + j] = dscore[i] * f.hidden[j];  // w2
            dhidden[j] += dscore[i] * p.w2[row + j];
        }
        grad[w1n + b1n + w2n + i] = dscore[i];  // b2
    }
    for (int j = 0; j < p.hidden_dim; ++j) {
        const double dz = dhidden[j] * (1.0 - f.hidden[j] * f.hidden[j]);  // tanh'
        const std::size_t row = static_cast<std::size_t>(j) * p.input_dim;
        for (int k = 0; k < p.input_dim; ++k) grad[row + k] = dz * x[k];  // w1
        grad[w1n + j] = dz;                                               // b1
    }
    return grad;
}

void apply_gradient(MlpParams& p, const std::vector<double>& grad, double learning_rate) {
    if (grad.size() != p.parameter_count())
        throw std::invalid_argument("apply_gradient: gradient size mismatch");
    for (std::size_t i = 0; i < grad.size(); ++i) p.param(i) += learning_rate * grad[i];
}

}  // namespace cellsim
