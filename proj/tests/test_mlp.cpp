#include <cmath>
#include <vector>

#include "cellsim/mlp.hpp"
#include "doctest.h"

using namespace cellsim;

namespace {

std::vector<double> random_input(int n, RandomStream& rng) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = rng.uniform01();
    return x;
}

double log_prob(const MlpParams& p, const std::vector<double>& x, int chosen) {
    return std::log(mlp_forward(p, x).probs[static_cast<std::size_t>(chosen)]);
}

}  // namespace

TEST_CASE("make_mlp shapes and zero biases") {
    RandomStream rng(1);
    MlpParams p = make_mlp(10, 16, 35, rng);
    CHECK(p.w1.size() == 160);
    CHECK(p.b1.size() == 16);
    CHECK(p.w2.size() == 560);
    CHECK(p.b2.size() == 35);
    CHECK(p.parameter_count() == 160 + 16 + 560 + 35);
    for (double b : p.b1) CHECK(b == 0.0);
    for (double b : p.b2) CHECK(b == 0.0);
    CHECK_THROWS_AS(make_mlp(0, 1, 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(make_mlp(1, -1, 1, rng), std::invalid_argument);
}

TEST_CASE("param indexing walks w1, b1, w2, b2 in order") {
    RandomStream rng(2);
    MlpParams p = make_mlp(2, 3, 2, rng);
    CHECK(p.param(0) == p.w1[0]);
    CHECK(p.param(5) == p.w1[5]);
    CHECK(p.param(6) == p.b1[0]);
    CHECK(p.param(9) == p.w2[0]);
    CHECK(p.param(15) == p.b2[0]);
    p.param(6) = 7.5;
    CHECK(p.b1[0] == 7.5);
    CHECK_THROWS_AS(p.param(p.parameter_count()), std::out_of_range);
}

TEST_CASE("zero weights give a uniform policy") {
    MlpParams p;
    p.input_dim = 4;
    p.hidden_dim = 3;
    p.output_dim = 5;
    p.w1.assign(12, 0.0);
    p.b1.assign(3, 0.0);
    p.w2.assign(15, 0.0);
    p.b2.assign(5, 0.0);
    const MlpForward f = mlp_forward(p, std::vector<double>{0.1, 0.2, 0.3, 0.4});
    for (double pr : f.probs) CHECK(pr == doctest::Approx(0.2));
}

TEST_CASE("softmax is a distribution and shift invariant") {
    RandomStream rng(3);
    MlpParams p = make_mlp(6, 8, 7, rng);
    const std::vector<double> x = random_input(6, rng);
    MlpForward f = mlp_forward(p, x);
    double total = 0.0;
    for (double pr : f.probs) {
        CHECK(pr > 0.0);
        total += pr;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Adding a constant to every output bias leaves the softmax unchanged.
    MlpParams shifted = p;
    for (double& b : shifted.b2) b += 13.0;
    MlpForward g = mlp_forward(shifted, x);
    for (std::size_t i = 0; i < f.probs.size(); ++i)
        CHECK(g.probs[i] == doctest::Approx(f.probs[i]).epsilon(1e-12));

    // Extreme scores do not overflow.
    for (double& b : shifted.b2) b = 0.0;
    shifted.b2[2] = 800.0;
    g = mlp_forward(shifted, x);
    CHECK(g.probs[2] == doctest::Approx(1.0));
}

TEST_CASE("dimension mismatches are faults") {
    RandomStream rng(4);
    MlpParams p = make_mlp(3, 2, 2, rng);
    CHECK_THROWS_AS(mlp_forward(p, std::vector<double>{1.0, 2.0}), std::invalid_argument);
    std::vector<double> x = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(mlp_gradient(p, x, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(mlp_gradient(p, x, -1, 1.0), std::invalid_argument);
    p.w2.pop_back();
    CHECK_THROWS_AS(mlp_forward(p, x), std::invalid_argument);

    MlpParams ok = make_mlp(3, 2, 2, rng);
    CHECK_THROWS_AS(apply_gradient(ok, std::vector<double>(3, 0.0), 0.1),
                    std::invalid_argument);
}

TEST_CASE("analytic gradient matches central finite differences") {
    RandomStream rng(5);
    const double eps = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const int in = 2 + rng.uniform_int(6);
        const int hid = 2 + rng.uniform_int(6);
        const int out = 2 + rng.uniform_int(8);
        MlpParams p = make_mlp(in, hid, out, rng);
        const std::vector<double> x = random_input(in, rng);
        const int chosen = rng.uniform_int(out);
        const double advantage = (rng.uniform01() - 0.5) * 4.0;

        const std::vector<double> grad = mlp_gradient(p, x, chosen, advantage);
        REQUIRE(grad.size() == p.parameter_count());
        for (std::size_t i = 0; i < p.parameter_count(); ++i) {
            MlpParams plus = p;
            plus.param(i) += eps;
            MlpParams minus = p;
            minus.param(i) -= eps;
            const double fd =
                advantage * (log_prob(plus, x, chosen) - log_prob(minus, x, chosen)) /
                (2.0 * eps);
            const double denom = std::max({std::fabs(fd), std::fabs(grad[i]), 1e-6});
            CHECK(std::fabs(grad[i] - fd) / denom < 1e-4);
        }
    }
}

TEST_CASE("gradient scales linearly with the advantage") {
    RandomStream rng(6);
    MlpParams p = make_mlp(4, 3, 5, rng);
    const std::vector<double> x = random_input(4, rng);
    const std::vector<double> g1 = mlp_gradient(p, x, 2, 1.0);
    const std::vector<double> g2 = mlp_gradient(p, x, 2, 2.0);
    const std::vector<double> g0 = mlp_gradient(p, x, 2, 0.0);
    for (std::size_t i = 0; i < g1.size(); ++i) {
        CHECK(g2[i] == doctest::Approx(2.0 * g1[i]));
        CHECK(g0[i] == 0.0);
    }
}

TEST_CASE("gradient ascent raises the chosen action's probability") {
    RandomStream rng(7);
    MlpParams p = make_mlp(5, 4, 6, rng);
    const std::vector<double> x = random_input(5, rng);
    const int chosen = 3;
    const double before = mlp_forward(p, x).probs[chosen];
    for (int step = 0; step < 50; ++step)
        apply_gradient(p, mlp_gradient(p, x, chosen, 1.0), 0.1);
    const double after = mlp_forward(p, x).probs[chosen];
    CHECK(after > before);
    CHECK(after > 0.9);
}
