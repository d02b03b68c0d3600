#include "stackfuse/errors.hpp"
#include "stackfuse/gradient.hpp"
#include "stackfuse/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace stackfuse;

namespace {

const ActivationKind kSigmoid = ActivationKind::symmetric_sigmoid(0.5);

// Central finite differences of the batch MSE; goes through the public
// forward/mse path only, never through the analytic gradient.
GradientSet finite_difference_gradient(Mlp net, const TrainingSet& batch, double h = 1e-5) {
    GradientSet fd = GradientSet::zeros_like(net);
    auto probe = [&](double& param, double& out) {
        const double saved = param;
        param = saved + h;
        const double up = mse(net, batch);
        param = saved - h;
        const double down = mse(net, batch);
        param = saved;
        out = (up - down) / (2.0 * h);
    };
    for (Eigen::Index r = 0; r < net.weights_ih.rows(); ++r)
        for (Eigen::Index c = 0; c < net.weights_ih.cols(); ++c)
            probe(net.weights_ih(r, c), fd.w_ih(r, c));
    for (Eigen::Index r = 0; r < net.weights_ho.rows(); ++r)
        for (Eigen::Index c = 0; c < net.weights_ho.cols(); ++c)
            probe(net.weights_ho(r, c), fd.w_ho(r, c));
    for (Eigen::Index i = 0; i < net.bias_h.size(); ++i) probe(net.bias_h(i), fd.b_h(i));
    for (Eigen::Index i = 0; i < net.bias_o.size(); ++i) probe(net.bias_o(i), fd.b_o(i));
    return fd;
}

bool close(double analytic, double numeric, double rel = 1e-4, double abs_floor = 1e-7) {
    const double diff = std::abs(analytic - numeric);
    if (diff <= abs_floor) return true;
    return diff <= rel * std::max(std::abs(analytic), std::abs(numeric));
}

void check_against_fd(const Mlp& net, const TrainingSet& batch) {
    const GradientSet g = gradient(net, batch);
    const GradientSet fd = finite_difference_gradient(net, batch);
    for (Eigen::Index r = 0; r < g.w_ih.rows(); ++r)
        for (Eigen::Index c = 0; c < g.w_ih.cols(); ++c)
            CHECK_MESSAGE(close(g.w_ih(r, c), fd.w_ih(r, c)), "w_ih(", r, ",", c, ")");
    for (Eigen::Index r = 0; r < g.w_ho.rows(); ++r)
        for (Eigen::Index c = 0; c < g.w_ho.cols(); ++c)
            CHECK_MESSAGE(close(g.w_ho(r, c), fd.w_ho(r, c)), "w_ho(", r, ",", c, ")");
    for (Eigen::Index i = 0; i < g.b_h.size(); ++i)
        CHECK_MESSAGE(close(g.b_h(i), fd.b_h(i)), "b_h(", i, ")");
    for (Eigen::Index i = 0; i < g.b_o.size(); ++i)
        CHECK_MESSAGE(close(g.b_o(i), fd.b_o(i)), "b_o(", i, ")");
}

TrainingSet random_batch(Rng& rng, Eigen::Index n, Eigen::Index in, Eigen::Index out) {
    TrainingSet batch;
    batch.inputs.resize(n, in);
    batch.targets.resize(n, out);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < in; ++c) batch.inputs(r, c) = rng.uniform(-1.0, 1.0);
        for (Eigen::Index c = 0; c < out; ++c) batch.targets(r, c) = rng.uniform(-1.0, 1.0);
    }
    return batch;
}

} // namespace

TEST_CASE("gradient vanishes at an exact fit with linear output") {
    Mlp net = init_weights(3, 2, 2, kSigmoid, ActivationKind::linear(), 5);
    TrainingSet batch;
    batch.inputs.resize(4, 3);
    Rng rng(21);
    for (Eigen::Index r = 0; r < 4; ++r)
        for (Eigen::Index c = 0; c < 3; ++c) batch.inputs(r, c) = rng.uniform(-1.0, 1.0);
    batch.targets = forward_batch(net, batch.inputs);

    const GradientSet g = gradient(net, batch);
    CHECK(g.w_ih.cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.w_ho.cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.b_h.cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.b_o.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient matches central finite differences on random 3-4-2 nets") {
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const Mlp net = init_weights(3, 4, 2, kSigmoid, kSigmoid, rng.next_u64());
        const TrainingSet batch = random_batch(rng, 5, 3, 2);
        check_against_fd(net, batch);
    }
}

TEST_CASE("gradient matches finite differences with a linear output layer") {
    Rng rng(43);
    const Mlp net = init_weights(4, 3, 2, kSigmoid, ActivationKind::linear(), rng.next_u64());
    const TrainingSet batch = random_batch(rng, 4, 4, 2);
    check_against_fd(net, batch);
}

TEST_CASE("duplicated hidden units receive identical gradients") {
    Mlp net = init_weights(3, 2, 2, kSigmoid, kSigmoid, 9);
    // Make unit 1 a copy of unit 0, incoming and outgoing.
    net.weights_ih.row(1) = net.weights_ih.row(0);
    net.bias_h(1) = net.bias_h(0);
    net.weights_ho.col(1) = net.weights_ho.col(0);

    Rng rng(10);
    const TrainingSet batch = random_batch(rng, 5, 3, 2);
    const GradientSet g = gradient(net, batch);
    for (Eigen::Index c = 0; c < 3; ++c) CHECK(g.w_ih(0, c) == g.w_ih(1, c));
    CHECK(g.b_h(0) == g.b_h(1));
    for (Eigen::Index r = 0; r < 2; ++r) CHECK(g.w_ho(r, 0) == g.w_ho(r, 1));
}

TEST_CASE("gradient rejects empty batches and bad shapes") {
    const Mlp net = init_weights(2, 2, 2, kSigmoid, kSigmoid, 2);
    TrainingSet empty;
    empty.inputs.resize(0, 2);
    empty.targets.resize(0, 2);
    CHECK_THROWS_AS((void)gradient(net, empty), EmptySetError);

    TrainingSet bad;
    bad.inputs.resize(2, 3);
    bad.inputs.setZero();
    bad.targets.resize(2, 2);
    bad.targets.setZero();
    CHECK_THROWS_AS((void)gradient(net, bad), DimensionError);
}
