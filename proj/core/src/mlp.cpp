#include "stackfuse/mlp.hpp"

#include "stackfuse/errors.hpp"
#include "stackfuse/rng.hpp"

#include <cmath>
#include <string>

namespace stackfuse {
namespace {

void fill_uniform(Eigen::MatrixXd& m, double bound, Rng& rng) {
    // Row-major fill order, independent of Eigen's storage layout.
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = rng.uniform(-bound, bound);
        }
    }
}

} // namespace

Mlp init_weights(Eigen::Index input_size, Eigen::Index hidden_size,
                 Eigen::Index output_size, ActivationKind hidden_activation,
                 ActivationKind output_activation, std::uint64_t seed) {
    if (input_size < 1 || hidden_size < 1 || output_size < 1) {
        throw DimensionError("init_weights: all layer sizes must be >= 1, got " +
                             std::to_string(input_size) + "-" + std::to_string(hidden_size) +
                             "-" + std::to_string(output_size));
    }
    Mlp net;
    net.hidden_activation = hidden_activation;
    net.output_activation = output_activation;
    net.weights_ih.resize(hidden_size, input_size);
    net.weights_ho.resize(output_size, hidden_size);
    net.bias_h = Eigen::VectorXd::Zero(hidden_size);
    net.bias_o = Eigen::VectorXd::Zero(output_size);

    Rng rng(seed);
    fill_uniform(net.weights_ih, 1.0 / std::sqrt(static_cast<double>(input_size)), rng);
    fill_uniform(net.weights_ho, 1.0 / std::sqrt(static_cast<double>(hidden_size)), rng);
    return net;
}

void forward_batch_parts(const Mlp& net, const Eigen::MatrixXd& inputs,
                         Eigen::MatrixXd& hidden_out, Eigen::MatrixXd& output_out) {
    if (inputs.cols() != net.input_size()) {
        throw DimensionError("forward: input length " + std::to_string(inputs.cols()) +
                             " does not match network input size " +
                             std::to_string(net.input_size()));
    }
    hidden_out.noalias() = inputs * net.weights_ih.transpose();
    hidden_out.rowwise() += net.bias_h.transpose();
    net.hidden_activation.apply_inplace(hidden_out);
    output_out.noalias() = hidden_out * net.weights_ho.transpose();
    output_out.rowwise() += net.bias_o.transpose();
    net.output_activation.apply_inplace(output_out);
}

Eigen::MatrixXd forward_batch(const Mlp& net, const Eigen::MatrixXd& inputs) {
    Eigen::MatrixXd hidden, output;
    forward_batch_parts(net, inputs, hidden, output);
    return output;
}

Eigen::VectorXd forward(const Mlp& net, const Eigen::VectorXd& input) {
    Eigen::MatrixXd out = forward_batch(net, input.transpose());
    return out.row(0).transpose();
}

double mse_from_outputs(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets) {
    const double n = static_cast<double>(outputs.rows()) * static_cast<double>(outputs.cols());
    return (outputs - targets).squaredNorm() / n;
}

double mse(const Mlp& net, const TrainingSet& set) {
    if (set.size() == 0) {
        throw EmptySetError("mse: sample set is empty");
    }
    if (set.targets.rows() != set.inputs.rows() || set.targets.cols() != net.output_size()) {
        throw DimensionError("mse: target shape does not match network output");
    }
    return mse_from_outputs(forward_batch(net, set.inputs), set.targets);
}

} // namespace stackfuse
