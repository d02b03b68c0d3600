#pragma once

#include "stackfuse/activation.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace stackfuse {

/// Three-layer fully connected perceptron. Input->hidden and hidden->output
/// are the only connections; weights are stored row-major per target unit
/// (weights_ih is hidden x input, weights_ho is output x hidden).
struct Mlp {
    Eigen::MatrixXd weights_ih;
    Eigen::MatrixXd weights_ho;
    Eigen::VectorXd bias_h;
    Eigen::VectorXd bias_o;
    ActivationKind hidden_activation;
    ActivationKind output_activation;

    Eigen::Index input_size() const { return weights_ih.cols(); }
    Eigen::Index hidden_size() const { return weights_ih.rows(); }
    Eigen::Index output_size() const { return weights_ho.rows(); }
};

/// Dense batch of (input, target) pairs; one sample per row.
struct TrainingSet {
    Eigen::MatrixXd inputs;  // N x input_size
    Eigen::MatrixXd targets; // N x output_size

    Eigen::Index size() const { return inputs.rows(); }
};

/// Weights uniform in +-1/sqrt(fan_in) per layer, biases zero. The draw
/// order is fixed (weights_ih row-major, then weights_ho row-major), so
/// identical (sizes, seed) yield bit-identical networks.
Mlp init_weights(Eigen::Index input_size, Eigen::Index hidden_size,
                 Eigen::Index output_size, ActivationKind hidden_activation,
                 ActivationKind output_activation, std::uint64_t seed);

Eigen::VectorXd forward(const Mlp& net, const Eigen::VectorXd& input);

/// Batched forward pass over row-per-sample inputs. Returns N x output_size.
Eigen::MatrixXd forward_batch(const Mlp& net, const Eigen::MatrixXd& inputs);

/// Batched forward pass that also exposes the hidden activations, which the
/// backward pass reuses.
void forward_batch_parts(const Mlp& net, const Eigen::MatrixXd& inputs,
                         Eigen::MatrixXd& hidden_out, Eigen::MatrixXd& output_out);

/// Mean over all samples and output components of (output - target)^2.
double mse(const Mlp& net, const TrainingSet& set);

/// MSE from precomputed outputs; shared by mse() and the training loop.
double mse_from_outputs(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets);

} // namespace stackfuse
