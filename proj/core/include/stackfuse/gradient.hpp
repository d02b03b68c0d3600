#pragma once

#include "stackfuse/mlp.hpp"

#include <Eigen/Core>

namespace stackfuse {

/// Partial derivatives of a batch MSE, shaped like the network parameters.
struct GradientSet {
    Eigen::MatrixXd w_ih;
    Eigen::MatrixXd w_ho;
    Eigen::VectorXd b_h;
    Eigen::VectorXd b_o;

    static GradientSet zeros_like(const Mlp& net);
};

/// Exact backpropagation gradient of mse(net, batch) w.r.t. every weight
/// and bias.
GradientSet gradient(const Mlp& net, const TrainingSet& batch);

} // namespace stackfuse
