#include "stackfuse/gradient.hpp"

#include "stackfuse/errors.hpp"

namespace stackfuse {

GradientSet GradientSet::zeros_like(const Mlp& net) {
    GradientSet g;
    g.w_ih = Eigen::MatrixXd::Zero(net.hidden_size(), net.input_size());
    g.w_ho = Eigen::MatrixXd::Zero(net.output_size(), net.hidden_size());
    g.b_h = Eigen::VectorXd::Zero(net.hidden_size());
    g.b_o = Eigen::VectorXd::Zero(net.output_size());
    return g;
}

GradientSet gradient(const Mlp& net, const TrainingSet& batch) {
    if (batch.size() == 0) {
        throw EmptySetError("gradient: batch is empty");
    }
    if (batch.targets.rows() != batch.inputs.rows() ||
        batch.targets.cols() != net.output_size()) {
        throw DimensionError("gradient: target shape does not match network output");
    }

    Eigen::MatrixXd hidden, output;
    forward_batch_parts(net, batch.inputs, hidden, output);

    const double scale =
        2.0 / (static_cast<double>(output.rows()) * static_cast<double>(output.cols()));

    // delta_o = dE/dz_o, with f'(z) recovered from the activation values.
    Eigen::MatrixXd delta_o = output;
    net.output_activation.derivative_from_value_inplace(delta_o);
    delta_o.array() *= (output - batch.targets).array() * scale;

    Eigen::MatrixXd delta_h = hidden;
    net.hidden_activation.derivative_from_value_inplace(delta_h);
    delta_h.array() *= (delta_o * net.weights_ho).array();

    GradientSet g;
    g.w_ho.noalias() = delta_o.transpose() * hidden;
    g.b_o = delta_o.colwise().sum().transpose();
    g.w_ih.noalias() = delta_h.transpose() * batch.inputs;
    g.b_h = delta_h.colwise().sum().transpose();
    return g;
}

} // namespace stackfuse
