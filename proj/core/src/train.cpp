#include "stackfuse/train.hpp"

#include "stackfuse/errors.hpp"
#include "stackfuse/gradient.hpp"

#include <string>

namespace stackfuse {

TrainedModel train(Mlp net, const TrainingSet& train_set, const TrainingSet& monitor_set,
                   const RpropConfig& config) {
    config.validate();
    if (train_set.size() == 0 || monitor_set.size() == 0) {
        throw EmptySetError("train: train and monitor sets must be nonempty");
    }
    if (train_set.inputs.cols() != net.input_size() ||
        monitor_set.inputs.cols() != net.input_size() ||
        train_set.targets.cols() != net.output_size() ||
        monitor_set.targets.cols() != net.output_size()) {
        throw DimensionError("train: sample dimensions do not match the network");
    }

    TrainedModel result;
    result.history.reserve(static_cast<std::size_t>(config.max_epochs));

    if (config.max_epochs == 0) {
        result.best_monitor_mse = mse(net, monitor_set);
        result.best_epoch = 0;
        result.net = std::move(net);
        return result;
    }

    RpropState state = RpropState::init(net, config.delta_init);
    Mlp best_net = net;
    double best_mse = std::numeric_limits<double>::infinity();
    int best_epoch = 0;

    Eigen::MatrixXd hidden, output;
    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        forward_batch_parts(net, train_set.inputs, hidden, output);
        const double train_mse = mse_from_outputs(output, train_set.targets);

        // Backward pass, reusing the forward activations.
        const double scale =
            2.0 / (static_cast<double>(output.rows()) * static_cast<double>(output.cols()));
        Eigen::MatrixXd delta_o = output;
        net.output_activation.derivative_from_value_inplace(delta_o);
        delta_o.array() *= (output - train_set.targets).array() * scale;
        Eigen::MatrixXd delta_h = hidden;
        net.hidden_activation.derivative_from_value_inplace(delta_h);
        delta_h.array() *= (delta_o * net.weights_ho).array();

        GradientSet grad;
        grad.w_ho.noalias() = delta_o.transpose() * hidden;
        grad.b_o = delta_o.colwise().sum().transpose();
        grad.w_ih.noalias() = delta_h.transpose() * train_set.inputs;
        grad.b_h = delta_h.colwise().sum().transpose();

        const GradientSet delta = rprop_step(state, grad, config);
        net.weights_ih += delta.w_ih;
        net.weights_ho += delta.w_ho;
        net.bias_h += delta.b_h;
        net.bias_o += delta.b_o;

        const double monitor_mse = mse(net, monitor_set);
        result.history.push_back({epoch, train_mse, monitor_mse});
        if (monitor_mse < best_mse) {
            best_mse = monitor_mse;
            best_epoch = epoch;
            best_net = net;
        }
    }

    result.net = std::move(best_net);
    result.best_epoch = best_epoch;
    result.best_monitor_mse = best_mse;
    return result;
}

} // namespace stackfuse
