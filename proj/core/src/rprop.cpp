#include "stackfuse/rprop.hpp"

#include "stackfuse/errors.hpp"

#include <cmath>

namespace stackfuse {
namespace {

double sign(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
}

void step_array(Eigen::Ref<Eigen::MatrixXd> steps, Eigen::Ref<Eigen::MatrixXd> prev,
                const Eigen::Ref<const Eigen::MatrixXd>& grad,
                Eigen::Ref<Eigen::MatrixXd> delta, const RpropConfig& cfg) {
    for (Eigen::Index c = 0; c < grad.cols(); ++c) {
        for (Eigen::Index r = 0; r < grad.rows(); ++r) {
            const double g = grad(r, c);
            const double prod = g * prev(r, c);
            double step = steps(r, c);
            if (prod > 0.0) {
                step = std::min(step * cfg.eta_plus, cfg.delta_max);
                delta(r, c) = -sign(g) * step;
                prev(r, c) = g;
            } else if (prod < 0.0) {
                step = std::max(step * cfg.eta_minus, cfg.delta_min);
                delta(r, c) = 0.0; // suppress the move on a sign flip
                prev(r, c) = 0.0;
            } else {
                delta(r, c) = -sign(g) * step;
                prev(r, c) = g;
            }
            steps(r, c) = step;
        }
    }
}

} // namespace

void RpropConfig::validate() const {
    if (!(eta_plus > 1.0)) throw InvalidArgumentError("rprop: eta_plus must exceed 1");
    if (!(eta_minus > 0.0 && eta_minus < 1.0)) {
        throw InvalidArgumentError("rprop: eta_minus must lie in (0, 1)");
    }
    if (!(delta_init > 0.0)) throw InvalidArgumentError("rprop: delta_init must be positive");
    if (!(delta_min > 0.0)) throw InvalidArgumentError("rprop: delta_min must be positive");
    if (!(delta_min <= delta_init && delta_init <= delta_max)) {
        throw InvalidArgumentError("rprop: require delta_min <= delta_init <= delta_max");
    }
    if (max_epochs < 0) throw InvalidArgumentError("rprop: max_epochs must be >= 0");
}

RpropState RpropState::init(const Mlp& net, double delta_init) {
    RpropState s;
    s.steps.w_ih = Eigen::MatrixXd::Constant(net.hidden_size(), net.input_size(), delta_init);
    s.steps.w_ho = Eigen::MatrixXd::Constant(net.output_size(), net.hidden_size(), delta_init);
    s.steps.b_h = Eigen::VectorXd::Constant(net.hidden_size(), delta_init);
    s.steps.b_o = Eigen::VectorXd::Constant(net.output_size(), delta_init);
    s.prev_grad.w_ih = Eigen::MatrixXd::Zero(net.hidden_size(), net.input_size());
    s.prev_grad.w_ho = Eigen::MatrixXd::Zero(net.output_size(), net.hidden_size());
    s.prev_grad.b_h = Eigen::VectorXd::Zero(net.hidden_size());
    s.prev_grad.b_o = Eigen::VectorXd::Zero(net.output_size());
    return s;
}

GradientSet rprop_step(RpropState& state, const GradientSet& grad, const RpropConfig& config) {
    if (state.steps.w_ih.rows() != grad.w_ih.rows() ||
        state.steps.w_ih.cols() != grad.w_ih.cols() ||
        state.steps.w_ho.rows() != grad.w_ho.rows() ||
        state.steps.w_ho.cols() != grad.w_ho.cols() ||
        state.steps.b_h.size() != grad.b_h.size() ||
        state.steps.b_o.size() != grad.b_o.size()) {
        throw DimensionError("rprop_step: state and gradient shapes differ");
    }
    GradientSet delta;
    delta.w_ih.resizeLike(grad.w_ih);
    delta.w_ho.resizeLike(grad.w_ho);
    delta.b_h.resizeLike(grad.b_h);
    delta.b_o.resizeLike(grad.b_o);

    step_array(state.steps.w_ih, state.prev_grad.w_ih, grad.w_ih, delta.w_ih, config);
    step_array(state.steps.w_ho, state.prev_grad.w_ho, grad.w_ho, delta.w_ho, config);
    step_array(state.steps.b_h, state.prev_grad.b_h, grad.b_h, delta.b_h, config);
    step_array(state.steps.b_o, state.prev_grad.b_o, grad.b_o, delta.b_o, config);
    return delta;
}

} // namespace stackfuse
