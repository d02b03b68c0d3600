#include "stackfuse/activation.hpp"

#include "stackfuse/errors.hpp"

#include <cmath>
#include <limits>

namespace stackfuse {
namespace {

// Largest double strictly below 1; keeps sigmoid outputs inside the open
// interval even when exp() saturates.
const double kOpenOne = std::nextafter(1.0, 0.0);

} // namespace

ActivationKind ActivationKind::symmetric_sigmoid(double steepness) {
    if (!(steepness > 0.0)) {
        throw InvalidArgumentError("symmetric sigmoid steepness must be positive");
    }
    return ActivationKind{ActivationType::SymmetricSigmoid, steepness};
}

ActivationKind ActivationKind::linear() {
    return ActivationKind{ActivationType::Linear, 1.0};
}

double ActivationKind::apply(double x) const {
    if (type == ActivationType::Linear) return x;
    // tanh(s*x) written via exp so the scalar and batched paths share one
    // formula; exp(2sx) -> inf gives 1, -> 0 gives -1, both then clamped.
    double t = 1.0 - 2.0 / (std::exp(2.0 * steepness * x) + 1.0);
    if (t >= 1.0) return kOpenOne;
    if (t <= -1.0) return -kOpenOne;
    return t;
}

double ActivationKind::derivative_from_value(double y) const {
    if (type == ActivationType::Linear) return 1.0;
    return steepness * (1.0 - y * y);
}

void ActivationKind::apply_inplace(Eigen::MatrixXd& values) const {
    if (type == ActivationType::Linear) return;
    values.array() = 1.0 - 2.0 / ((2.0 * steepness * values.array()).exp() + 1.0);
    values.array() = values.array().min(kOpenOne).max(-kOpenOne);
}

void ActivationKind::derivative_from_value_inplace(Eigen::MatrixXd& values) const {
    if (type == ActivationType::Linear) {
        values.setOnes();
        return;
    }
    values.array() = steepness * (1.0 - values.array().square());
}

std::string to_string(ActivationType type) {
    switch (type) {
        case ActivationType::SymmetricSigmoid: return "symmetric-sigmoid";
        case ActivationType::Linear: return "linear";
    }
    throw InvalidArgumentError("unknown activation type");
}

ActivationType activation_type_from_string(const std::string& name) {
    if (name == "symmetric-sigmoid") return ActivationType::SymmetricSigmoid;
    if (name == "linear") return ActivationType::Linear;
    throw ParseError("unknown activation kind: " + name);
}

} // namespace stackfuse
