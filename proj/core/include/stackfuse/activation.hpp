#pragma once

#include <Eigen/Core>

#include <string>

namespace stackfuse {

enum class ActivationType {
    SymmetricSigmoid, // 2/(1+exp(-2*s*x)) - 1, range (-1, 1)
    Linear            // identity; unit tests only
};

struct ActivationKind {
    ActivationType type = ActivationType::SymmetricSigmoid;
    double steepness = 0.5;

    static ActivationKind symmetric_sigmoid(double steepness = 0.5);
    static ActivationKind linear();

    double apply(double x) const;

    /// Derivative expressed through the activation value y = f(x):
    /// s*(1 - y^2) for the symmetric sigmoid, 1 for linear.
    double derivative_from_value(double y) const;

    /// In-place elementwise application, vectorized.
    void apply_inplace(Eigen::MatrixXd& values) const;

    /// In-place elementwise f'(x) computed from values y = f(x).
    void derivative_from_value_inplace(Eigen::MatrixXd& values) const;

    bool operator==(const ActivationKind&) const = default;
};

std::string to_string(ActivationType type);
ActivationType activation_type_from_string(const std::string& name);

} // namespace stackfuse
