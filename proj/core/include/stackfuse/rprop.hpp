#pragma once

#include "stackfuse/gradient.hpp"
#include "stackfuse/mlp.hpp"

#include <cstdint>

namespace stackfuse {

/// iRPROP- hyperparameters. Defaults follow the common library defaults for
/// resilient propagation; all are overridable through configs.
struct RpropConfig {
    double eta_plus = 1.2;
    double eta_minus = 0.5;
    double delta_init = 0.1;
    double delta_min = 1e-6;
    double delta_max = 50.0;
    int max_epochs = 300;
    std::uint64_t seed = 0;

    /// Throws InvalidArgumentError on out-of-range values.
    void validate() const;
};

/// Per-weight step sizes and previous-gradient sign memory.
struct RpropState {
    GradientSet steps;      // current step size per parameter
    GradientSet prev_grad;  // gradient of the previous epoch (0 after a sign flip)

    static RpropState init(const Mlp& net, double delta_init);
};

/// One iRPROP- update. Returns the weight deltas to add to the parameters:
///   sign(g * g_prev) > 0: step <- min(step*eta_plus, delta_max), move -sign(g)*step
///   sign(g * g_prev) < 0: step <- max(step*eta_minus, delta_min), no move,
///                         stored gradient zeroed
///   otherwise:            step unchanged, move -sign(g)*step
GradientSet rprop_step(RpropState& state, const GradientSet& grad, const RpropConfig& config);

} // namespace stackfuse
