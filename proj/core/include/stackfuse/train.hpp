#pragma once

#include "stackfuse/mlp.hpp"
#include "stackfuse/rprop.hpp"

#include <vector>

namespace stackfuse {

struct EpochStats {
    int epoch;
    double train_mse;
    double monitor_mse;
};

/// Result of a training run: the checkpoint whose monitor MSE was minimal
/// (earliest epoch on ties) plus the full per-epoch history.
struct TrainedModel {
    Mlp net;
    int best_epoch = 0;
    double best_monitor_mse = 0.0;
    std::vector<EpochStats> history;
};

/// Full-batch iRPROP- for config.max_epochs epochs. After every epoch the
/// train and monitor MSE are recorded; the returned net is the checkpoint
/// with the lowest monitor MSE. With max_epochs == 0 the initial net is
/// returned with its monitor MSE and an empty history. Deterministic in all
/// inputs; no randomness is consumed here.
TrainedModel train(Mlp net, const TrainingSet& train_set, const TrainingSet& monitor_set,
                   const RpropConfig& config);

} // namespace stackfuse
