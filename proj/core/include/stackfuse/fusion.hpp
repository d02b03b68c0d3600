#pragma once

#include "stackfuse/dataset.hpp"
#include "stackfuse/split.hpp"
#include "stackfuse/train.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace stackfuse {

/// Hyperparameters of the two-stage classifier. Stage seeds derive from the
/// root seed as (seed, seed+1).
struct FusionConfig {
    int hidden1 = 40;
    int hidden2 = 40;
    double steepness = 0.5;
    RpropConfig rprop;
    std::uint64_t seed = 0;

    /// 40/40 hidden units.
    static FusionConfig wide_preset();
    /// 25/20 hidden units.
    static FusionConfig narrow_preset();
};

/// Stage 1 classifies the raw descriptor; stage 2 classifies the descriptor
/// with stage 1's class scores appended.
struct FusionModel {
    TrainedModel net1;
    TrainedModel net2;
    int descriptor_len = 0;
    int num_classes = 0;
};

/// [features || net1 outputs]: the first n components are the descriptor,
/// copied bitwise; the last C are net1's activations on it.
Eigen::VectorXd augment(const Mlp& net1, const Eigen::VectorXd& features);
Eigen::VectorXd augment(const Mlp& net1, const Sample& sample);

/// Row-per-sample batched version of augment().
Eigen::MatrixXd augment_batch(const Mlp& net1, const Eigen::MatrixXd& features);

/// Trains net 1 on D1.train (D1.test as monitor), augments D2 through the
/// selected net 1 checkpoint, then trains net 2 on the augmented D2.train
/// (augmented D2.test as monitor). D3 is never read.
FusionModel train_two_stage(const SplitPlan& plan, const Dataset& ds,
                            const FusionConfig& config);

struct Prediction {
    int label = 0;
    Eigen::VectorXd scores;
};

Prediction predict_stage1(const FusionModel& model, const Eigen::VectorXd& features);
Prediction predict_stage2(const FusionModel& model, const Eigen::VectorXd& features);

/// Argmax with ties broken toward the lowest class index.
int argmax_class(const Eigen::VectorXd& scores);

} // namespace stackfuse
