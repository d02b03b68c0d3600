#include "stackfuse/fusion.hpp"

#include "stackfuse/errors.hpp"

#include <string>
#include <utility>

namespace stackfuse {
namespace {

void check_plan(const SplitPlan& plan, const Dataset& ds) {
    if (plan.d1_train.empty() || plan.d1_test.empty() || plan.d2_train.empty() ||
        plan.d2_test.empty() || plan.d3.empty()) {
        throw EmptySetError("train_two_stage: all five split sets must be nonempty");
    }
    if (plan.total() != ds.size()) {
        throw DimensionError("train_two_stage: split plan covers " +
                             std::to_string(plan.total()) + " samples, dataset has " +
                             std::to_string(ds.size()));
    }
}

} // namespace

FusionConfig FusionConfig::wide_preset() {
    return FusionConfig{};
}

FusionConfig FusionConfig::narrow_preset() {
    FusionConfig cfg;
    cfg.hidden1 = 25;
    cfg.hidden2 = 20;
    return cfg;
}

Eigen::VectorXd augment(const Mlp& net1, const Eigen::VectorXd& features) {
    if (features.size() != net1.input_size()) {
        throw DimensionError("augment: feature length " + std::to_string(features.size()) +
                             " does not match net 1 input size " +
                             std::to_string(net1.input_size()));
    }
    Eigen::VectorXd out(features.size() + net1.output_size());
    out.head(features.size()) = features;
    out.tail(net1.output_size()) = forward(net1, features);
    return out;
}

Eigen::VectorXd augment(const Mlp& net1, const Sample& sample) {
    return augment(net1, Eigen::Map<const Eigen::VectorXd>(
                             sample.features.data(),
                             static_cast<Eigen::Index>(sample.features.size())));
}

Eigen::MatrixXd augment_batch(const Mlp& net1, const Eigen::MatrixXd& features) {
    Eigen::MatrixXd out(features.rows(), features.cols() + net1.output_size());
    out.leftCols(features.cols()) = features;
    out.rightCols(net1.output_size()) = forward_batch(net1, features);
    return out;
}

FusionModel train_two_stage(const SplitPlan& plan, const Dataset& ds,
                            const FusionConfig& config) {
    check_plan(plan, ds);
    if (config.hidden1 < 1 || config.hidden2 < 1) {
        throw InvalidArgumentError("train_two_stage: hidden sizes must be >= 1");
    }
    const auto act = ActivationKind::symmetric_sigmoid(config.steepness);

    FusionModel model;
    model.descriptor_len = ds.feature_len;
    model.num_classes = ds.num_classes;

    // Stage 1 on D1.
    {
        RpropConfig rprop = config.rprop;
        rprop.seed = config.seed;
        Mlp net = init_weights(ds.feature_len, config.hidden1, ds.num_classes, act, act,
                               config.seed);
        const TrainingSet train_set = make_training_set(ds, plan.d1_train);
        const TrainingSet monitor_set = make_training_set(ds, plan.d1_test);
        model.net1 = train(std::move(net), train_set, monitor_set, rprop);
    }

    // Stage 2 on D2, inputs extended with the selected net 1's scores.
    {
        RpropConfig rprop = config.rprop;
        rprop.seed = config.seed + 1;
        Mlp net = init_weights(ds.feature_len + ds.num_classes, config.hidden2, ds.num_classes,
                               act, act, config.seed + 1);
        TrainingSet train_set = make_training_set(ds, plan.d2_train);
        train_set.inputs = augment_batch(model.net1.net, train_set.inputs);
        TrainingSet monitor_set = make_training_set(ds, plan.d2_test);
        monitor_set.inputs = augment_batch(model.net1.net, monitor_set.inputs);
        model.net2 = train(std::move(net), train_set, monitor_set, rprop);
    }
    return model;
}

int argmax_class(const Eigen::VectorXd& scores) {
    if (scores.size() == 0) throw EmptySetError("argmax_class: empty score vector");
    int best = 0;
    for (int i = 1; i < scores.size(); ++i) {
        if (scores(i) > scores(best)) best = i;
    }
    return best;
}

Prediction predict_stage1(const FusionModel& model, const Eigen::VectorXd& features) {
    Prediction p;
    p.scores = forward(model.net1.net, features);
    p.label = argmax_class(p.scores);
    return p;
}

Prediction predict_stage2(const FusionModel& model, const Eigen::VectorXd& features) {
    Prediction p;
    p.scores = forward(model.net2.net, augment(model.net1.net, features));
    p.label = argmax_class(p.scores);
    return p;
}

} // namespace stackfuse
