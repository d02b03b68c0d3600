#include "stackfuse/errors.hpp"
#include "stackfuse/eval.hpp"
#include "stackfuse/fusion.hpp"
#include "stackfuse/rng.hpp"
#include "stackfuse/synth.hpp"

#include <doctest.h>

using namespace stackfuse;

namespace {

const ActivationKind kSigmoid = ActivationKind::symmetric_sigmoid(0.5);

// Three well-separated 2-D blob classes without person structure.
Dataset blob_corpus(int per_class, std::uint64_t seed) {
    Dataset ds;
    ds.num_classes = 3;
    ds.feature_len = 2;
    const double centers[3][2] = {{0.0, 0.0}, {8.0, 0.0}, {0.0, 8.0}};
    Rng rng(seed);
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < per_class; ++i) {
            ds.samples.push_back(
                {{centers[c][0] + rng.gaussian(), centers[c][1] + rng.gaussian()}, c, kNoPerson});
        }
    }
    return ds;
}

Eigen::VectorXd as_vector(const Sample& s) {
    return Eigen::Map<const Eigen::VectorXd>(s.features.data(),
                                             static_cast<Eigen::Index>(s.features.size()));
}

double stage_accuracy(const FusionModel& model, const Dataset& ds,
                      const std::vector<std::uint32_t>& indices, int stage) {
    std::vector<Sample> samples;
    samples.reserve(indices.size());
    for (auto i : indices) samples.push_back(ds.samples[i]);
    const auto cm = evaluate(
        [&](const Sample& s) {
            return stage == 1 ? predict_stage1(model, as_vector(s)).label
                              : predict_stage2(model, as_vector(s)).label;
        },
        samples, ds.num_classes);
    return cm.accuracy();
}

} // namespace

TEST_CASE("config presets carry the documented hidden sizes") {
    const FusionConfig wide = FusionConfig::wide_preset();
    CHECK(wide.hidden1 == 40);
    CHECK(wide.hidden2 == 40);
    const FusionConfig narrow = FusionConfig::narrow_preset();
    CHECK(narrow.hidden1 == 25);
    CHECK(narrow.hidden2 == 20);
    CHECK(narrow.steepness == 0.5);
    CHECK(narrow.rprop.max_epochs == 300);
}

TEST_CASE("augment appends exactly the stage-1 scores") {
    const Mlp net = init_weights(5, 4, 10, kSigmoid, kSigmoid, 55);
    Eigen::VectorXd x(5);
    x << 0.1, -0.4, 2.0, 0.0, -1.0;

    const Eigen::VectorXd aug = augment(net, x);
    REQUIRE(aug.size() == 15);
    // Descriptor first, bitwise.
    for (int i = 0; i < 5; ++i) CHECK(aug(i) == x(i));
    // Scores equal forward() exactly and stay inside (-1, 1).
    const Eigen::VectorXd scores = forward(net, x);
    for (int i = 0; i < 10; ++i) {
        CHECK(aug(5 + i) == scores(i));
        CHECK(aug(5 + i) > -1.0);
        CHECK(aug(5 + i) < 1.0);
    }
}

TEST_CASE("augment through an all-zero net appends zeros") {
    Mlp net;
    net.hidden_activation = kSigmoid;
    net.output_activation = kSigmoid;
    net.weights_ih = Eigen::MatrixXd::Zero(3, 2);
    net.weights_ho = Eigen::MatrixXd::Zero(4, 3);
    net.bias_h = Eigen::VectorXd::Zero(3);
    net.bias_o = Eigen::VectorXd::Zero(4);

    Sample s{{0.7, -0.2}, 0, kNoPerson};
    const Eigen::VectorXd aug = augment(net, s);
    REQUIRE(aug.size() == 6);
    CHECK(aug(0) == 0.7);
    CHECK(aug(1) == -0.2);
    for (int i = 2; i < 6; ++i) CHECK(aug(i) == 0.0);
}

TEST_CASE("augment rejects feature length mismatches") {
    const Mlp net = init_weights(3, 2, 2, kSigmoid, kSigmoid, 1);
    Eigen::VectorXd bad(5);
    bad.setZero();
    CHECK_THROWS_AS((void)augment(net, bad), DimensionError);
}

TEST_CASE("argmax breaks ties toward the lowest class") {
    Eigen::VectorXd scores(4);
    scores << -1.0, 0.9, -1.0, 0.9;
    CHECK(argmax_class(scores) == 1);
    scores.setConstant(0.25);
    CHECK(argmax_class(scores) == 0);
    scores << 0.1, 0.2, 0.3, 0.4;
    CHECK(argmax_class(scores) == 3);
}

TEST_CASE("two-stage training produces a structurally sound model") {
    const Dataset ds = blob_corpus(100, 8);
    const SplitPlan plan = split_fractions(ds, 0.4, 0.4, 0.2, 3);

    FusionConfig cfg;
    cfg.hidden1 = 6;
    cfg.hidden2 = 5;
    cfg.rprop.max_epochs = 40;
    cfg.seed = 12;
    const FusionModel model = train_two_stage(plan, ds, cfg);

    CHECK(model.descriptor_len == 2);
    CHECK(model.num_classes == 3);
    CHECK(model.net1.net.input_size() == 2);
    CHECK(model.net1.net.output_size() == 3);
    CHECK(model.net2.net.input_size() == 5); // n + C
    CHECK(model.net2.net.output_size() == 3);
    CHECK(model.net1.net.hidden_size() == 6);
    CHECK(model.net2.net.hidden_size() == 5);
    CHECK(std::isfinite(model.net2.best_monitor_mse));

    // Blobs this separable should be classified perfectly by both stages.
    CHECK(stage_accuracy(model, ds, plan.d3, 1) == 1.0);
    CHECK(stage_accuracy(model, ds, plan.d3, 2) == 1.0);
}

TEST_CASE("two-stage training is deterministic") {
    const Dataset ds = blob_corpus(60, 9);
    const SplitPlan plan = split_fractions(ds, 0.4, 0.4, 0.2, 4);
    FusionConfig cfg;
    cfg.hidden1 = 4;
    cfg.hidden2 = 4;
    cfg.rprop.max_epochs = 25;
    cfg.seed = 5;

    const FusionModel a = train_two_stage(plan, ds, cfg);
    const FusionModel b = train_two_stage(plan, ds, cfg);
    CHECK(a.net1.net.weights_ih == b.net1.net.weights_ih);
    CHECK(a.net1.net.weights_ho == b.net1.net.weights_ho);
    CHECK(a.net2.net.weights_ih == b.net2.net.weights_ih);
    CHECK(a.net2.net.weights_ho == b.net2.net.weights_ho);
    CHECK(a.net1.best_epoch == b.net1.best_epoch);
    CHECK(a.net2.best_epoch == b.net2.best_epoch);
}

TEST_CASE("D3 samples are never read during training") {
    Dataset ds = blob_corpus(60, 10);
    const SplitPlan plan = split_fractions(ds, 0.4, 0.4, 0.2, 6);
    FusionConfig cfg;
    cfg.hidden1 = 4;
    cfg.hidden2 = 4;
    cfg.rprop.max_epochs = 20;
    cfg.seed = 2;

    const FusionModel reference = train_two_stage(plan, ds, cfg);

    // Poison every D3 sample; the trained model must not change.
    for (std::uint32_t idx : plan.d3) {
        ds.samples[idx].features = {1e9, -1e9};
        ds.samples[idx].label = 0;
    }
    const FusionModel poisoned = train_two_stage(plan, ds, cfg);
    CHECK(reference.net1.net.weights_ih == poisoned.net1.net.weights_ih);
    CHECK(reference.net2.net.weights_ih == poisoned.net2.net.weights_ih);
    CHECK(reference.net2.net.bias_o == poisoned.net2.net.bias_o);
}

TEST_CASE("predict_stage2 equals forward over the augmented vector exactly") {
    const Dataset ds = blob_corpus(50, 11);
    const SplitPlan plan = split_fractions(ds, 0.4, 0.4, 0.2, 7);
    FusionConfig cfg;
    cfg.hidden1 = 4;
    cfg.hidden2 = 4;
    cfg.rprop.max_epochs = 15;
    cfg.seed = 3;
    const FusionModel model = train_two_stage(plan, ds, cfg);

    Rng rng(19);
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd x(2);
        x << rng.uniform(-2.0, 10.0), rng.uniform(-2.0, 10.0);
        const Prediction p2 = predict_stage2(model, x);
        const Eigen::VectorXd expected = forward(model.net2.net, augment(model.net1.net, x));
        CHECK(p2.scores == expected);
        CHECK(p2.label == argmax_class(expected));

        const Prediction p1 = predict_stage1(model, x);
        CHECK(p1.scores == forward(model.net1.net, x));
    }
}

TEST_CASE("prediction rejects wrong feature lengths") {
    FusionModel model;
    model.descriptor_len = 2;
    model.num_classes = 3;
    model.net1.net = init_weights(2, 3, 3, kSigmoid, kSigmoid, 0);
    model.net2.net = init_weights(5, 3, 3, kSigmoid, kSigmoid, 1);
    Eigen::VectorXd bad(4);
    bad.setZero();
    CHECK_THROWS_AS((void)predict_stage1(model, bad), DimensionError);
    CHECK_THROWS_AS((void)predict_stage2(model, bad), DimensionError);
}

TEST_CASE("stage 2 keeps up with stage 1 on held-out persons across seeds") {
    // One leave-one-person fold of the confusable corpus per seed; stage 2
    // must be within half a point of stage 1 in at least 4 of 5 runs.
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Dataset ds = generate(hard_preset(seed * 31 + 7));
        const int person = static_cast<int>(seed % 15);
        const SplitPlan plan = split_leave_one_person(ds, person, seed);
        FusionConfig cfg;
        cfg.rprop.max_epochs = 150;
        cfg.seed = seed;
        const FusionModel model = train_two_stage(plan, ds, cfg);
        const double acc1 = stage_accuracy(model, ds, plan.d3, 1);
        const double acc2 = stage_accuracy(model, ds, plan.d3, 2);
        if (acc2 >= acc1 - 0.005) ++ok;
    }
    CHECK(ok >= 4);
}
