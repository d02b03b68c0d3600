#include "stackfuse/stackfuse.hpp"

#include <benchmark/benchmark.h>

using namespace stackfuse;

namespace {

const ActivationKind kSigmoid = ActivationKind::symmetric_sigmoid(0.5);

TrainingSet random_set(Eigen::Index n, Eigen::Index in, Eigen::Index out, std::uint64_t seed) {
    Rng rng(seed);
    TrainingSet set;
    set.inputs.resize(n, in);
    set.targets.resize(n, out);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < in; ++c) set.inputs(r, c) = rng.uniform(-1.0, 1.0);
        for (Eigen::Index c = 0; c < out; ++c) set.targets(r, c) = rng.uniform(-1.0, 1.0);
    }
    return set;
}

void BM_ForwardSingle(benchmark::State& state) {
    const auto in = state.range(0);
    const Mlp net = init_weights(in, 40, 10, kSigmoid, kSigmoid, 1);
    Rng rng(2);
    Eigen::VectorXd x(in);
    for (Eigen::Index i = 0; i < in; ++i) x(i) = rng.uniform(-1.0, 1.0);
    for (auto _ : state) {
        Eigen::VectorXd out = forward(net, x);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_ForwardSingle)->Arg(32)->Arg(784);

void BM_ForwardBatch(benchmark::State& state) {
    const auto n = state.range(0);
    const Mlp net = init_weights(784, 40, 10, kSigmoid, kSigmoid, 1);
    const TrainingSet set = random_set(n, 784, 10, 3);
    for (auto _ : state) {
        Eigen::MatrixXd out = forward_batch(net, set.inputs);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ForwardBatch)->Arg(1000)->Arg(25200);

void BM_GradientBatch(benchmark::State& state) {
    const auto n = state.range(0);
    const Mlp net = init_weights(784, 40, 10, kSigmoid, kSigmoid, 1);
    const TrainingSet set = random_set(n, 784, 10, 4);
    for (auto _ : state) {
        GradientSet g = gradient(net, set);
        benchmark::DoNotOptimize(g.w_ih.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GradientBatch)->Arg(1000)->Arg(25200);

void BM_RpropStep(benchmark::State& state) {
    const Mlp net = init_weights(784, 40, 10, kSigmoid, kSigmoid, 1);
    RpropState rprop = RpropState::init(net, 0.1);
    const TrainingSet set = random_set(64, 784, 10, 5);
    const GradientSet grad = gradient(net, set);
    const RpropConfig cfg;
    for (auto _ : state) {
        GradientSet delta = rprop_step(rprop, grad, cfg);
        benchmark::DoNotOptimize(delta.w_ih.data());
    }
}
BENCHMARK(BM_RpropStep);

void BM_TrainEpoch(benchmark::State& state) {
    // One full-batch epoch at the synthetic-corpus geometry.
    const TrainingSet train_set = random_set(12600, 32, 10, 6);
    const TrainingSet monitor = random_set(1400, 32, 10, 7);
    RpropConfig cfg;
    cfg.max_epochs = 1;
    const Mlp net = init_weights(32, 40, 10, kSigmoid, kSigmoid, 8);
    for (auto _ : state) {
        TrainedModel tm = train(net, train_set, monitor, cfg);
        benchmark::DoNotOptimize(tm.net.weights_ih.data());
    }
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_Augment(benchmark::State& state) {
    const Mlp net = init_weights(32, 40, 10, kSigmoid, kSigmoid, 9);
    Rng rng(10);
    Eigen::VectorXd x(32);
    for (int i = 0; i < 32; ++i) x(i) = rng.uniform(-4.0, 4.0);
    for (auto _ : state) {
        Eigen::VectorXd aug = augment(net, x);
        benchmark::DoNotOptimize(aug.data());
    }
}
BENCHMARK(BM_Augment);

void BM_SynthGenerate(benchmark::State& state) {
    const SynthSpec spec = hard_preset(1);
    for (auto _ : state) {
        Dataset ds = generate(spec);
        benchmark::DoNotOptimize(ds.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * 30000);
}
BENCHMARK(BM_SynthGenerate)->Unit(benchmark::kMillisecond);

void BM_SplitLeaveOnePerson(benchmark::State& state) {
    const Dataset ds = generate(hard_preset(2));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        SplitPlan plan = split_leave_one_person(ds, 3, ++seed);
        benchmark::DoNotOptimize(plan.d1_train.data());
    }
}
BENCHMARK(BM_SplitLeaveOnePerson)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
