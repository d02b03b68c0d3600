#include "stackfuse/lopo.hpp"

#include "stackfuse/errors.hpp"
#include "stackfuse/rng.hpp"

#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace stackfuse {
namespace {

struct FoldOutcome {
    PersonResult result;
    Eigen::VectorXd recall_delta; // stage2 - stage1 per-class recall on D3
};

FoldOutcome run_fold(const Dataset& ds, const FusionConfig& config, int person) {
    const std::uint64_t fold_seed = mix_seed(config.seed, static_cast<std::uint64_t>(person));
    const SplitPlan plan = split_leave_one_person(ds, person, fold_seed);

    FusionConfig fold_config = config;
    fold_config.seed = fold_seed;
    const FusionModel model = train_two_stage(plan, ds, fold_config);

    std::vector<Sample> d3;
    d3.reserve(plan.d3.size());
    for (std::uint32_t idx : plan.d3) d3.push_back(ds.samples[idx]);

    const auto as_vector = [](const Sample& s) {
        return Eigen::Map<const Eigen::VectorXd>(s.features.data(),
                                                 static_cast<Eigen::Index>(s.features.size()));
    };
    const ConfusionMatrix cm1 = evaluate(
        [&](const Sample& s) { return predict_stage1(model, as_vector(s)).label; }, d3,
        ds.num_classes);
    const ConfusionMatrix cm2 = evaluate(
        [&](const Sample& s) { return predict_stage2(model, as_vector(s)).label; }, d3,
        ds.num_classes);

    FoldOutcome outcome;
    outcome.result.person = person;
    outcome.result.stage1_accuracy = cm1.accuracy();
    outcome.result.stage2_accuracy = cm2.accuracy();
    outcome.recall_delta = per_class_recall(cm2) - per_class_recall(cm1);
    return outcome;
}

} // namespace

ComparisonReport run_lopo(const Dataset& ds, const FusionConfig& config,
                          const LopoOptions& options) {
    const std::vector<int> persons = ds.persons();
    if (persons.size() < 2) {
        throw InsufficientDataError("run_lopo: dataset must contain at least 2 persons, has " +
                                    std::to_string(persons.size()));
    }

    int workers = options.workers;
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers < 1) workers = 1;
    }
    workers = std::min<int>(workers, static_cast<int>(persons.size()));

    std::vector<FoldOutcome> outcomes(persons.size());
    std::exception_ptr failure;
    std::mutex shared_mutex; // guards failure and the progress hook
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= persons.size()) return;
            try {
                outcomes[i] = run_fold(ds, config, persons[i]);
                if (options.on_fold_done) {
                    std::lock_guard<std::mutex> lock(shared_mutex);
                    options.on_fold_done(outcomes[i].result);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(shared_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    ComparisonReport report;
    report.per_person.reserve(persons.size());
    report.per_class_delta = Eigen::VectorXd::Zero(ds.num_classes);
    for (const FoldOutcome& o : outcomes) {
        report.per_person.push_back(o.result);
        report.per_class_delta += o.recall_delta;
        report.overall_delta += o.result.stage2_accuracy - o.result.stage1_accuracy;
    }
    report.per_class_delta /= static_cast<double>(persons.size());
    report.overall_delta /= static_cast<double>(persons.size());
    return report;
}

} // namespace stackfuse
