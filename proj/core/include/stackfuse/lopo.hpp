#pragma once

#include "stackfuse/eval.hpp"
#include "stackfuse/fusion.hpp"

#include <functional>
#include <vector>

namespace stackfuse {

struct PersonResult {
    int person = 0;
    double stage1_accuracy = 0.0;
    double stage2_accuracy = 0.0;
};

/// Stage-1 vs stage-2 comparison over a leave-one-person-out sweep.
struct ComparisonReport {
    std::vector<PersonResult> per_person; // ordered by person id
    Eigen::VectorXd per_class_delta;      // stage2 - stage1 recall, mean over persons
    double overall_delta = 0.0;           // mean over persons of accuracy difference
};

struct LopoOptions {
    int workers = 0; // 0 = hardware concurrency, capped at the number of persons
    std::function<void(const PersonResult&)> on_fold_done; // optional progress hook
};

/// For every person: hold them out, train the two-stage model on the rest
/// (fold seed = mix_seed(config.seed, person)), evaluate both stages on the
/// held-out samples. Folds are independent and may run on a worker pool;
/// the report is assembled in person order regardless of completion order.
ComparisonReport run_lopo(const Dataset& ds, const FusionConfig& config,
                          const LopoOptions& options = {});

} // namespace stackfuse
