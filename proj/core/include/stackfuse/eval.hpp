#pragma once

#include "stackfuse/dataset.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>
#include <vector>

namespace stackfuse {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int num_classes);

    void add(int true_label, int predicted_label);

    long long at(int true_label, int predicted_label) const;
    int num_classes() const { return num_classes_; }
    long long total() const;
    long long correct() const; // trace
    double accuracy() const;   // trace / total

private:
    int num_classes_;
    std::vector<long long> counts_; // row-major C x C
};

using Classifier = std::function<int(const Sample&)>;

/// Applies the classifier to every sample and tallies counts[true][predicted].
ConfusionMatrix evaluate(const Classifier& classify, std::span<const Sample> samples,
                         int num_classes);

/// As above with num_classes inferred from the largest true label.
ConfusionMatrix evaluate(const Classifier& classify, std::span<const Sample> samples);

/// recall_c = counts[c][c] / row_sum(c); throws naming the class on an
/// empty row.
Eigen::VectorXd per_class_recall(const ConfusionMatrix& cm);

} // namespace stackfuse
