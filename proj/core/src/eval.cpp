#include "stackfuse/eval.hpp"

#include "stackfuse/errors.hpp"

#include <algorithm>
#include <string>

namespace stackfuse {

ConfusionMatrix::ConfusionMatrix(int num_classes) : num_classes_(num_classes) {
    if (num_classes < 1) {
        throw InvalidArgumentError("confusion matrix: num_classes must be >= 1");
    }
    counts_.assign(static_cast<std::size_t>(num_classes) * num_classes, 0);
}

void ConfusionMatrix::add(int true_label, int predicted_label) {
    if (true_label < 0 || true_label >= num_classes_ || predicted_label < 0 ||
        predicted_label >= num_classes_) {
        throw InvalidArgumentError("confusion matrix: label outside [0, " +
                                   std::to_string(num_classes_) + ")");
    }
    ++counts_[static_cast<std::size_t>(true_label) * num_classes_ + predicted_label];
}

long long ConfusionMatrix::at(int true_label, int predicted_label) const {
    return counts_[static_cast<std::size_t>(true_label) * num_classes_ + predicted_label];
}

long long ConfusionMatrix::total() const {
    long long sum = 0;
    for (long long c : counts_) sum += c;
    return sum;
}

long long ConfusionMatrix::correct() const {
    long long sum = 0;
    for (int c = 0; c < num_classes_; ++c) sum += at(c, c);
    return sum;
}

double ConfusionMatrix::accuracy() const {
    const long long n = total();
    if (n == 0) throw EmptySetError("confusion matrix: no samples tallied");
    return static_cast<double>(correct()) / static_cast<double>(n);
}

ConfusionMatrix evaluate(const Classifier& classify, std::span<const Sample> samples,
                         int num_classes) {
    if (samples.empty()) throw EmptySetError("evaluate: sample set is empty");
    ConfusionMatrix cm(num_classes);
    for (const Sample& s : samples) cm.add(s.label, classify(s));
    return cm;
}

ConfusionMatrix evaluate(const Classifier& classify, std::span<const Sample> samples) {
    if (samples.empty()) throw EmptySetError("evaluate: sample set is empty");
    int max_label = 0;
    for (const Sample& s : samples) max_label = std::max(max_label, s.label);
    return evaluate(classify, samples, max_label + 1);
}

Eigen::VectorXd per_class_recall(const ConfusionMatrix& cm) {
    Eigen::VectorXd recall(cm.num_classes());
    for (int c = 0; c < cm.num_classes(); ++c) {
        long long row = 0;
        for (int p = 0; p < cm.num_classes(); ++p) row += cm.at(c, p);
        if (row == 0) {
            throw DataError("per_class_recall: class " + std::to_string(c) +
                            " has no evaluated samples");
        }
        recall(c) = static_cast<double>(cm.at(c, c)) / static_cast<double>(row);
    }
    return recall;
}

} // namespace stackfuse
