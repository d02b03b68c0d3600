#include "stackfuse/dataset.hpp"

#include "stackfuse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stackfuse {

void Dataset::validate() const {
    if (num_classes < 1) throw InvalidArgumentError("dataset: num_classes must be >= 1");
    if (feature_len < 1) throw InvalidArgumentError("dataset: feature_len must be >= 1");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Sample& s = samples[i];
        if (static_cast<int>(s.features.size()) != feature_len) {
            throw DimensionError("dataset: sample " + std::to_string(i) + " has " +
                                 std::to_string(s.features.size()) + " features, expected " +
                                 std::to_string(feature_len));
        }
        if (s.label < 0 || s.label >= num_classes) {
            throw InvalidArgumentError("dataset: sample " + std::to_string(i) + " label " +
                                       std::to_string(s.label) + " outside [0, " +
                                       std::to_string(num_classes) + ")");
        }
        for (double f : s.features) {
            if (!std::isfinite(f)) {
                throw InvalidArgumentError("dataset: sample " + std::to_string(i) +
                                           " has a non-finite feature");
            }
        }
    }
}

std::vector<int> Dataset::persons() const {
    std::vector<int> ids;
    for (const Sample& s : samples) {
        if (s.person != kNoPerson) ids.push_back(s.person);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

Eigen::VectorXd encode_targets(int label, int num_classes) {
    if (num_classes < 1) throw InvalidArgumentError("encode_targets: num_classes must be >= 1");
    if (label < 0 || label >= num_classes) {
        throw InvalidArgumentError("encode_targets: label " + std::to_string(label) +
                                   " outside [0, " + std::to_string(num_classes) + ")");
    }
    Eigen::VectorXd t = Eigen::VectorXd::Constant(num_classes, -1.0);
    t(label) = 1.0;
    return t;
}

TrainingSet make_training_set(const Dataset& ds, std::span<const std::uint32_t> indices) {
    TrainingSet set;
    set.inputs.resize(static_cast<Eigen::Index>(indices.size()), ds.feature_len);
    set.targets = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(indices.size()),
                                            ds.num_classes, -1.0);
    for (std::size_t row = 0; row < indices.size(); ++row) {
        const std::uint32_t idx = indices[row];
        if (idx >= ds.samples.size()) {
            throw DimensionError("make_training_set: index " + std::to_string(idx) +
                                 " outside dataset of size " + std::to_string(ds.samples.size()));
        }
        const Sample& s = ds.samples[idx];
        set.inputs.row(static_cast<Eigen::Index>(row)) =
            Eigen::Map<const Eigen::RowVectorXd>(s.features.data(),
                                                 static_cast<Eigen::Index>(s.features.size()));
        set.targets(static_cast<Eigen::Index>(row), s.label) = 1.0;
    }
    return set;
}

} // namespace stackfuse
