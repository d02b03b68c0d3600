#pragma once

#include "stackfuse/mlp.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stackfuse {

/// Marker for samples/corpora without subject information.
inline constexpr int kNoPerson = -1;

/// One labelled feature vector, optionally tagged with the subject it came
/// from.
struct Sample {
    std::vector<double> features;
    int label = 0;
    int person = kNoPerson;
};

struct Dataset {
    std::vector<Sample> samples;
    int num_classes = 0;
    int feature_len = 0;
    std::string name;

    std::size_t size() const { return samples.size(); }

    /// Checks every sample: feature length, finite values, label range.
    void validate() const;

    /// Sorted distinct person ids (excluding kNoPerson).
    std::vector<int> persons() const;
};

/// One-against-all coding: +1 at the label, -1 elsewhere, matching the
/// symmetric sigmoid's output range.
Eigen::VectorXd encode_targets(int label, int num_classes);

/// Dense (inputs, targets) batch for the given sample indices.
TrainingSet make_training_set(const Dataset& ds, std::span<const std::uint32_t> indices);

} // namespace stackfuse
