#pragma once

#include "stackfuse/dataset.hpp"

#include <filesystem>

namespace stackfuse {

/// Loads an MNIST-style IDX image/label pair. Pixels are scaled to [0, 1]
/// by dividing by 255; samples carry no person ids; num_classes is 10.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

/// Writes a dataset (features in [0, 1], labels < 10) as an IDX pair with
/// the given image geometry; feature_len must equal rows*cols. Exists so
/// IDX-driven pipelines can be exercised without external corpora.
void write_idx(const Dataset& ds, int rows, int cols,
               const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path);

} // namespace stackfuse
