#pragma once

#include "stackfuse/dataset.hpp"

#include <filesystem>

namespace stackfuse {

/// Column layout of a CSV corpus. Non-label, non-person columns are the
/// features, in file order; there must be exactly feature_len of them.
struct CsvSchema {
    int feature_len = 0;
    int label_col = -1;   // column index of the class label
    int person_col = -1;  // column index of the subject id, -1 = none
    int num_classes = 0;  // 0 = infer as max label + 1
    bool has_header = false;
};

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// One sample per row: feature_len features at 17 significant digits, the
/// label, then the person id (-1 when absent). load_csv on the result with
/// the matching schema reproduces the dataset exactly.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Schema that reads write_csv output for a dataset of the given shape.
CsvSchema csv_schema_for(int feature_len, int num_classes = 0);

} // namespace stackfuse
