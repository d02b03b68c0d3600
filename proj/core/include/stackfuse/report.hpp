#pragma once

#include "stackfuse/eval.hpp"
#include "stackfuse/lopo.hpp"

#include <string>

namespace stackfuse {

enum class ReportFormat { TextTable, Csv };

/// Text layout: persons as columns, stage-1 accuracies above stage-2, then
/// the signed per-class delta row in percentage points and the overall
/// delta. Rates use 3 decimals, deltas one decimal. The CSV form is two
/// tables with fixed headers `person,stage1_acc,stage2_acc` and
/// `class,delta_pp` at full precision.
std::string render_report(const ComparisonReport& report, ReportFormat format);

/// Inverse of the CSV rendering; overall_delta is recomputed from the
/// per-person rows.
ComparisonReport parse_report_csv(const std::string& csv);

std::string render_confusion(const ConfusionMatrix& cm);

} // namespace stackfuse
