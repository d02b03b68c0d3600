#pragma once

#include "stackfuse/fusion.hpp"
#include "stackfuse/mlp.hpp"

#include <filesystem>

namespace stackfuse {

/// Text format, one file per net:
///   stackfuse-mlp v1
///   sizes <in> <hidden> <out>
///   activation <kind> <steepness>
///   weights_ih / bias_h / weights_ho / bias_o blocks, row-major,
///   17 significant digits (round-trip exact).
/// The activation line applies to both layers; nets with differing hidden
/// and output activations are not representable in v1.
void save_mlp(const Mlp& net, const std::filesystem::path& path);
Mlp load_mlp(const std::filesystem::path& path);

/// A fusion model is a directory: net1.mlp, net2.mlp and fusion.manifest
/// (descriptor length, classes, hidden sizes, seeds, split plan reference).
void save_fusion_model(const FusionModel& model, const std::filesystem::path& dir,
                       const std::string& split_plan_ref = "");
FusionModel load_fusion_model(const std::filesystem::path& dir);

} // namespace stackfuse
