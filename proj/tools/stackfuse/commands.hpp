#pragma once

#include "config.hpp"

#include <filesystem>

namespace stackfuse::cli {

struct CommandContext {
    ExperimentConfig config;
    std::filesystem::path out_dir;
    bool quiet = false;
};

int cmd_synth(const CommandContext& ctx);
int cmd_split(const CommandContext& ctx);
int cmd_train(const CommandContext& ctx);
int cmd_eval(const CommandContext& ctx, const std::filesystem::path& model_dir, bool full);
int cmd_lopo(const CommandContext& ctx);
int cmd_mnist(const CommandContext& ctx);

} // namespace stackfuse::cli
