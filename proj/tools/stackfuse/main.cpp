#include "commands.hpp"
#include "config.hpp"

#include "stackfuse/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::string seed;
    bool quiet = false;
};

stackfuse::cli::CommandContext make_context(const GlobalArgs& args, bool needs_out) {
    stackfuse::cli::CommandContext ctx;
    ctx.config = stackfuse::cli::ExperimentConfig::from_file(args.config_path);
    if (!args.seed.empty()) ctx.config.set("seed", args.seed);
    ctx.quiet = args.quiet;

    std::string out = args.out_dir;
    if (out.empty()) out = ctx.config.get_string_or("out", "");
    if (out.empty() && needs_out) {
        throw stackfuse::cli::ConfigError(
            "no output directory: pass --out or set 'out' in the config");
    }
    ctx.out_dir = out;
    return ctx;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stackfuse: two-stage score-fusion MLP classifier"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalArgs args;
    app.add_option("--config", args.config_path, "experiment config file (key = value)")
        ->required();
    app.add_option("--out", args.out_dir, "output directory (overrides 'out' in the config)");
    app.add_option("--seed", args.seed, "root seed (overrides 'seed' in the config)");
    app.add_flag("--quiet", args.quiet, "suppress progress output");

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus and write it as CSV");
    auto* split = app.add_subcommand("split", "compute and store a D1/D2/D3 split plan");
    auto* train = app.add_subcommand("train", "train the two-stage model on the configured split");
    auto* eval = app.add_subcommand("eval", "evaluate a trained model directory on a dataset");
    auto* lopo = app.add_subcommand("lopo", "leave-one-person-out sweep with stage comparison");
    auto* mnist = app.add_subcommand("mnist", "repeated fraction-split runs on an IDX corpus");

    std::string model_dir;
    bool eval_full = false;
    eval->add_option("--model", model_dir, "trained model directory")->required();
    eval->add_flag("--full", eval_full, "evaluate the whole dataset even if a split plan exists");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        using namespace stackfuse::cli;
        if (synth->parsed()) {
            auto ctx = make_context(args, true);
            return cmd_synth(ctx);
        }
        if (split->parsed()) {
            auto ctx = make_context(args, true);
            return cmd_split(ctx);
        }
        if (train->parsed()) {
            auto ctx = make_context(args, true);
            return cmd_train(ctx);
        }
        if (eval->parsed()) {
            auto ctx = make_context(args, false);
            return cmd_eval(ctx, model_dir, eval_full);
        }
        if (lopo->parsed()) {
            auto ctx = make_context(args, true);
            return cmd_lopo(ctx);
        }
        if (mnist->parsed()) {
            auto ctx = make_context(args, true);
            return cmd_mnist(ctx);
        }
        return kExitConfig;
    } catch (const stackfuse::cli::ConfigError& e) {
        std::cerr << "stackfuse: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const stackfuse::DataError& e) {
        std::cerr << "stackfuse: data error: " << e.what() << '\n';
        return kExitData;
    } catch (const stackfuse::IoError& e) {
        std::cerr << "stackfuse: data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "stackfuse: error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
