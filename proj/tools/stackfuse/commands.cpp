#include "commands.hpp"

#include "stackfuse/stackfuse.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace stackfuse::cli {
namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<ConfusablePair> parse_confusable(const std::string& text) {
    std::vector<ConfusablePair> pairs;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        ConfusablePair p;
        char c1 = 0, c2 = 0;
        std::istringstream cell(item);
        if (!(cell >> p.a >> c1 >> p.b >> c2 >> p.multiplier) || c1 != ':' || c2 != ':') {
            throw ConfigError("synth.confusable: expected a:b:multiplier, got '" + item + "'");
        }
        pairs.push_back(p);
    }
    return pairs;
}

std::string render_confusable(const std::vector<ConfusablePair>& pairs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) out << ',';
        out << pairs[i].a << ':' << pairs[i].b << ':' << fmt17(pairs[i].multiplier);
    }
    return out.str();
}

struct SynthSettings {
    int classes, features, persons, samples;
    double within_sigma, person_sigma, spacing;
    std::vector<ConfusablePair> pairs;
};

SynthSettings synth_settings(const ExperimentConfig& cfg) {
    const std::string preset = cfg.get_string_or("synth.preset", "hard");
    SynthSettings s;
    if (preset == "hard") {
        s = {10, 32, 15, 200, 1.0, 0.45, 5.0, {{2, 3, 0.25}, {6, 7, 0.25}}};
    } else if (preset == "separable") {
        s = {10, 32, 15, 200, 1.0, 0.5, 8.0, {{2, 3, 1.0}, {6, 7, 1.0}}};
    } else {
        throw ConfigError("synth.preset must be 'hard' or 'separable', got '" + preset + "'");
    }
    s.classes = static_cast<int>(cfg.get_int_or("synth.classes", s.classes));
    s.features = static_cast<int>(cfg.get_int_or("synth.features", s.features));
    s.persons = static_cast<int>(cfg.get_int_or("synth.persons", s.persons));
    s.samples = static_cast<int>(cfg.get_int_or("synth.samples", s.samples));
    s.within_sigma = cfg.get_double_or("synth.within_sigma", s.within_sigma);
    s.person_sigma = cfg.get_double_or("synth.person_sigma", s.person_sigma);
    s.spacing = cfg.get_double_or("synth.spacing", s.spacing);
    if (cfg.has("synth.confusable")) {
        s.pairs = parse_confusable(cfg.get_string("synth.confusable"));
    }
    return s;
}

SynthSpec build_synth_spec(const ExperimentConfig& cfg) {
    const SynthSettings s = synth_settings(cfg);
    try {
        return make_synth_spec(cfg.seed(), s.classes, s.features, s.persons, s.samples,
                               s.within_sigma, s.person_sigma, s.spacing, s.pairs);
    } catch (const InvalidArgumentError& e) {
        throw ConfigError(std::string("synth configuration: ") + e.what());
    }
}

Dataset load_dataset(const ExperimentConfig& cfg) {
    const std::string kind = cfg.get_string("dataset.kind");
    if (kind == "csv") {
        CsvSchema schema;
        schema.feature_len = static_cast<int>(cfg.get_int("dataset.features"));
        schema.label_col =
            static_cast<int>(cfg.get_int_or("dataset.label_col", schema.feature_len));
        schema.person_col = static_cast<int>(cfg.get_int_or("dataset.person_col", -1));
        schema.num_classes = static_cast<int>(cfg.get_int_or("dataset.classes", 0));
        schema.has_header = cfg.get_bool_or("dataset.header", false);
        return load_csv(cfg.get_string("dataset.path"), schema);
    }
    if (kind == "idx") {
        Dataset ds = load_idx(cfg.get_string("dataset.idx_images"),
                              cfg.get_string("dataset.idx_labels"));
        if (cfg.has("dataset.idx_images2")) {
            Dataset extra = load_idx(cfg.get_string("dataset.idx_images2"),
                                     cfg.get_string("dataset.idx_labels2"));
            if (extra.feature_len != ds.feature_len) {
                throw FormatError("idx pools have different image geometries");
            }
            ds.samples.insert(ds.samples.end(),
                              std::make_move_iterator(extra.samples.begin()),
                              std::make_move_iterator(extra.samples.end()));
            ds.name += "+" + extra.name;
        }
        return ds;
    }
    if (kind == "synth") {
        return generate(build_synth_spec(cfg));
    }
    throw ConfigError("dataset.kind must be csv, idx or synth, got '" + kind + "'");
}

SplitPlan build_split(const ExperimentConfig& cfg, const Dataset& ds) {
    const std::string mode = cfg.get_string("split.mode");
    if (mode == "person") {
        const int person = static_cast<int>(cfg.get_int("split.person"));
        return split_leave_one_person(ds, person, cfg.seed());
    }
    if (mode == "fractions") {
        const std::vector<double> f = cfg.get_doubles("split.fractions");
        if (f.size() != 3) {
            throw ConfigError("split.fractions needs exactly three values");
        }
        return split_fractions(ds, f[0], f[1], f[2], cfg.seed());
    }
    throw ConfigError("split.mode must be 'person' or 'fractions', got '" + mode + "'");
}

FusionConfig build_fusion_config(const ExperimentConfig& cfg) {
    FusionConfig fc;
    fc.hidden1 = static_cast<int>(cfg.get_int_or("net.hidden1", 40));
    fc.hidden2 = static_cast<int>(cfg.get_int_or("net.hidden2", 40));
    fc.steepness = cfg.get_double_or("net.steepness", 0.5);
    fc.rprop.eta_plus = cfg.get_double_or("rprop.eta_plus", 1.2);
    fc.rprop.eta_minus = cfg.get_double_or("rprop.eta_minus", 0.5);
    fc.rprop.delta_init = cfg.get_double_or("rprop.delta_init", 0.1);
    fc.rprop.delta_min = cfg.get_double_or("rprop.delta_min", 1e-6);
    fc.rprop.delta_max = cfg.get_double_or("rprop.delta_max", 50.0);
    fc.rprop.max_epochs = static_cast<int>(cfg.get_int_or("rprop.max_epochs", 300));
    fc.seed = cfg.seed();
    try {
        fc.rprop.validate();
    } catch (const InvalidArgumentError& e) {
        throw ConfigError(std::string("rprop configuration: ") + e.what());
    }
    return fc;
}

void append_dataset_echo(const CommandContext& ctx,
                         std::vector<std::pair<std::string, std::string>>& keys) {
    const auto& cfg = ctx.config;
    const std::string kind = cfg.get_string("dataset.kind");
    keys.emplace_back("dataset.kind", kind);
    if (kind == "csv") {
        keys.emplace_back("dataset.path", cfg.get_string("dataset.path"));
        keys.emplace_back("dataset.features", std::to_string(cfg.get_int("dataset.features")));
        keys.emplace_back("dataset.label_col",
                          std::to_string(cfg.get_int_or("dataset.label_col",
                                                        cfg.get_int("dataset.features"))));
        keys.emplace_back("dataset.person_col",
                          std::to_string(cfg.get_int_or("dataset.person_col", -1)));
        keys.emplace_back("dataset.classes", std::to_string(cfg.get_int_or("dataset.classes", 0)));
        keys.emplace_back("dataset.header",
                          cfg.get_bool_or("dataset.header", false) ? "true" : "false");
    } else if (kind == "idx") {
        keys.emplace_back("dataset.idx_images", cfg.get_string("dataset.idx_images"));
        keys.emplace_back("dataset.idx_labels", cfg.get_string("dataset.idx_labels"));
        if (cfg.has("dataset.idx_images2")) {
            keys.emplace_back("dataset.idx_images2", cfg.get_string("dataset.idx_images2"));
            keys.emplace_back("dataset.idx_labels2", cfg.get_string("dataset.idx_labels2"));
        }
    } else if (kind == "synth") {
        const SynthSettings s = synth_settings(cfg);
        keys.emplace_back("synth.preset", cfg.get_string_or("synth.preset", "hard"));
        keys.emplace_back("synth.classes", std::to_string(s.classes));
        keys.emplace_back("synth.features", std::to_string(s.features));
        keys.emplace_back("synth.persons", std::to_string(s.persons));
        keys.emplace_back("synth.samples", std::to_string(s.samples));
        keys.emplace_back("synth.within_sigma", fmt17(s.within_sigma));
        keys.emplace_back("synth.person_sigma", fmt17(s.person_sigma));
        keys.emplace_back("synth.spacing", fmt17(s.spacing));
        keys.emplace_back("synth.confusable", render_confusable(s.pairs));
    }
}

void append_net_echo(const CommandContext& ctx,
                     std::vector<std::pair<std::string, std::string>>& keys) {
    const FusionConfig fc = build_fusion_config(ctx.config);
    keys.emplace_back("net.hidden1", std::to_string(fc.hidden1));
    keys.emplace_back("net.hidden2", std::to_string(fc.hidden2));
    keys.emplace_back("net.steepness", fmt17(fc.steepness));
    keys.emplace_back("rprop.eta_plus", fmt17(fc.rprop.eta_plus));
    keys.emplace_back("rprop.eta_minus", fmt17(fc.rprop.eta_minus));
    keys.emplace_back("rprop.delta_init", fmt17(fc.rprop.delta_init));
    keys.emplace_back("rprop.delta_min", fmt17(fc.rprop.delta_min));
    keys.emplace_back("rprop.delta_max", fmt17(fc.rprop.delta_max));
    keys.emplace_back("rprop.max_epochs", std::to_string(fc.rprop.max_epochs));
}

void append_split_echo(const CommandContext& ctx,
                       std::vector<std::pair<std::string, std::string>>& keys) {
    const auto& cfg = ctx.config;
    const std::string mode = cfg.get_string("split.mode");
    keys.emplace_back("split.mode", mode);
    if (mode == "person") {
        keys.emplace_back("split.person", std::to_string(cfg.get_int("split.person")));
    } else {
        const auto f = cfg.get_doubles("split.fractions");
        keys.emplace_back("split.fractions",
                          fmt17(f[0]) + "," + fmt17(f[1]) + "," + fmt17(f[2]));
    }
}

/// Full-echo manifest: every effective key, no hidden defaults. The file is
/// itself a loadable config (run.* keys are accepted and ignored).
void write_manifest(const CommandContext& ctx, const std::string& command,
                    std::vector<std::pair<std::string, std::string>> keys) {
    std::vector<std::pair<std::string, std::string>> all;
    all.emplace_back("run.command", command);
    all.emplace_back("run.version", "stackfuse 0.1.0");
    all.emplace_back("seed", std::to_string(ctx.config.seed()));
    all.emplace_back("out", ctx.out_dir.string());
    for (auto& kv : keys) all.push_back(std::move(kv));

    const auto path = ctx.out_dir / "manifest.txt";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (const auto& [k, v] : all) out << k << " = " << v << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void ensure_out_dir(const CommandContext& ctx) {
    std::error_code ec;
    std::filesystem::create_directories(ctx.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + ctx.out_dir.string());
}

std::vector<Sample> gather(const Dataset& ds, const std::vector<std::uint32_t>& indices) {
    std::vector<Sample> samples;
    samples.reserve(indices.size());
    for (auto i : indices) samples.push_back(ds.samples[i]);
    return samples;
}

Eigen::VectorXd features_of(const Sample& s) {
    return Eigen::Map<const Eigen::VectorXd>(s.features.data(),
                                             static_cast<Eigen::Index>(s.features.size()));
}

struct StageAccuracies {
    ConfusionMatrix cm1;
    ConfusionMatrix cm2;
};

StageAccuracies evaluate_stages(const FusionModel& model, std::span<const Sample> samples,
                                int num_classes) {
    return {evaluate([&](const Sample& s) { return predict_stage1(model, features_of(s)).label; },
                     samples, num_classes),
            evaluate([&](const Sample& s) { return predict_stage2(model, features_of(s)).label; },
                     samples, num_classes)};
}

void progress(const CommandContext& ctx, const std::string& message) {
    if (!ctx.quiet) std::cerr << "stackfuse: " << message << '\n';
}

} // namespace

int cmd_synth(const CommandContext& ctx) {
    ensure_out_dir(ctx);
    const SynthSpec spec = build_synth_spec(ctx.config);
    progress(ctx, "generating synthetic corpus");
    const Dataset ds = generate(spec);
    write_csv(ds, ctx.out_dir / "corpus.csv");

    std::vector<std::pair<std::string, std::string>> keys;
    {
        const SynthSettings s = synth_settings(ctx.config);
        keys.emplace_back("synth.preset", ctx.config.get_string_or("synth.preset", "hard"));
        keys.emplace_back("synth.classes", std::to_string(s.classes));
        keys.emplace_back("synth.features", std::to_string(s.features));
        keys.emplace_back("synth.persons", std::to_string(s.persons));
        keys.emplace_back("synth.samples", std::to_string(s.samples));
        keys.emplace_back("synth.within_sigma", fmt17(s.within_sigma));
        keys.emplace_back("synth.person_sigma", fmt17(s.person_sigma));
        keys.emplace_back("synth.spacing", fmt17(s.spacing));
        keys.emplace_back("synth.confusable", render_confusable(s.pairs));
    }
    write_manifest(ctx, "synth", std::move(keys));

    std::cout << "wrote " << ds.size() << " samples (" << ds.num_classes << " classes, "
              << ds.feature_len << " features, " << ds.persons().size() << " persons) to "
              << (ctx.out_dir / "corpus.csv").string() << '\n';
    return 0;
}

int cmd_split(const CommandContext& ctx) {
    ensure_out_dir(ctx);
    const Dataset ds = load_dataset(ctx.config);
    const SplitPlan plan = build_split(ctx.config, ds);
    save_split_plan(plan, ctx.out_dir / "split.plan");

    std::vector<std::pair<std::string, std::string>> keys;
    append_dataset_echo(ctx, keys);
    append_split_echo(ctx, keys);
    write_manifest(ctx, "split", std::move(keys));

    std::cout << "split sizes: d1_train=" << plan.d1_train.size()
              << " d1_test=" << plan.d1_test.size() << " d2_train=" << plan.d2_train.size()
              << " d2_test=" << plan.d2_test.size() << " d3=" << plan.d3.size() << '\n';
    return 0;
}

int cmd_train(const CommandContext& ctx) {
    ensure_out_dir(ctx);
    const Dataset ds = load_dataset(ctx.config);
    const SplitPlan plan = build_split(ctx.config, ds);
    const FusionConfig fc = build_fusion_config(ctx.config);

    progress(ctx, "training stage 1 and stage 2");
    const FusionModel model = train_two_stage(plan, ds, fc);

    save_split_plan(plan, ctx.out_dir / "split.plan");
    save_fusion_model(model, ctx.out_dir, "split.plan");

    const std::vector<Sample> d3 = gather(ds, plan.d3);
    const StageAccuracies acc = evaluate_stages(model, d3, ds.num_classes);

    {
        std::ofstream metrics(ctx.out_dir / "metrics.txt");
        if (!metrics) throw IoError("cannot open metrics.txt for writing");
        metrics << "d3_stage1_accuracy " << fmt17(acc.cm1.accuracy()) << '\n';
        metrics << "d3_stage2_accuracy " << fmt17(acc.cm2.accuracy()) << '\n';
        metrics << "net1_best_epoch " << model.net1.best_epoch << '\n';
        metrics << "net1_best_monitor_mse " << fmt17(model.net1.best_monitor_mse) << '\n';
        metrics << "net2_best_epoch " << model.net2.best_epoch << '\n';
        metrics << "net2_best_monitor_mse " << fmt17(model.net2.best_monitor_mse) << '\n';
    }

    std::vector<std::pair<std::string, std::string>> keys;
    append_dataset_echo(ctx, keys);
    append_split_echo(ctx, keys);
    append_net_echo(ctx, keys);
    write_manifest(ctx, "train", std::move(keys));

    std::cout << "d3 stage1 accuracy " << fmt17(acc.cm1.accuracy()) << '\n';
    std::cout << "d3 stage2 accuracy " << fmt17(acc.cm2.accuracy()) << '\n';
    std::cout << "model written to " << ctx.out_dir.string() << '\n';
    return 0;
}

int cmd_eval(const CommandContext& ctx, const std::filesystem::path& model_dir, bool full) {
    const FusionModel model = load_fusion_model(model_dir);
    const Dataset ds = load_dataset(ctx.config);
    if (ds.feature_len != model.descriptor_len) {
        throw DataError("dataset has " + std::to_string(ds.feature_len) +
                        " features but the model expects " +
                        std::to_string(model.descriptor_len));
    }
    if (ds.num_classes != model.num_classes) {
        throw DataError("dataset has " + std::to_string(ds.num_classes) +
                        " classes but the model expects " + std::to_string(model.num_classes));
    }

    std::vector<Sample> subset;
    std::string subset_name = "full dataset";
    const auto plan_path = model_dir / "split.plan";
    if (!full && std::filesystem::exists(plan_path)) {
        const SplitPlan plan = load_split_plan(plan_path);
        if (plan.total() == ds.size()) {
            subset = gather(ds, plan.d3);
            subset_name = "d3 (from " + plan_path.filename().string() + ")";
        }
    }
    if (subset.empty()) {
        subset = ds.samples;
    }

    const StageAccuracies acc = evaluate_stages(model, subset, ds.num_classes);
    std::cout << "evaluated " << subset.size() << " samples: " << subset_name << '\n';
    std::cout << "stage1 accuracy " << fmt17(acc.cm1.accuracy()) << '\n';
    std::cout << "stage1 confusion matrix\n" << render_confusion(acc.cm1);
    std::cout << "stage2 accuracy " << fmt17(acc.cm2.accuracy()) << '\n';
    std::cout << "stage2 confusion matrix\n" << render_confusion(acc.cm2);
    return 0;
}

int cmd_lopo(const CommandContext& ctx) {
    ensure_out_dir(ctx);
    const Dataset ds = load_dataset(ctx.config);
    if (ds.persons().size() < 2) {
        throw DataError("lopo needs a dataset with person labels (got " +
                        std::to_string(ds.persons().size()) + " persons)");
    }
    const FusionConfig fc = build_fusion_config(ctx.config);

    LopoOptions options;
    options.workers = static_cast<int>(ctx.config.get_int_or("lopo.workers", 0));
    if (!ctx.quiet) {
        options.on_fold_done = [](const PersonResult& pr) {
            std::cerr << "stackfuse: person " << pr.person << " done: stage1 "
                      << pr.stage1_accuracy << ", stage2 " << pr.stage2_accuracy << '\n';
        };
    }
    const ComparisonReport report = run_lopo(ds, fc, options);

    const std::string text = render_report(report, ReportFormat::TextTable);
    const std::string csv = render_report(report, ReportFormat::Csv);
    {
        std::ofstream out(ctx.out_dir / "report.txt");
        out << text;
        if (!out) throw IoError("failed writing report.txt");
    }
    {
        std::ofstream out(ctx.out_dir / "report.csv");
        out << csv;
        if (!out) throw IoError("failed writing report.csv");
    }

    std::vector<std::pair<std::string, std::string>> keys;
    append_dataset_echo(ctx, keys);
    append_net_echo(ctx, keys);
    keys.emplace_back("lopo.workers", std::to_string(ctx.config.get_int_or("lopo.workers", 0)));
    write_manifest(ctx, "lopo", std::move(keys));

    std::cout << text;
    return 0;
}

int cmd_mnist(const CommandContext& ctx) {
    ensure_out_dir(ctx);
    const Dataset ds = load_dataset(ctx.config);

    std::vector<double> fractions = {0.4, 0.4, 0.2};
    if (ctx.config.has("split.fractions")) {
        fractions = ctx.config.get_doubles("split.fractions");
        if (fractions.size() != 3) throw ConfigError("split.fractions needs three values");
    }
    const int runs = static_cast<int>(ctx.config.get_int_or("mnist.runs", 15));
    if (runs < 1) throw ConfigError("mnist.runs must be >= 1");
    const FusionConfig base = build_fusion_config(ctx.config);

    struct Row {
        int run;
        double err1, err2;
    };
    std::vector<Row> rows;
    for (int run = 0; run < runs; ++run) {
        const std::uint64_t run_seed = mix_seed(base.seed, static_cast<std::uint64_t>(run));
        progress(ctx, "run " + std::to_string(run) + " (seed " + std::to_string(run_seed) + ")");
        const SplitPlan plan =
            split_fractions(ds, fractions[0], fractions[1], fractions[2], run_seed);
        FusionConfig fc = base;
        fc.seed = run_seed;
        const FusionModel model = train_two_stage(plan, ds, fc);
        const std::vector<Sample> d3 = gather(ds, plan.d3);
        const StageAccuracies acc = evaluate_stages(model, d3, ds.num_classes);
        rows.push_back({run, 1.0 - acc.cm1.accuracy(), 1.0 - acc.cm2.accuracy()});
        char line[128];
        std::snprintf(line, sizeof(line), "run %2d: stage1 error %.4f  stage2 error %.4f",
                      run, rows.back().err1, rows.back().err2);
        std::cout << line << '\n';
    }

    auto mean = [&](auto pick) {
        double acc = 0.0;
        for (const Row& r : rows) acc += pick(r);
        return acc / static_cast<double>(rows.size());
    };
    auto variance = [&](auto pick, double m) {
        if (rows.size() < 2) return 0.0;
        double acc = 0.0;
        for (const Row& r : rows) acc += (pick(r) - m) * (pick(r) - m);
        return acc / static_cast<double>(rows.size() - 1);
    };
    const double mean1 = mean([](const Row& r) { return r.err1; });
    const double mean2 = mean([](const Row& r) { return r.err2; });
    const double var1 = variance([](const Row& r) { return r.err1; }, mean1);
    const double var2 = variance([](const Row& r) { return r.err2; }, mean2);

    {
        std::ofstream out(ctx.out_dir / "mnist_runs.csv");
        out << "run,stage1_error,stage2_error\n";
        for (const Row& r : rows) {
            out << r.run << ',' << fmt17(r.err1) << ',' << fmt17(r.err2) << '\n';
        }
        if (!out) throw IoError("failed writing mnist_runs.csv");
    }
    {
        std::ofstream out(ctx.out_dir / "summary.txt");
        out << "runs " << runs << '\n';
        out << "stage1_error_mean " << fmt17(mean1) << '\n';
        out << "stage1_error_variance " << fmt17(var1) << '\n';
        out << "stage2_error_mean " << fmt17(mean2) << '\n';
        out << "stage2_error_variance " << fmt17(var2) << '\n';
        if (!out) throw IoError("failed writing summary.txt");
    }

    std::vector<std::pair<std::string, std::string>> keys;
    append_dataset_echo(ctx, keys);
    keys.emplace_back("split.mode", "fractions");
    keys.emplace_back("split.fractions",
                      fmt17(fractions[0]) + "," + fmt17(fractions[1]) + "," + fmt17(fractions[2]));
    append_net_echo(ctx, keys);
    keys.emplace_back("mnist.runs", std::to_string(runs));
    write_manifest(ctx, "mnist", std::move(keys));

    char line[160];
    std::snprintf(line, sizeof(line),
                  "mean stage1 error %.4f (variance %.6f), mean stage2 error %.4f (variance %.6f)",
                  mean1, var1, mean2, var2);
    std::cout << line << '\n';
    return 0;
}

} // namespace stackfuse::cli
