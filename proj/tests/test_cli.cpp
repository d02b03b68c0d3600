#include "stackfuse/idx_io.hpp"
#include "stackfuse/rng.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

using namespace stackfuse;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    const std::string command = std::string(STACKFUSE_CLI_PATH) + " " + args + " 2>&1";
    CliResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer;
    while (std::size_t n = std::fread(buffer.data(), 1, buffer.size(), pipe)) {
        result.output.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> snapshot_tree(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files[fs::relative(entry.path(), dir).string()] = read_file(entry.path());
        }
    }
    return files;
}

const char* kTinyConfig =
    "seed = 42\n"
    "dataset.kind = synth\n"
    "synth.preset = hard\n"
    "synth.classes = 4\n"
    "synth.features = 6\n"
    "synth.persons = 3\n"
    "synth.samples = 20\n"
    "synth.confusable = 0:1:0.25\n"
    "split.mode = person\n"
    "split.person = 1\n"
    "net.hidden1 = 5\n"
    "net.hidden2 = 5\n"
    "rprop.max_epochs = 20\n";

} // namespace

TEST_CASE("cli: synth writes a corpus and is byte-deterministic") {
    const fs::path dir = fresh_dir("stackfuse_cli_synth");
    write_file(dir / "exp.cfg", kTinyConfig);

    const std::string args = "synth --config " + (dir / "exp.cfg").string() + " --out " +
                             (dir / "out").string() + " --quiet";
    CliResult r = run_cli(args);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "out" / "corpus.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.txt"));
    const std::string first = read_file(dir / "out" / "corpus.csv");

    r = run_cli(args);
    CHECK(r.exit_code == 0);
    CHECK(read_file(dir / "out" / "corpus.csv") == first);
    fs::remove_all(dir);
}

TEST_CASE("cli: train then eval replays the recorded d3 accuracies exactly") {
    const fs::path dir = fresh_dir("stackfuse_cli_replay");
    write_file(dir / "exp.cfg", kTinyConfig);
    const std::string common =
        " --config " + (dir / "exp.cfg").string() + " --quiet";

    CliResult train = run_cli("train" + common + " --out " + (dir / "model").string());
    REQUIRE(train.exit_code == 0);

    // Pull the exact recorded accuracies out of metrics.txt.
    std::map<std::string, std::string> metrics;
    {
        std::istringstream in(read_file(dir / "model" / "metrics.txt"));
        std::string key, value;
        while (in >> key >> value) metrics[key] = value;
    }
    REQUIRE(metrics.count("d3_stage1_accuracy"));
    REQUIRE(metrics.count("d3_stage2_accuracy"));

    CliResult eval = run_cli("eval" + common + " --model " + (dir / "model").string());
    REQUIRE(eval.exit_code == 0);
    CHECK(eval.output.find("stage1 accuracy " + metrics["d3_stage1_accuracy"]) !=
          std::string::npos);
    CHECK(eval.output.find("stage2 accuracy " + metrics["d3_stage2_accuracy"]) !=
          std::string::npos);
    CHECK(eval.output.find("d3 (from split.plan)") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: retraining into the same directory reproduces every byte") {
    const fs::path dir = fresh_dir("stackfuse_cli_determinism");
    write_file(dir / "exp.cfg", kTinyConfig);
    const std::string args = "train --config " + (dir / "exp.cfg").string() + " --out " +
                             (dir / "model").string() + " --quiet";

    REQUIRE(run_cli(args).exit_code == 0);
    const auto before = snapshot_tree(dir / "model");
    REQUIRE(run_cli(args).exit_code == 0);
    const auto after = snapshot_tree(dir / "model");

    REQUIRE(before.size() == after.size());
    for (const auto& [name, content] : before) {
        INFO("file ", name);
        CHECK(after.at(name) == content);
    }
    fs::remove_all(dir);
}

TEST_CASE("cli: lopo writes the table and csv reports") {
    const fs::path dir = fresh_dir("stackfuse_cli_lopo");
    write_file(dir / "exp.cfg", kTinyConfig);
    CliResult r = run_cli("lopo --config " + (dir / "exp.cfg").string() + " --out " +
                          (dir / "out").string() + " --quiet");
    REQUIRE(r.exit_code == 0);
    const std::string report = read_file(dir / "out" / "report.txt");
    CHECK(report.find("person |") == 0);
    CHECK(report.find("stage1 |") != std::string::npos);
    CHECK(report.find("stage2 |") != std::string::npos);
    CHECK(report.find("overall delta:") != std::string::npos);
    CHECK(r.output.find(report.substr(0, 30)) != std::string::npos); // table echoed to stdout
    const std::string csv = read_file(dir / "out" / "report.csv");
    CHECK(csv.rfind("person,stage1_acc,stage2_acc\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("cli: mnist protocol mechanics on a synthetic idx pair") {
    const fs::path dir = fresh_dir("stackfuse_cli_mnist");

    // A small byte-image corpus: 10 classes, blocky label-dependent patterns.
    Dataset ds;
    ds.num_classes = 10;
    ds.feature_len = 16;
    Rng rng(9);
    for (int i = 0; i < 400; ++i) {
        Sample s;
        s.label = static_cast<int>(rng.below(10));
        s.features.resize(16);
        for (int p = 0; p < 16; ++p) {
            const double base = (p % 10 == s.label) ? 0.8 : 0.2;
            s.features[p] = std::min(1.0, std::max(0.0, base + 0.1 * rng.gaussian()));
        }
        ds.samples.push_back(std::move(s));
    }
    write_idx(ds, 4, 4, dir / "images.idx3", dir / "labels.idx1");

    write_file(dir / "mnist.cfg",
               "seed = 7\n"
               "dataset.kind = idx\n"
               "dataset.idx_images = " + (dir / "images.idx3").string() + "\n" +
               "dataset.idx_labels = " + (dir / "labels.idx1").string() + "\n" +
               "split.fractions = 0.4,0.4,0.2\n"
               "net.hidden1 = 4\n"
               "net.hidden2 = 4\n"
               "rprop.max_epochs = 10\n"
               "mnist.runs = 3\n");

    const std::string args = "mnist --config " + (dir / "mnist.cfg").string() + " --out " +
                             (dir / "out").string() + " --quiet";
    CliResult r = run_cli(args);
    REQUIRE(r.exit_code == 0);

    // One row per run plus the summary line.
    CHECK(r.output.find("run  0:") != std::string::npos);
    CHECK(r.output.find("run  2:") != std::string::npos);
    CHECK(r.output.find("mean stage1 error") != std::string::npos);

    const std::string csv = read_file(dir / "out" / "mnist_runs.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4); // header + 3 runs
    CHECK(csv.rfind("run,stage1_error,stage2_error\n", 0) == 0);
    CHECK(fs::exists(dir / "out" / "summary.txt"));

    // Byte-determinism across re-runs.
    const auto before = snapshot_tree(dir / "out");
    REQUIRE(run_cli(args).exit_code == 0);
    const auto after = snapshot_tree(dir / "out");
    REQUIRE(before.size() == after.size());
    for (const auto& [name, content] : before) CHECK(after.at(name) == content);

    // Without mnist.runs the command defaults to 15 runs.
    std::string dflt = read_file(dir / "mnist.cfg");
    dflt.erase(dflt.find("mnist.runs = 3\n"), 15);
    write_file(dir / "mnist_default.cfg", dflt);
    CliResult d = run_cli("mnist --config " + (dir / "mnist_default.cfg").string() + " --out " +
                          (dir / "out_default").string() + " --quiet");
    REQUIRE(d.exit_code == 0);
    const std::string csv15 = read_file(dir / "out_default" / "mnist_runs.csv");
    CHECK(std::count(csv15.begin(), csv15.end(), '\n') == 16); // header + 15 runs
    fs::remove_all(dir);
}

TEST_CASE("cli: config errors name the offending key and exit 2") {
    const fs::path dir = fresh_dir("stackfuse_cli_errors");
    write_file(dir / "bad.cfg", "seed = 1\nbogus.key = 3\n");
    CliResult r = run_cli("train --config " + (dir / "bad.cfg").string() + " --out " +
                          (dir / "x").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("bogus.key") != std::string::npos);

    write_file(dir / "noseed.cfg",
               "dataset.kind = synth\nsynth.confusable = 0:1:0.5\nsplit.mode = person\n"
               "split.person = 0\n");
    r = run_cli("split --config " + (dir / "noseed.cfg").string() + " --out " +
                (dir / "x").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("seed") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: unknown person is a data error with exit 3") {
    const fs::path dir = fresh_dir("stackfuse_cli_data_error");
    std::string cfg = kTinyConfig;
    const auto pos = cfg.find("split.person = 1");
    cfg.replace(pos, 16, "split.person = 9");
    write_file(dir / "exp.cfg", cfg);
    CliResult r = run_cli("split --config " + (dir / "exp.cfg").string() + " --out " +
                          (dir / "x").string());
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("person 9") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: --seed overrides the config seed") {
    const fs::path dir = fresh_dir("stackfuse_cli_seed");
    write_file(dir / "exp.cfg", kTinyConfig);
    const std::string base = "synth --config " + (dir / "exp.cfg").string() + " --quiet --out ";
    REQUIRE(run_cli(base + (dir / "a").string()).exit_code == 0);
    REQUIRE(run_cli(base + (dir / "b").string() + " --seed 43").exit_code == 0);
    CHECK(read_file(dir / "a" / "corpus.csv") != read_file(dir / "b" / "corpus.csv"));

    const std::string manifest = read_file(dir / "b" / "manifest.txt");
    CHECK(manifest.find("seed = 43") != std::string::npos);
    fs::remove_all(dir);
}
