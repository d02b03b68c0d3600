#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

namespace stackfuse::cli {
namespace {

const std::set<std::string> kKnownKeys = {
    "seed",
    "out",
    "run.command",
    "run.version",
    "dataset.kind",
    "dataset.path",
    "dataset.features",
    "dataset.label_col",
    "dataset.person_col",
    "dataset.classes",
    "dataset.header",
    "dataset.idx_images",
    "dataset.idx_labels",
    "dataset.idx_images2",
    "dataset.idx_labels2",
    "synth.preset",
    "synth.classes",
    "synth.features",
    "synth.persons",
    "synth.samples",
    "synth.within_sigma",
    "synth.person_sigma",
    "synth.spacing",
    "synth.confusable",
    "split.mode",
    "split.person",
    "split.fractions",
    "net.hidden1",
    "net.hidden2",
    "net.steepness",
    "rprop.eta_plus",
    "rprop.eta_minus",
    "rprop.delta_init",
    "rprop.delta_min",
    "rprop.delta_max",
    "rprop.max_epochs",
    "mnist.runs",
    "lopo.workers",
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());

    ExperimentConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key = value, got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!kKnownKeys.count(key)) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": unknown config key '" + key + "'");
        }
        if (cfg.entries_.count(key)) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": duplicate config key '" + key + "'");
        }
        cfg.entries_[key] = value;
    }
    return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
    entries_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string ExperimentConfig::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::string ExperimentConfig::get_string_or(const std::string& key,
                                            const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

long ExperimentConfig::get_int(const std::string& key) const {
    const std::string text = get_string(key);
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("config key '" + key + "': '" + text + "' is not an integer");
    }
    return value;
}

long ExperimentConfig::get_int_or(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double ExperimentConfig::get_double(const std::string& key) const {
    const std::string text = get_string(key);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("config key '" + key + "': '" + text + "' is not a number");
    }
    return value;
}

double ExperimentConfig::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool ExperimentConfig::get_bool_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string text = get_string(key);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("config key '" + key + "': '" + text + "' is not a boolean");
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key) const {
    const std::string text = get_string(key);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("config key '" + key + "': '" + text +
                          "' is not an unsigned integer");
    }
    return value;
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key) const {
    const std::string text = get_string(key);
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string cell =
            trim(comma == std::string::npos ? text.substr(start)
                                            : text.substr(start, comma - start));
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw ConfigError("config key '" + key + "': '" + cell + "' is not a number");
        }
        values.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

std::uint64_t ExperimentConfig::seed() const {
    if (!has("seed")) {
        throw ConfigError("missing config key 'seed': every run needs an explicit root seed");
    }
    return get_u64("seed");
}

} // namespace stackfuse::cli
