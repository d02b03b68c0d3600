#pragma once

#include "stackfuse/errors.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stackfuse::cli {

/// Bad or missing configuration; maps to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Flat key=value experiment configuration with section-prefixed keys
/// (dataset., synth., split., net., rprop., lopo., mnist.). Keys are
/// validated against the known set; unknown or duplicate keys are errors
/// that name the offending key.
class ExperimentConfig {
public:
    ExperimentConfig() = default;

    static ExperimentConfig from_file(const std::filesystem::path& path);

    /// Applies a `--key value` style override (used for --seed / --out).
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    long get_int(const std::string& key) const;
    long get_int_or(const std::string& key, long fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
    std::uint64_t get_u64(const std::string& key) const;

    /// Comma-separated doubles, e.g. split.fractions = 0.4,0.4,0.2.
    std::vector<double> get_doubles(const std::string& key) const;

    /// The root seed; --seed overrides the config, absence is an error.
    std::uint64_t seed() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

} // namespace stackfuse::cli
