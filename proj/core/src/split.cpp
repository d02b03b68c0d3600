#include "stackfuse/split.hpp"

#include "stackfuse/errors.hpp"
#include "stackfuse/rng.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace stackfuse {
namespace {

// Splits a contiguous pool into train/test at 9:1, test = round(|pool|/10).
void nested_monitor_split(const std::vector<std::uint32_t>& pool,
                          std::vector<std::uint32_t>& train, std::vector<std::uint32_t>& test) {
    const auto test_size =
        static_cast<std::size_t>(std::llround(static_cast<double>(pool.size()) / 10.0));
    const std::size_t train_size = pool.size() - test_size;
    train.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(train_size));
    test.assign(pool.begin() + static_cast<std::ptrdiff_t>(train_size), pool.end());
}

SplitPlan split_pools(std::vector<std::uint32_t> d1_pool, std::vector<std::uint32_t> d2_pool,
                      std::vector<std::uint32_t> d3, int held_out_person, std::uint64_t seed) {
    SplitPlan plan;
    plan.held_out_person = held_out_person;
    plan.seed = seed;
    plan.d3 = std::move(d3);
    nested_monitor_split(d1_pool, plan.d1_train, plan.d1_test);
    nested_monitor_split(d2_pool, plan.d2_train, plan.d2_test);
    return plan;
}

} // namespace

SplitPlan split_leave_one_person(const Dataset& ds, int person, std::uint64_t seed) {
    if (person < 0) {
        throw MissingSubjectError("split: person ids are nonnegative, got " +
                                  std::to_string(person));
    }
    std::vector<std::uint32_t> held, rest;
    held.reserve(ds.size());
    rest.reserve(ds.size());
    for (std::uint32_t i = 0; i < ds.size(); ++i) {
        if (ds.samples[i].person == person) {
            held.push_back(i);
        } else {
            rest.push_back(i);
        }
    }
    if (held.empty()) {
        throw MissingSubjectError("split: no samples for person " + std::to_string(person));
    }
    if (rest.size() < 20) {
        throw InsufficientDataError("split: only " + std::to_string(rest.size()) +
                                    " samples left after holding out person " +
                                    std::to_string(person) + ", need at least 20");
    }

    Rng rng(seed);
    rng.shuffle(rest);

    // Equal halves; D1 receives the extra sample when the count is odd.
    const std::size_t d1_size = (rest.size() + 1) / 2;
    std::vector<std::uint32_t> d1_pool(rest.begin(),
                                       rest.begin() + static_cast<std::ptrdiff_t>(d1_size));
    std::vector<std::uint32_t> d2_pool(rest.begin() + static_cast<std::ptrdiff_t>(d1_size),
                                       rest.end());
    return split_pools(std::move(d1_pool), std::move(d2_pool), std::move(held), person, seed);
}

SplitPlan split_fractions(const Dataset& ds, double f1, double f2, double f3,
                          std::uint64_t seed) {
    if (!(f1 > 0.0 && f2 > 0.0 && f3 > 0.0)) {
        throw InvalidArgumentError("split_fractions: every fraction must be positive");
    }
    if (std::abs(f1 + f2 + f3 - 1.0) > 1e-9) {
        throw InvalidArgumentError("split_fractions: fractions must sum to 1");
    }
    const auto n = ds.size();
    const auto n1 = static_cast<std::size_t>(std::llround(f1 * static_cast<double>(n)));
    const auto n2 = static_cast<std::size_t>(std::llround(f2 * static_cast<double>(n)));
    if (n1 == 0 || n2 == 0 || n1 + n2 >= n) {
        throw InsufficientDataError("split_fractions: dataset of " + std::to_string(n) +
                                    " samples leaves an empty set at the given fractions");
    }

    std::vector<std::uint32_t> all(n);
    for (std::uint32_t i = 0; i < n; ++i) all[i] = i;
    Rng rng(seed);
    rng.shuffle(all);

    std::vector<std::uint32_t> d1_pool(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n1));
    std::vector<std::uint32_t> d2_pool(all.begin() + static_cast<std::ptrdiff_t>(n1),
                                       all.begin() + static_cast<std::ptrdiff_t>(n1 + n2));
    std::vector<std::uint32_t> d3(all.begin() + static_cast<std::ptrdiff_t>(n1 + n2), all.end());
    return split_pools(std::move(d1_pool), std::move(d2_pool), std::move(d3), kNoPerson, seed);
}

namespace {

void write_index_set(std::ostream& out, const char* name,
                     const std::vector<std::uint32_t>& set) {
    out << name << ' ' << set.size();
    for (std::uint32_t v : set) out << ' ' << v;
    out << '\n';
}

std::vector<std::uint32_t> read_index_set(std::istream& in, const std::string& expected) {
    std::string name;
    std::size_t count = 0;
    if (!(in >> name >> count) || name != expected) {
        throw FormatError("split plan: expected index set '" + expected + "'");
    }
    std::vector<std::uint32_t> set(count);
    for (auto& v : set) {
        if (!(in >> v)) throw FormatError("split plan: truncated index set '" + expected + "'");
    }
    return set;
}

} // namespace

void save_split_plan(const SplitPlan& plan, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "stackfuse-split v1\n";
    out << "seed " << plan.seed << '\n';
    out << "held_out_person " << plan.held_out_person << '\n';
    write_index_set(out, "d1_train", plan.d1_train);
    write_index_set(out, "d1_test", plan.d1_test);
    write_index_set(out, "d2_train", plan.d2_train);
    write_index_set(out, "d2_test", plan.d2_test);
    write_index_set(out, "d3", plan.d3);
    if (!out) throw IoError("failed writing " + path.string());
}

SplitPlan load_split_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "stackfuse-split v1") {
        throw FormatError(path.string() + ": not a stackfuse split plan");
    }
    SplitPlan plan;
    std::string key;
    if (!(in >> key >> plan.seed) || key != "seed") {
        throw FormatError(path.string() + ": missing seed");
    }
    if (!(in >> key >> plan.held_out_person) || key != "held_out_person") {
        throw FormatError(path.string() + ": missing held_out_person");
    }
    plan.d1_train = read_index_set(in, "d1_train");
    plan.d1_test = read_index_set(in, "d1_test");
    plan.d2_train = read_index_set(in, "d2_train");
    plan.d2_test = read_index_set(in, "d2_test");
    plan.d3 = read_index_set(in, "d3");
    return plan;
}

} // namespace stackfuse
