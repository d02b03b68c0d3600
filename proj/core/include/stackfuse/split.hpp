#pragma once

#include "stackfuse/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace stackfuse {

/// Disjoint index sets partitioning a dataset: D1/D2 train the two stages
/// (each with a held-back 1-in-10 monitor split), D3 is the generalization
/// set and is never touched during training.
struct SplitPlan {
    std::vector<std::uint32_t> d1_train;
    std::vector<std::uint32_t> d1_test;
    std::vector<std::uint32_t> d2_train;
    std::vector<std::uint32_t> d2_test;
    std::vector<std::uint32_t> d3;
    int held_out_person = kNoPerson;
    std::uint64_t seed = 0;

    std::size_t total() const {
        return d1_train.size() + d1_test.size() + d2_train.size() + d2_test.size() + d3.size();
    }
};

/// D3 = every sample of the given person; the rest is shuffled with the
/// seeded generator and halved into D1/D2 (D1 takes the odd extra), each
/// then split 9:1 into train/monitor (monitor size = round(|Di|/10)).
SplitPlan split_leave_one_person(const Dataset& ds, int person, std::uint64_t seed);

/// Seeded shuffle, then fractions f1/f2/f3 of the samples go to D1/D2/D3
/// (sizes rounded, D3 takes the remainder), with the same nested 9:1
/// monitor splits. For corpora without subject structure.
SplitPlan split_fractions(const Dataset& ds, double f1, double f2, double f3,
                          std::uint64_t seed);

void save_split_plan(const SplitPlan& plan, const std::filesystem::path& path);
SplitPlan load_split_plan(const std::filesystem::path& path);

} // namespace stackfuse
