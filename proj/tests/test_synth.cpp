#include "stackfuse/errors.hpp"
#include "stackfuse/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace stackfuse;

namespace {

// Independent nearest-centroid classifier: class means over the training
// persons, then nearest center wins. Used as an oracle for corpus hardness.
struct CentroidOracle {
    std::vector<Eigen::VectorXd> centroids;

    CentroidOracle(const Dataset& ds, int held_out_person) {
        std::vector<long> counts(static_cast<std::size_t>(ds.num_classes), 0);
        centroids.assign(static_cast<std::size_t>(ds.num_classes),
                         Eigen::VectorXd::Zero(ds.feature_len));
        for (const Sample& s : ds.samples) {
            if (s.person == held_out_person) continue;
            centroids[static_cast<std::size_t>(s.label)] +=
                Eigen::Map<const Eigen::VectorXd>(s.features.data(), ds.feature_len);
            ++counts[static_cast<std::size_t>(s.label)];
        }
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            centroids[c] /= static_cast<double>(counts[c]);
        }
    }

    int classify(const Sample& s) const {
        const auto x = Eigen::Map<const Eigen::VectorXd>(
            s.features.data(), static_cast<Eigen::Index>(s.features.size()));
        int best = 0;
        double best_dist = (x - centroids[0]).squaredNorm();
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = (x - centroids[c]).squaredNorm();
            if (d < best_dist) {
                best_dist = d;
                best = static_cast<int>(c);
            }
        }
        return best;
    }
};

struct OracleStats {
    double accuracy = 0.0;
    std::map<int, double> per_class_recall;
};

OracleStats oracle_on_person(const Dataset& ds, int person) {
    const CentroidOracle oracle(ds, person);
    std::map<int, long> total, correct;
    long n = 0, good = 0;
    for (const Sample& s : ds.samples) {
        if (s.person != person) continue;
        ++n;
        ++total[s.label];
        if (oracle.classify(s) == s.label) {
            ++good;
            ++correct[s.label];
        }
    }
    OracleStats stats;
    stats.accuracy = static_cast<double>(good) / static_cast<double>(n);
    for (const auto& [label, count] : total) {
        stats.per_class_recall[label] =
            static_cast<double>(correct[label]) / static_cast<double>(count);
    }
    return stats;
}

} // namespace

TEST_CASE("generated corpus has the specified shape") {
    const Dataset ds = generate(hard_preset(5));
    CHECK(ds.size() == 30000); // 10 classes x 15 persons x 200
    CHECK(ds.num_classes == 10);
    CHECK(ds.feature_len == 32);
    CHECK(ds.persons().size() == 15);

    std::map<std::pair<int, int>, int> per_person_class;
    for (const Sample& s : ds.samples) ++per_person_class[{s.person, s.label}];
    CHECK(per_person_class.size() == 150);
    for (const auto& [key, count] : per_person_class) CHECK(count == 200);
    ds.validate();
}

TEST_CASE("zero sigmas collapse every sample onto its class center") {
    SynthSpec spec = hard_preset(3);
    spec.within_class_sigma = 0.0;
    spec.person_shift_sigma = 0.0;
    spec.persons = 2;
    spec.samples_per_class_per_person = 3;
    const Dataset ds = generate(spec);
    const auto centers = effective_centers(spec);
    for (const Sample& s : ds.samples) {
        const auto x = Eigen::Map<const Eigen::VectorXd>(s.features.data(), spec.feature_len);
        CHECK(x == centers[static_cast<std::size_t>(s.label)]);
    }
}

TEST_CASE("identical recipes generate bit-identical corpora") {
    const Dataset a = generate(hard_preset(17));
    const Dataset b = generate(hard_preset(17));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); i += 997) { // stride keeps the scan cheap
        CHECK(a.samples[i].features == b.samples[i].features);
        CHECK(a.samples[i].label == b.samples[i].label);
        CHECK(a.samples[i].person == b.samples[i].person);
    }
    const Dataset c = generate(hard_preset(18));
    CHECK(a.samples[0].features != c.samples[0].features);
}

TEST_CASE("preset geometry: designated pairs sit at multiplier * spacing") {
    const SynthSpec spec = hard_preset(21);
    const auto raw = spec.class_centers;
    const auto eff = effective_centers(spec);
    for (const auto& pair : spec.confusable_pairs) {
        CHECK((raw[pair.a] - raw[pair.b]).norm() == doctest::Approx(5.0).epsilon(1e-9));
        CHECK((eff[pair.a] - eff[pair.b]).norm() == doctest::Approx(1.25).epsilon(1e-9));
    }
    // Non-designated classes keep a healthy margin.
    for (int i = 0; i < spec.num_classes; ++i) {
        for (int j = i + 1; j < spec.num_classes; ++j) {
            const bool designated = (i == 2 && j == 3) || (i == 6 && j == 7);
            if (!designated) CHECK((eff[i] - eff[j]).norm() >= 3.5);
        }
    }
}

TEST_CASE("separable preset: centroid oracle is near-perfect on held-out persons") {
    const Dataset ds = generate(separable_preset(11));
    double sum = 0.0;
    for (int person : {0, 7, 14}) {
        const OracleStats stats = oracle_on_person(ds, person);
        sum += stats.accuracy;
        CHECK(stats.accuracy >= 0.99);
    }
    CHECK(sum / 3.0 >= 0.995);
}

TEST_CASE("hard preset is genuinely ambiguous for the centroid oracle") {
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        const SynthSpec spec = hard_preset(seed);
        const Dataset ds = generate(spec);
        const OracleStats stats = oracle_on_person(ds, 0);
        CHECK(stats.accuracy <= 0.90); // >= 10% error

        // The errors concentrate on the designated confusable classes.
        const auto confusable = confusable_classes(spec);
        double conf_recall = 0.0, other_recall = 0.0;
        int conf_n = 0, other_n = 0;
        for (const auto& [label, recall] : stats.per_class_recall) {
            const bool is_conf =
                std::find(confusable.begin(), confusable.end(), label) != confusable.end();
            if (is_conf) {
                conf_recall += recall;
                ++conf_n;
            } else {
                other_recall += recall;
                ++other_n;
            }
        }
        conf_recall /= conf_n;
        other_recall /= other_n;
        CHECK(conf_recall < other_recall - 0.10);
    }
}

TEST_CASE("spec validation rejects malformed recipes") {
    SynthSpec spec = hard_preset(1);
    spec.confusable_pairs.push_back({1, 1, 0.5});
    CHECK_THROWS_AS((void)generate(spec), InvalidArgumentError);

    spec = hard_preset(1);
    spec.confusable_pairs[0].multiplier = 0.0;
    CHECK_THROWS_AS((void)generate(spec), InvalidArgumentError);

    spec = hard_preset(1);
    spec.class_centers.pop_back();
    CHECK_THROWS_AS((void)generate(spec), InvalidArgumentError);

    spec = hard_preset(1);
    spec.persons = 0;
    CHECK_THROWS_AS((void)generate(spec), InvalidArgumentError);
}
