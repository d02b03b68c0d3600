#include "stackfuse/synth.hpp"

#include "stackfuse/errors.hpp"
#include "stackfuse/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stackfuse {

void SynthSpec::validate() const {
    if (num_classes < 1 || feature_len < 1 || persons < 1 || samples_per_class_per_person < 1) {
        throw InvalidArgumentError("synth: all counts must be >= 1");
    }
    if (static_cast<int>(class_centers.size()) != num_classes) {
        throw InvalidArgumentError("synth: need exactly one center per class");
    }
    for (const auto& c : class_centers) {
        if (c.size() != feature_len) {
            throw InvalidArgumentError("synth: center length does not match feature_len");
        }
    }
    if (within_class_sigma < 0.0 || person_shift_sigma < 0.0) {
        throw InvalidArgumentError("synth: sigmas must be nonnegative");
    }
    for (const auto& p : confusable_pairs) {
        if (p.a < 0 || p.a >= num_classes || p.b < 0 || p.b >= num_classes || p.a == p.b) {
            throw InvalidArgumentError("synth: confusable pair references invalid classes");
        }
        if (!(p.multiplier > 0.0 && p.multiplier <= 1.0)) {
            throw InvalidArgumentError("synth: confusable multiplier must lie in (0, 1]");
        }
    }
}

std::vector<Eigen::VectorXd> effective_centers(const SynthSpec& spec) {
    std::vector<Eigen::VectorXd> centers = spec.class_centers;
    for (const auto& pair : spec.confusable_pairs) {
        const Eigen::VectorXd mid = 0.5 * (centers[pair.a] + centers[pair.b]);
        centers[pair.a] = mid + pair.multiplier * (centers[pair.a] - mid);
        centers[pair.b] = mid + pair.multiplier * (centers[pair.b] - mid);
    }
    return centers;
}

Dataset generate(const SynthSpec& spec) {
    spec.validate();
    const auto centers = effective_centers(spec);

    Dataset ds;
    ds.num_classes = spec.num_classes;
    ds.feature_len = spec.feature_len;
    ds.name = "synth";
    ds.samples.reserve(static_cast<std::size_t>(spec.persons) * spec.num_classes *
                       spec.samples_per_class_per_person);

    Rng rng(spec.seed);
    Eigen::VectorXd offset(spec.feature_len);
    for (int person = 0; person < spec.persons; ++person) {
        for (Eigen::Index i = 0; i < offset.size(); ++i) {
            offset(i) = spec.person_shift_sigma * rng.gaussian();
        }
        for (int label = 0; label < spec.num_classes; ++label) {
            const Eigen::VectorXd shifted = centers[label] + offset;
            for (int k = 0; k < spec.samples_per_class_per_person; ++k) {
                Sample s;
                s.label = label;
                s.person = person;
                s.features.resize(static_cast<std::size_t>(spec.feature_len));
                for (int d = 0; d < spec.feature_len; ++d) {
                    s.features[static_cast<std::size_t>(d)] =
                        shifted(d) + spec.within_class_sigma * rng.gaussian();
                }
                ds.samples.push_back(std::move(s));
            }
        }
    }
    return ds;
}

namespace {

// Random centers rescaled so the minimum pairwise distance equals spacing;
// each designated pair is then placed at exactly spacing.
std::vector<Eigen::VectorXd> preset_centers(int num_classes, int feature_len, double spacing,
                                            const std::vector<ConfusablePair>& pairs,
                                            std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0xce17e25));
    std::vector<Eigen::VectorXd> centers(static_cast<std::size_t>(num_classes));
    for (auto& c : centers) {
        c.resize(feature_len);
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.gaussian();
    }
    double min_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < num_classes; ++i) {
        for (int j = i + 1; j < num_classes; ++j) {
            min_dist = std::min(min_dist, (centers[i] - centers[j]).norm());
        }
    }
    const double scale = spacing / min_dist;
    for (auto& c : centers) c *= scale;
    for (const auto& pair : pairs) {
        const Eigen::VectorXd dir = (centers[pair.b] - centers[pair.a]).normalized();
        centers[pair.b] = centers[pair.a] + spacing * dir;
    }
    return centers;
}

} // namespace

SynthSpec make_synth_spec(std::uint64_t seed, int classes, int features, int persons,
                          int samples_per_class_per_person, double within_sigma,
                          double person_sigma, double spacing,
                          std::vector<ConfusablePair> pairs) {
    if (classes < 1 || features < 1) {
        throw InvalidArgumentError("synth: classes and features must be >= 1");
    }
    for (const auto& p : pairs) {
        if (p.a < 0 || p.a >= classes || p.b < 0 || p.b >= classes || p.a == p.b) {
            throw InvalidArgumentError("synth: confusable pair references invalid classes");
        }
    }
    if (!(spacing > 0.0)) throw InvalidArgumentError("synth: spacing must be positive");

    SynthSpec spec;
    spec.seed = seed;
    spec.num_classes = classes;
    spec.feature_len = features;
    spec.persons = persons;
    spec.samples_per_class_per_person = samples_per_class_per_person;
    spec.within_class_sigma = within_sigma;
    spec.person_shift_sigma = person_sigma;
    spec.confusable_pairs = std::move(pairs);
    spec.class_centers =
        preset_centers(classes, features, spacing, spec.confusable_pairs, seed);
    spec.validate();
    return spec;
}

SynthSpec hard_preset(std::uint64_t seed, double spacing, double multiplier) {
    return make_synth_spec(seed, 10, 32, 15, 200, 1.0, 0.45, spacing,
                           {{2, 3, multiplier}, {6, 7, multiplier}});
}

SynthSpec separable_preset(std::uint64_t seed) {
    return make_synth_spec(seed, 10, 32, 15, 200, 1.0, 0.5, 8.0,
                           {{2, 3, 1.0}, {6, 7, 1.0}});
}

std::vector<int> confusable_classes(const SynthSpec& spec) {
    std::vector<int> classes;
    for (const auto& p : spec.confusable_pairs) {
        classes.push_back(p.a);
        classes.push_back(p.b);
    }
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return classes;
}

} // namespace stackfuse
