#ifndef ELLIPSOTRON_DATA_HPP
#define ELLIPSOTRON_DATA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellipsotron/types.hpp"

namespace ellipsotron {

struct SynthConfig {
    int dim = 100;               // d
    int num_classes = 20;        // m
    int pool_size = 10;          // informative features per class
    int relevant_per_sample = 5; // k, drawn per sample from the class pool
    double signal = 1.5;         // mean offset on relevant features
    double noise = 1.0;          // Gaussian noise stddev
    int samples_per_class = 40;
    // Optional confuser context: each sample also carries elevated activity on
    // a few features drawn from one *other* class's pool. These features are
    // never voted, so they separate learners by how they treat off-support
    // structure. Disabled by default.
    int distractors_per_sample = 0;   // features borrowed from the confuser pool
    double distractor_scale = 0.0;    // amplitude as a multiple of `signal`
    bool overlapping_pools = true;
    double epsilon = 1e-10;      // precision for unvoted features
    std::uint64_t seed = 0;

    void validate() const;
};

struct Dataset {
    std::vector<Sample> samples;
    int dim = 0;
    int num_classes = 0;
    std::string source;       // "synthetic" or file path
    std::uint64_t seed = 0;
    std::string config_hash;  // hash of the generating config, if any
};

/// Deterministic synthetic few-shot benchmark: each sample carries signal on
/// a per-sample subset of its class pool, binary votes marking that subset,
/// and the matching sample-level precision.
Dataset generate_synthetic(const SynthConfig& cfg);

/// Features CSV: header id,label,f0,...,f{d-1}.
/// Supervision CSV: optional leading "#mode=votes|precision" comment line,
/// then header id,q0,...,q{d-1}.
Dataset load_dataset(const std::string& features_path,
                     const std::optional<std::string>& supervision_path,
                     double epsilon = 1e-10);

void save_dataset(const Dataset& ds, const std::string& features_path,
                  const std::string& supervision_path,
                  const std::string& metadata_path);

struct SplitResult {
    Dataset train;
    Dataset test;
};

/// Stratified per-class split with a seeded shuffle.
SplitResult split(const Dataset& ds, double train_fraction, std::uint64_t seed);

/// Keep only classes whose sample count lies in [min_samples, max_samples],
/// relabeling classes densely.
Dataset filter_by_class_size(const Dataset& ds, int min_samples, int max_samples);

}  // namespace ellipsotron

#endif
