#include "ellipsotron/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace ellipsotron {

double max_confidence_norm(const std::vector<Sample>& samples, bool sqrt_of_norm) {
    if (samples.empty()) throw std::invalid_argument("max_confidence_norm: empty sample set");
    double best = 0.0;
    for (const Sample& s : samples) {
        if (!s.precision) throw std::invalid_argument("max_confidence_norm: sample '" + s.id +
                                                      "' has no precision");
        double norm = mahalanobis_norm(s.features, *s.precision);
        if (sqrt_of_norm) norm = std::sqrt(norm);
        if (norm > best) best = norm;
    }
    return best;
}

double rademacher_term(const std::vector<Sample>& samples, double w_star_l2,
                       long long n, bool sqrt_of_norm) {
    if (n < 1) throw std::invalid_argument("rademacher_term: n must be >= 1");
    return 2.0 * w_star_l2 * max_confidence_norm(samples, sqrt_of_norm) *
           std::sqrt(2.0 / static_cast<double>(n));
}

double generalization_bound(const BoundInputs& b) {
    if (b.delta <= 0.0 || b.delta >= 1.0)
        throw std::invalid_argument("generalization_bound: delta must be in (0,1)");
    if (b.n < 1) throw std::invalid_argument("generalization_bound: n must be >= 1");
    if (b.loss_upper_bound <= 0.0)
        throw std::invalid_argument("generalization_bound: M_l must be > 0");
    const double n = static_cast<double>(b.n);
    const double complexity = 2.0 * b.w_star_l2 * b.max_sqrt_norm * std::sqrt(2.0 / n);
    const double confidence = b.loss_upper_bound * std::sqrt(std::log(1.0 / b.delta) / (2.0 * n));
    return b.empirical_loss + complexity + confidence;
}

namespace {

int find_group(const Sample& s, const std::vector<PrecisionDiag>& groups) {
    if (!s.precision) throw std::invalid_argument("pad_samples: sample '" + s.id +
                                                  "' has no precision");
    for (std::size_t g = 0; g < groups.size(); ++g)
        if (groups[g].entries == s.precision->entries) return static_cast<int>(g);
    throw std::invalid_argument("pad_samples: sample '" + s.id +
                                "' matches no precision group");
}

}  // namespace

PaddedData pad_samples(const std::vector<Sample>& samples,
                       const std::vector<PrecisionDiag>& groups) {
    if (groups.empty()) throw std::invalid_argument("pad_samples: no groups");
    const std::size_t d = groups[0].dim();
    const std::size_t k = groups.size();
    PaddedData out;
    out.block_precision.entries.reserve(k * d);
    for (const auto& g : groups) {
        check_same_dim(g.dim(), d, "pad_samples");
        out.block_precision.entries.insert(out.block_precision.entries.end(),
                                           g.entries.begin(), g.entries.end());
    }
    out.samples.reserve(samples.size());
    for (const Sample& s : samples) {
        check_same_dim(s.features.size(), d, "pad_samples");
        const int g = find_group(s, groups);
        Sample padded;
        padded.id = s.id;
        padded.label = s.label;
        padded.features.assign(k * d, 0.0);
        std::copy(s.features.begin(), s.features.end(),
                  padded.features.begin() + static_cast<std::ptrdiff_t>(g * d));
        out.samples.push_back(std::move(padded));
        out.group_of_sample.push_back(g);
    }
    return out;
}

PaddingReport verify_padding_identities(const std::vector<Sample>& samples,
                                        const Vec& w,
                                        const std::vector<PrecisionDiag>& groups) {
    const PaddedData padded = pad_samples(samples, groups);
    const std::size_t d = groups[0].dim();
    const std::size_t k = groups.size();
    check_same_dim(w.size(), d, "verify_padding_identities");

    Vec w_rep;
    w_rep.reserve(k * d);
    for (std::size_t g = 0; g < k; ++g) w_rep.insert(w_rep.end(), w.begin(), w.end());

    PaddingReport report;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const int g = padded.group_of_sample[i];
        const double orig_norm = mahalanobis_norm(samples[i].features, groups[g]);
        const double pad_norm = mahalanobis_norm(padded.samples[i].features,
                                                 padded.block_precision);
        report.max_norm_discrepancy =
            std::max(report.max_norm_discrepancy, std::fabs(orig_norm - pad_norm));
        const double orig_inner = dot(w, samples[i].features);
        const double pad_inner = dot(w_rep, padded.samples[i].features);
        report.max_inner_discrepancy =
            std::max(report.max_inner_discrepancy, std::fabs(orig_inner - pad_inner));
    }
    // Squared norms add across blocks of a block-diagonal metric.
    double sum_sq = 0.0;
    for (const auto& g : groups) {
        const double norm = mahalanobis_norm(w, g);
        sum_sq += norm * norm;
    }
    const double rep_norm = mahalanobis_norm(w_rep, padded.block_precision);
    report.weight_norm_discrepancy = std::fabs(rep_norm * rep_norm - sum_sq);
    return report;
}

}  // namespace ellipsotron
