#ifndef ELLIPSOTRON_BOUNDS_HPP
#define ELLIPSOTRON_BOUNDS_HPP

#include <vector>

#include "ellipsotron/types.hpp"

namespace ellipsotron {

struct BoundInputs {
    double empirical_loss = 0.0;
    double w_star_l2 = 0.0;
    double max_sqrt_norm = 0.0;  // max_i sqrt(||x_i||_q) over the sample set
    double loss_upper_bound = 1.0;  // M_l
    double delta = 0.1;
    long long n = 1;
};

/// max_i sqrt(||x_i||_{q_i}) over the sample set. With sqrt_of_norm = false
/// the plain norm is used instead of its square root (comparison variant).
double max_confidence_norm(const std::vector<Sample>& samples, bool sqrt_of_norm = true);

/// 2 * ||w*||_2 * max_i sqrt(||x_i||_{q_i}) * sqrt(2/n).
double rademacher_term(const std::vector<Sample>& samples, double w_star_l2,
                       long long n, bool sqrt_of_norm = true);

/// empirical loss + complexity term + confidence term M_l * sqrt(ln(1/delta)/(2n)).
double generalization_bound(const BoundInputs& b);

/// Block-embedding of samples with k distinct precision vectors into a single
/// shared block-diagonal precision of dimension k*d.
struct PaddedData {
    std::vector<Sample> samples;  // dimension k*d, precision cleared
    PrecisionDiag block_precision;
    std::vector<int> group_of_sample;
};

PaddedData pad_samples(const std::vector<Sample>& samples,
                       const std::vector<PrecisionDiag>& groups);

struct PaddingReport {
    double max_norm_discrepancy = 0.0;   // padded vs group sample norms
    double max_inner_discrepancy = 0.0;  // w'.x' vs w.x
    double weight_norm_discrepancy = 0.0;  // ||w'|| vs sum over groups
};

/// Checks the three identities behind the block-embedding construction, with
/// w replicated once per group.
PaddingReport verify_padding_identities(const std::vector<Sample>& samples,
                                        const Vec& w,
                                        const std::vector<PrecisionDiag>& groups);

}  // namespace ellipsotron

#endif
