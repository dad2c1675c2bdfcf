#ifndef ELLIPSOTRON_SUPERVISION_HPP
#define ELLIPSOTRON_SUPERVISION_HPP

#include <cstdint>
#include <vector>

#include "ellipsotron/types.hpp"

namespace ellipsotron {

using VoteVec = std::vector<std::uint8_t>;

/// Per class: one binary vote vector per training sample of that class.
struct VoteTable {
    std::vector<std::vector<VoteVec>> per_class;
};

struct AggregatedPrecision {
    PrecisionDiag q;
    bool degenerate = false;  // no feature voted at all, epsilon fallback
};

/// Sample-level encoding: 1 for voted-relevant features, epsilon otherwise.
PrecisionDiag sample_level(const VoteVec& votes, double epsilon);

/// Square root of the per-feature fraction of positive votes, L2-normalized.
AggregatedPrecision class_soft(const std::vector<VoteVec>& votes, double epsilon);

/// Binary per-feature relevance: 1 iff the vote sum strictly exceeds theta.
AggregatedPrecision class_threshold(const std::vector<VoteVec>& votes, int theta,
                                    double epsilon, bool exact_zero = false);

/// Global binary relevance shared across all classes: 1 iff the feature was
/// voted at least once anywhere in the training set.
AggregatedPrecision cross_classes(const VoteTable& table, double epsilon,
                                  bool exact_zero = false);

}  // namespace ellipsotron

#endif
