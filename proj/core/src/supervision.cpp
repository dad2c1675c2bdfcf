#include "ellipsotron/supervision.hpp"

#include <cmath>
#include <stdexcept>

namespace ellipsotron {

namespace {

void check_binary(const VoteVec& v) {
    for (auto b : v)
        if (b != 0 && b != 1) throw std::invalid_argument("votes must be 0/1");
}

// 0/1 relevance vector -> precision diag, with 0 mapped to epsilon unless
// exact zeros were requested.
AggregatedPrecision encode_binary(const Vec& s, double epsilon, bool exact_zero) {
    AggregatedPrecision out;
    out.q.entries.resize(s.size());
    bool any = false;
    for (std::size_t j = 0; j < s.size(); ++j) {
        any = any || s[j] > 0.0;
        out.q.entries[j] = s[j] > 0.0 ? 1.0 : (exact_zero ? 0.0 : epsilon);
    }
    out.degenerate = !any;
    return out;
}

}  // namespace

PrecisionDiag sample_level(const VoteVec& votes, double epsilon) {
    check_binary(votes);
    PrecisionDiag q;
    q.entries.resize(votes.size());
    for (std::size_t j = 0; j < votes.size(); ++j)
        q.entries[j] = votes[j] ? 1.0 : epsilon;
    return q;
}

AggregatedPrecision class_soft(const std::vector<VoteVec>& votes, double epsilon) {
    if (votes.empty()) throw std::invalid_argument("class_soft: no votes");
    const std::size_t d = votes[0].size();
    Vec pre(d, 0.0);
    for (const auto& v : votes) {
        check_binary(v);
        check_same_dim(v.size(), d, "class_soft");
        for (std::size_t j = 0; j < d; ++j) pre[j] += v[j];
    }
    for (std::size_t j = 0; j < d; ++j)
        pre[j] = std::sqrt(pre[j] / static_cast<double>(votes.size()));
    const double norm = l2_norm(pre);
    AggregatedPrecision out;
    if (norm == 0.0) {
        out.q.entries.assign(d, epsilon);
        out.degenerate = true;
        return out;
    }
    out.q.entries.resize(d);
    for (std::size_t j = 0; j < d; ++j) out.q.entries[j] = pre[j] / norm;
    return out;
}

AggregatedPrecision class_threshold(const std::vector<VoteVec>& votes, int theta,
                                    double epsilon, bool exact_zero) {
    if (votes.empty()) throw std::invalid_argument("class_threshold: no votes");
    const std::size_t d = votes[0].size();
    Vec sums(d, 0.0);
    for (const auto& v : votes) {
        check_binary(v);
        check_same_dim(v.size(), d, "class_threshold");
        for (std::size_t j = 0; j < d; ++j) sums[j] += v[j];
    }
    Vec s(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) s[j] = sums[j] > theta ? 1.0 : 0.0;  // strict
    return encode_binary(s, epsilon, exact_zero);
}

AggregatedPrecision cross_classes(const VoteTable& table, double epsilon, bool exact_zero) {
    std::size_t d = 0;
    for (const auto& cls : table.per_class)
        if (!cls.empty()) {
            d = cls[0].size();
            break;
        }
    if (d == 0) throw std::invalid_argument("cross_classes: empty vote table");
    Vec s(d, 0.0);
    for (const auto& cls : table.per_class)
        for (const auto& v : cls) {
            check_binary(v);
            check_same_dim(v.size(), d, "cross_classes");
            for (std::size_t j = 0; j < d; ++j)
                if (v[j]) s[j] = 1.0;
        }
    return encode_binary(s, epsilon, exact_zero);
}

}  // namespace ellipsotron
