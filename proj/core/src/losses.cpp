#include "ellipsotron/losses.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ellipsotron {

namespace {

void check_multiclass(const WeightMatrix& w, const Vec& x, int y) {
    if (w.num_classes() < 2) throw std::invalid_argument("loss: need at least 2 classes");
    check_same_dim(w.dim(), x.size(), "loss");
    if (y < 0 || y >= static_cast<int>(w.num_classes()))
        throw std::invalid_argument("loss: label out of range");
}

// True iff dw has a nonzero entry on a coordinate with q_j > 0.
bool nonzero_on_support(const Vec& dw, const PrecisionDiag& q) {
    for (std::size_t j = 0; j < dw.size(); ++j)
        if (q.entries[j] > 0.0 && dw[j] != 0.0) return true;
    return false;
}

Vec column_diff(const WeightMatrix& w, int pos, int neg) {
    Vec dw(w.dim());
    for (std::size_t j = 0; j < dw.size(); ++j)
        dw[j] = w.columns[pos][j] - w.columns[neg][j];
    return dw;
}

}  // namespace

int hardest_negative(const WeightMatrix& w, const Vec& x, int y) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < static_cast<int>(w.num_classes()); ++c) {
        if (c == y) continue;
        const double s = dot(w.columns[c], x);
        if (s > best_score) {
            best_score = s;
            best = c;
        }
    }
    return best;
}

std::optional<double> ellipsoid_min_score(const Vec& dw, const Vec& x,
                                          const PrecisionDiag& q) {
    check_same_dim(dw.size(), x.size(), "ellipsoid_min_score");
    check_same_dim(dw.size(), q.dim(), "ellipsoid_min_score");
    const bool all_zero = std::all_of(dw.begin(), dw.end(), [](double v) { return v == 0.0; });
    if (all_zero) return std::nullopt;  // infinite radius
    const double score = dot(dw, x);
    if (nonzero_on_support(dw, q)) return score - 1.0;
    return score;  // ellipsoid is a point along every direction dw lives on
}

double binary_ellipsoid_loss(const Vec& w, const Vec& x, int y,
                             const PrecisionDiag& q) {
    if (y != 1 && y != -1) throw std::invalid_argument("binary_ellipsoid_loss: y must be +-1");
    Vec yw(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) yw[j] = y * w[j];
    const auto min_score = ellipsoid_min_score(yw, x, q);
    // Margin certified only when dw is seen by the metric (nonzero on support).
    if (min_score && nonzero_on_support(yw, q) && *min_score > 0.0) return 0.0;
    return std::max(0.0, 1.0 - dot(yw, x));
}

LossOutcome multiclass_ellipsoid_loss(const WeightMatrix& w, const Vec& x, int y,
                                      const PrecisionDiag& q) {
    check_multiclass(w, x, y);
    check_same_dim(w.dim(), q.dim(), "multiclass_ellipsoid_loss");
    const int neg = hardest_negative(w, x, y);
    const Vec dw = column_diff(w, y, neg);
    const double score = dot(dw, x);
    const bool margin_ok = nonzero_on_support(dw, q) && score > 1.0;
    LossOutcome out;
    out.pos_class = y;
    out.neg_class = neg;
    out.value = margin_ok ? 0.0 : std::max(0.0, 1.0 - score);
    out.active = out.value > 0.0;
    return out;
}

LossOutcome hinge_loss_multiclass(const WeightMatrix& w, const Vec& x, int y) {
    check_multiclass(w, x, y);
    const int neg = hardest_negative(w, x, y);
    const Vec dw = column_diff(w, y, neg);
    LossOutcome out;
    out.pos_class = y;
    out.neg_class = neg;
    out.value = std::max(0.0, 1.0 - dot(dw, x));
    out.active = out.value > 0.0;
    return out;
}

LossOutcome feature_scaling_loss(const WeightMatrix& w, const Vec& x, int y,
                                 const PrecisionDiag& q) {
    check_multiclass(w, x, y);
    check_same_dim(w.dim(), q.dim(), "feature_scaling_loss");
    const int neg = hardest_negative(w, x, y);
    const Vec dw = column_diff(w, y, neg);
    Vec scaled(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) scaled[j] = q.entries[j] * x[j];
    LossOutcome out;
    out.pos_class = y;
    out.neg_class = neg;
    out.value = std::max(0.0, 1.0 - dot(dw, scaled));
    out.active = out.value > 0.0;
    return out;
}

}  // namespace ellipsotron
