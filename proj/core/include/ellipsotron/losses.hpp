#ifndef ELLIPSOTRON_LOSSES_HPP
#define ELLIPSOTRON_LOSSES_HPP

#include <optional>

#include "ellipsotron/types.hpp"

namespace ellipsotron {

struct LossOutcome {
    double value = 0.0;
    int pos_class = 0;
    int neg_class = 0;
    bool active = false;  // value > 0
};

/// Minimum of dw . xhat over the confidence ellipsoid around x whose radius
/// self-normalizes by the weight norm in the same metric.
///
/// Closed form for diagonal metrics: dw . x - 1 whenever dw has a nonzero
/// component on the support of q. If dw vanishes on the support but is
/// nonzero elsewhere the ellipsoid degenerates to a point along those
/// directions and the raw score dw . x is returned. A dw of exactly zero
/// makes the radius infinite: nullopt marks "unbounded below".
std::optional<double> ellipsoid_min_score(const Vec& dw, const Vec& x,
                                          const PrecisionDiag& q);

/// Binary ellipsoid-margin loss: 0 if every point of the ellipsoid is on the
/// correct side, otherwise 1 - y * (w . x).
double binary_ellipsoid_loss(const Vec& w, const Vec& x, int y,
                             const PrecisionDiag& q);

/// Multiclass ellipsoid-margin loss against the hardest negative class.
LossOutcome multiclass_ellipsoid_loss(const WeightMatrix& w, const Vec& x, int y,
                                      const PrecisionDiag& q);

/// Standard multiclass hinge against the hardest negative.
LossOutcome hinge_loss_multiclass(const WeightMatrix& w, const Vec& x, int y);

/// Hinge on the rescaled sample q .* x. The hardest negative is still chosen
/// on the unscaled sample, matching the prediction rule used at test time.
LossOutcome feature_scaling_loss(const WeightMatrix& w, const Vec& x, int y,
                                 const PrecisionDiag& q);

/// Hardest false label: argmax over c != y of w_c . x, ties to lowest index.
int hardest_negative(const WeightMatrix& w, const Vec& x, int y);

}  // namespace ellipsotron

#endif
