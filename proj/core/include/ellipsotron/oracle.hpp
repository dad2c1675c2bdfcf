#ifndef ELLIPSOTRON_ORACLE_HPP
#define ELLIPSOTRON_ORACLE_HPP

#include <cstdint>
#include <string>

#include "ellipsotron/types.hpp"

namespace ellipsotron {
namespace oracle {

// Brute-force solvers for certifying the closed-form update and the
// ellipsoid-margin condition. Deliberately shares no code with the learner
// or loss implementations.

struct OracleReport {
    double closed_form_objective = 0.0;
    double oracle_objective = 0.0;
    double no_update_objective = 0.0;
    double relative_gap = 0.0;  // (closed - oracle) / max(|oracle|, 1)
    std::string instance;
};

/// Proximal objective of a single online step: half the squared weight change
/// in the per-sample metric plus C times the squared hinge on the fixed
/// pos/neg column pair.
double step_objective(const WeightMatrix& w_new, const WeightMatrix& w_old,
                      const Vec& x, int pos, int neg, const PrecisionDiag& q,
                      double aggressiveness);

/// Numeric minimizer of the step objective over the one-parameter update
/// family, via dense grid search on the dual step size. Requires strictly
/// positive q and a small instance.
WeightMatrix solve_step_numeric(const WeightMatrix& w, const Vec& x, int y,
                                const PrecisionDiag& q, double aggressiveness,
                                long grid_points = 1000000);

/// Monte-Carlo minimum of dw . xhat over the confidence ellipsoid: samples
/// n_dirs random boundary points and returns the smallest score. Converges
/// from above to the closed form as n_dirs grows.
double ellipsoid_min_numeric(const Vec& dw, const Vec& x, const PrecisionDiag& q,
                             long n_dirs, std::uint64_t seed = 12345);

}  // namespace oracle
}  // namespace ellipsotron

#endif
