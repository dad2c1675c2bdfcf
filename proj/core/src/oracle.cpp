#include "ellipsotron/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ellipsotron {
namespace oracle {

namespace {

void check_strictly_positive(const PrecisionDiag& q, const char* where) {
    for (double v : q.entries)
        if (v <= 0.0) throw std::invalid_argument(std::string(where) +
                                                  ": requires strictly positive precision");
}

double inner(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

int argmax_negative(const WeightMatrix& w, const Vec& x, int y) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < static_cast<int>(w.num_classes()); ++c) {
        if (c == y) continue;
        const double s = inner(w.columns[c], x);
        if (s > best_score) {
            best_score = s;
            best = c;
        }
    }
    return best;
}

}  // namespace

double step_objective(const WeightMatrix& w_new, const WeightMatrix& w_old,
                      const Vec& x, int pos, int neg, const PrecisionDiag& q,
                      double aggressiveness) {
    check_strictly_positive(q, "step_objective");
    double prox = 0.0;
    for (std::size_t c = 0; c < w_old.num_classes(); ++c) {
        for (std::size_t j = 0; j < w_old.dim(); ++j) {
            const double delta = (w_new.columns[c][j] - w_old.columns[c][j]) / q.entries[j];
            prox += delta * delta;
        }
    }
    double margin = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        margin += (w_new.columns[pos][j] - w_new.columns[neg][j]) * x[j];
    const double hinge = std::max(0.0, 1.0 - margin);
    return 0.5 * prox + aggressiveness * hinge * hinge;
}

WeightMatrix solve_step_numeric(const WeightMatrix& w, const Vec& x, int y,
                                const PrecisionDiag& q, double aggressiveness,
                                long grid_points) {
    if (w.dim() > 8 || w.num_classes() > 6)
        throw std::invalid_argument("solve_step_numeric: instance too large");
    check_strictly_positive(q, "solve_step_numeric");
    if (grid_points < 2) throw std::invalid_argument("solve_step_numeric: grid too small");

    const int pos = y;
    const int neg = argmax_negative(w, x, y);
    double margin = 0.0;
    double u_sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        margin += (w.columns[pos][j] - w.columns[neg][j]) * x[j];
        const double u = q.entries[j] * x[j];
        u_sq += u * u;
    }
    const double loss0 = 1.0 - margin;
    if (loss0 <= 0.0) return w;  // inactive, no update

    // Candidate family: the pos/neg columns move by +-tau * (q^2 .* x). Along
    // this line the objective reduces to tau^2 * u_sq + C * hinge(tau)^2 with
    // hinge(tau) = max(0, loss0 - 2 * u_sq * tau).
    const double tau_hi = 2.0 * aggressiveness * std::max(loss0, 1.0);
    double best_tau = 0.0;
    double best_obj = std::numeric_limits<double>::infinity();
    for (long i = 0; i < grid_points; ++i) {
        const double tau = tau_hi * static_cast<double>(i) /
                           static_cast<double>(grid_points - 1);
        const double hinge = std::max(0.0, loss0 - 2.0 * u_sq * tau);
        const double obj = tau * tau * u_sq + aggressiveness * hinge * hinge;
        if (obj < best_obj) {
            best_obj = obj;
            best_tau = tau;
        }
    }
    WeightMatrix out = w;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double delta = best_tau * q.entries[j] * q.entries[j] * x[j];
        out.columns[pos][j] += delta;
        out.columns[neg][j] -= delta;
    }
    return out;
}

double ellipsoid_min_numeric(const Vec& dw, const Vec& x, const PrecisionDiag& q,
                             long n_dirs, std::uint64_t seed) {
    check_strictly_positive(q, "ellipsoid_min_numeric");
    if (n_dirs < 1) throw std::invalid_argument("ellipsoid_min_numeric: n_dirs must be >= 1");
    // Weight norm in the sample metric: ||diag(1/q) * dw||.
    double dw_norm_sq = 0.0;
    for (std::size_t j = 0; j < dw.size(); ++j) {
        const double t = dw[j] / q.entries[j];
        dw_norm_sq += t * t;
    }
    if (dw_norm_sq == 0.0)
        throw std::invalid_argument("ellipsoid_min_numeric: degenerate radius (zero weight norm)");
    const double radius = 1.0 / std::sqrt(dw_norm_sq);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double center_score = inner(dw, x);
    double best = std::numeric_limits<double>::infinity();
    Vec dir(dw.size());
    for (long i = 0; i < n_dirs; ++i) {
        double norm_sq = 0.0;
        for (double& v : dir) {
            v = gauss(rng);
            norm_sq += v * v;
        }
        if (norm_sq == 0.0) continue;
        const double scale = radius / std::sqrt(norm_sq);
        // Boundary point xhat = x + S * (radius * dir / |dir|), S = diag(1/q).
        double score = center_score;
        for (std::size_t j = 0; j < dw.size(); ++j)
            score += dw[j] * dir[j] * scale / q.entries[j];
        if (score < best) best = score;
    }
    return best;
}

}  // namespace oracle
}  // namespace ellipsotron
