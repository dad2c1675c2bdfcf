#include "ellipsotron/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ellipsotron {

void check_same_dim(std::size_t a, std::size_t b, const char* where) {
    if (a != b) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

double dot(const Vec& a, const Vec& b) {
    check_same_dim(a.size(), b.size(), "dot");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

double l2_norm(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double mahalanobis_norm(const Vec& x, const PrecisionDiag& q) {
    check_same_dim(x.size(), q.dim(), "mahalanobis_norm");
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double t = q.entries[j] * x[j];
        s += t * t;
    }
    return std::sqrt(s);
}

int predict(const WeightMatrix& w, const Vec& x) {
    if (w.columns.empty()) throw std::invalid_argument("predict: empty weight matrix");
    check_same_dim(w.dim(), x.size(), "predict");
    int best = 0;
    double best_score = dot(w.columns[0], x);
    for (std::size_t c = 1; c < w.columns.size(); ++c) {
        const double s = dot(w.columns[c], x);
        if (s > best_score) {
            best_score = s;
            best = static_cast<int>(c);
        }
    }
    return best;
}

}  // namespace ellipsotron
