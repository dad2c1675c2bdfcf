#ifndef ELLIPSOTRON_TYPES_HPP
#define ELLIPSOTRON_TYPES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ellipsotron {

/// Dense feature vector, dimension fixed per dataset.
using Vec = std::vector<double>;

/// Diagonal of the per-sample confidence (precision) matrix.
/// Larger entries mean higher confidence in that feature; zero means the
/// feature carries no usable information for this sample.
struct PrecisionDiag {
    Vec entries;

    std::size_t dim() const { return entries.size(); }
    static PrecisionDiag ones(std::size_t d) { return {Vec(d, 1.0)}; }
};

/// One weight column per class.
struct WeightMatrix {
    std::vector<Vec> columns;

    std::size_t num_classes() const { return columns.size(); }
    std::size_t dim() const { return columns.empty() ? 0 : columns[0].size(); }
    static WeightMatrix zeros(std::size_t m, std::size_t d) {
        return {std::vector<Vec>(m, Vec(d, 0.0))};
    }
};

struct Sample {
    std::string id;
    Vec features;
    int label = 0;
    std::optional<PrecisionDiag> precision;
    std::optional<std::vector<std::uint8_t>> votes;  // binary relevance votes
};

double dot(const Vec& a, const Vec& b);
double l2_norm(const Vec& x);

/// sqrt(sum_j q_j^2 x_j^2): the Mahalanobis norm induced by the diagonal
/// precision q. Reduces to the L2 norm for q = ones.
double mahalanobis_norm(const Vec& x, const PrecisionDiag& q);

/// argmax_c w_c . x, ties broken toward the lowest class index.
int predict(const WeightMatrix& w, const Vec& x);

void check_same_dim(std::size_t a, std::size_t b, const char* where);

}  // namespace ellipsotron

#endif
