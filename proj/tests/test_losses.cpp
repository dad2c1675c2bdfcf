#include <random>
#include <stdexcept>

#include "doctest.h"

#include "ellipsotron/losses.hpp"
#include "ellipsotron/oracle.hpp"

using namespace ellipsotron;

TEST_CASE("ellipsoid_min_score closed form") {
    auto r = ellipsoid_min_score({2, 0}, {1, 1}, {{1, 1}});
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(1.0));

    // The radius self-normalizes: the value does not depend on the metric.
    auto r2 = ellipsoid_min_score({2, 0}, {1, 1}, {{0.5, 3}});
    REQUIRE(r2.has_value());
    CHECK(*r2 == doctest::Approx(1.0));
}

TEST_CASE("ellipsoid_min_score with zero weights is unbounded below") {
    CHECK(!ellipsoid_min_score({0, 0}, {1, 1}, {{1, 1}}).has_value());
}

TEST_CASE("ellipsoid_min_score when dw misses the support") {
    // dw lives on a zero-precision coordinate: ellipsoid degenerates there.
    auto r = ellipsoid_min_score({0, 2}, {1, 1}, {{1, 0}});
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(2.0));  // raw score
}

TEST_CASE("binary ellipsoid loss") {
    CHECK(binary_ellipsoid_loss({2, 0}, {1, 0}, +1, {{1, 1}}) == doctest::Approx(0.0));
    CHECK(binary_ellipsoid_loss({0, 0}, {1, 0}, +1, {{1, 1}}) == doctest::Approx(1.0));
    CHECK(binary_ellipsoid_loss({0.5, 0}, {1, 0}, +1, {{1, 1}}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(binary_ellipsoid_loss({1, 0}, {1, 0}, 0, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("multiclass ellipsoid loss with zero weights") {
    WeightMatrix w = WeightMatrix::zeros(3, 2);
    auto out = multiclass_ellipsoid_loss(w, {1, 0}, 0, {{1, 1}});
    CHECK(out.value == doctest::Approx(1.0));
    CHECK(out.neg_class == 1);  // tie-break among non-true classes
    CHECK(out.active);
}

TEST_CASE("multiclass ellipsoid loss hand instances") {
    WeightMatrix w{{{3, 0}, {1, 0}, {0, 0}}};
    auto satisfied = multiclass_ellipsoid_loss(w, {1, 0}, 0, {{1, 1}});
    CHECK(satisfied.value == doctest::Approx(0.0));
    CHECK(!satisfied.active);

    auto violated = multiclass_ellipsoid_loss(w, {1, 0}, 1, {{1, 1}});
    CHECK(violated.neg_class == 0);
    CHECK(violated.value == doctest::Approx(3.0));  // 1 - (-2)
}

TEST_CASE("multiclass hinge hand instances") {
    WeightMatrix w = WeightMatrix::zeros(2, 2);
    CHECK(hinge_loss_multiclass(w, {1, 1}, 0).value == doctest::Approx(1.0));

    WeightMatrix w2{{{1.5, 0}, {0, 0}}};
    CHECK(hinge_loss_multiclass(w2, {1, 0}, 0).value == doctest::Approx(0.0));

    WeightMatrix w3{{{0.25, 0}, {0, 0}}};
    CHECK(hinge_loss_multiclass(w3, {1, 0}, 0).value == doctest::Approx(0.75));
}

TEST_CASE("feature scaling loss hand instances") {
    WeightMatrix zeros = WeightMatrix::zeros(2, 2);
    CHECK(feature_scaling_loss(zeros, {1, 1}, 0, {{1, 0}}).value == doctest::Approx(1.0));

    WeightMatrix w{{{2, 2}, {0, 0}}};
    CHECK(feature_scaling_loss(w, {1, 1}, 0, {{1, 0}}).value == doctest::Approx(0.0));
    CHECK(feature_scaling_loss(w, {1, 1}, 0, {{0, 0}}).value == doctest::Approx(1.0));
}

namespace {

struct RandomInstance {
    WeightMatrix w;
    Vec x;
    PrecisionDiag q;
    int y;
};

RandomInstance random_instance(std::mt19937_64& rng, double q_lo = 0.05) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RandomInstance inst;
    const int d = 2 + static_cast<int>(rng() % 4);
    const int m = 2 + static_cast<int>(rng() % 3);
    inst.w = WeightMatrix::zeros(m, d);
    for (auto& col : inst.w.columns)
        for (double& v : col) v = gauss(rng);
    inst.x.resize(d);
    for (double& v : inst.x) v = gauss(rng);
    inst.q.entries.resize(d);
    for (double& v : inst.q.entries) v = q_lo + (1.0 - q_lo) * unit(rng);
    inst.y = static_cast<int>(rng() % m);
    return inst;
}

}  // namespace

TEST_CASE("ellipsoid loss equals hinge for all-ones precision") {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 200; ++i) {
        auto inst = random_instance(rng);
        const auto el = multiclass_ellipsoid_loss(inst.w, inst.x, inst.y,
                                                  PrecisionDiag::ones(inst.x.size()));
        const auto hinge = hinge_loss_multiclass(inst.w, inst.x, inst.y);
        CHECK(el.value == hinge.value);
        CHECK(el.neg_class == hinge.neg_class);
    }
}

TEST_CASE("feature scaling loss with ones equals hinge") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto inst = random_instance(rng);
        CHECK(feature_scaling_loss(inst.w, inst.x, inst.y,
                                   PrecisionDiag::ones(inst.x.size()))
                  .value == hinge_loss_multiclass(inst.w, inst.x, inst.y).value);
    }
}

TEST_CASE("margin test and loss value do not depend on q") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
        auto inst = random_instance(rng);
        const auto a = multiclass_ellipsoid_loss(inst.w, inst.x, inst.y, inst.q);
        auto inst2 = inst;
        for (double& v : inst2.q.entries) v *= 7.5;
        const auto b = multiclass_ellipsoid_loss(inst2.w, inst2.x, inst2.y, inst2.q);
        CHECK(a.active == b.active);
        CHECK(a.value == b.value);
        // Cross-check the margin condition against the Monte-Carlo minimum.
        if (i < 10) {
            Vec dw(inst.x.size());
            for (std::size_t j = 0; j < dw.size(); ++j)
                dw[j] = inst.w.columns[a.pos_class][j] - inst.w.columns[a.neg_class][j];
            if (l2_norm(dw) > 1e-9) {
                const double mc = oracle::ellipsoid_min_numeric(dw, inst.x, inst.q, 20000, rng());
                CHECK((mc > 0.0) == !a.active);
            }
        }
    }
}

TEST_CASE("loss is continuous along a line in W") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss;
    auto inst = random_instance(rng);
    WeightMatrix dir = inst.w;
    for (auto& col : dir.columns)
        for (double& v : col) v = gauss(rng);
    double prev = -1.0;
    const double step = 1e-4;
    for (int i = 0; i <= 2000; ++i) {
        WeightMatrix w = inst.w;
        for (std::size_t c = 0; c < w.num_classes(); ++c)
            for (std::size_t j = 0; j < w.dim(); ++j)
                w.columns[c][j] += i * step * dir.columns[c][j];
        const double v = multiclass_ellipsoid_loss(w, inst.x, inst.y, inst.q).value;
        CHECK(v >= 0.0);
        if (prev >= 0.0) CHECK(std::fabs(v - prev) < 0.05);
        prev = v;
    }
}
