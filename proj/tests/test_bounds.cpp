#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "ellipsotron/bounds.hpp"

using namespace ellipsotron;

namespace {

Sample make_sample(Vec x, Vec q, int label = 0, std::string id = "s") {
    Sample s;
    s.id = std::move(id);
    s.features = std::move(x);
    s.label = label;
    s.precision = PrecisionDiag{std::move(q)};
    return s;
}

}  // namespace

TEST_CASE("rademacher_term hand values") {
    CHECK(rademacher_term({make_sample({0, 0}, {1, 1})}, 1.0, 1) == doctest::Approx(0.0));
    // x=(3,4), q=(1,1), n=2: 2 * sqrt(sqrt(25)) ... norm 5, sqrt -> sqrt(5), sqrt(2/2)=1
    CHECK(rademacher_term({make_sample({3, 4}, {1, 1})}, 1.0, 2) ==
          doctest::Approx(2.0 * std::sqrt(5.0)).epsilon(1e-12));
    CHECK(rademacher_term({make_sample({3, 4}, {1, 0})}, 1.0, 2) ==
          doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(rademacher_term({}, 1.0, 1), std::invalid_argument);
}

TEST_CASE("rademacher_term is monotone in precision entries") {
    std::mt19937_64 rng(40);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        Vec x(5), q(5);
        for (double& v : x) v = gauss(rng);
        for (double& v : q) v = unit(rng);
        Vec q_bigger = q;
        q_bigger[rng() % 5] += unit(rng);
        CHECK(rademacher_term({make_sample(x, q_bigger)}, 1.0, 10) >=
              rademacher_term({make_sample(x, q)}, 1.0, 10));
    }
}

TEST_CASE("bound term only involves the precision support") {
    Vec x{1.0, 2.0, 3.0, 4.0};
    Vec q{1.0, 0.0, 0.5, 0.0};
    Vec x_zeroed{1.0, 0.0, 3.0, 0.0};
    CHECK(rademacher_term({make_sample(x, q)}, 1.0, 4) ==
          rademacher_term({make_sample(x_zeroed, q)}, 1.0, 4));
}

TEST_CASE("generalization_bound hand values") {
    BoundInputs b;
    b.loss_upper_bound = 1.0;
    b.delta = 0.1;
    b.n = 50;
    CHECK(generalization_bound(b) == doctest::Approx(std::sqrt(std::log(10.0) / 100.0)).epsilon(1e-9));

    b.empirical_loss = 0.3;
    b.w_star_l2 = 2.0;
    b.max_sqrt_norm = 1.5;
    b.n = 1000000000000LL;
    CHECK(generalization_bound(b) == doctest::Approx(0.3).epsilon(1e-5));

    b.n = 50;
    b.delta = 1.0;
    CHECK_THROWS_AS(generalization_bound(b), std::invalid_argument);
    b.delta = 0.0;
    CHECK_THROWS_AS(generalization_bound(b), std::invalid_argument);
}

TEST_CASE("generalization_bound is monotone in n and delta") {
    BoundInputs b;
    b.empirical_loss = 0.2;
    b.w_star_l2 = 1.0;
    b.max_sqrt_norm = 1.0;
    b.delta = 0.1;
    b.n = 100;
    const double base = generalization_bound(b);
    auto larger_n = b;
    larger_n.n = 200;
    CHECK(generalization_bound(larger_n) < base);
    auto larger_delta = b;
    larger_delta.delta = 0.2;
    CHECK(generalization_bound(larger_delta) < base);
}

TEST_CASE("pad_samples block embedding") {
    std::vector<PrecisionDiag> groups{{{1.0, 0.5}}, {{0.2, 0.9}}};
    std::vector<Sample> samples{make_sample({1, 2}, {1.0, 0.5}, 0, "a"),
                                make_sample({1, 2}, {0.2, 0.9}, 1, "b")};
    auto padded = pad_samples(samples, groups);
    CHECK(padded.samples[0].features == Vec{1, 2, 0, 0});
    CHECK(padded.samples[1].features == Vec{0, 0, 1, 2});
    CHECK(padded.block_precision.entries == Vec{1.0, 0.5, 0.2, 0.9});

    // k = 1 keeps the sample intact
    auto single = pad_samples({samples[0]}, {groups[0]});
    CHECK(single.samples[0].features == Vec{1, 2});

    CHECK_THROWS_AS(pad_samples({make_sample({1, 2}, {9, 9}, 0, "odd")}, groups),
                    std::invalid_argument);
}

TEST_CASE("padding identities hold to 1e-12") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 1; k <= 3; ++k) {
        const int d = 4;
        std::vector<PrecisionDiag> groups(k);
        for (auto& g : groups) {
            g.entries.resize(d);
            for (double& v : g.entries) v = unit(rng);
        }
        std::vector<Sample> samples;
        for (int i = 0; i < 20; ++i)
            samples.push_back(make_sample(
                [&] {
                    Vec x(d);
                    for (double& v : x) v = gauss(rng);
                    return x;
                }(),
                groups[rng() % k].entries, 0, "s" + std::to_string(i)));
        Vec w(d);
        for (double& v : w) v = gauss(rng);
        auto report = verify_padding_identities(samples, w, groups);
        CHECK(report.max_norm_discrepancy <= 1e-12);
        CHECK(report.max_inner_discrepancy <= 1e-12);
        CHECK(report.weight_norm_discrepancy <= 1e-12);
    }
}

TEST_CASE("padding keeps the single-group sample norm") {
    // x=(1,2) with q=(1,0): only the first coordinate counts
    std::vector<PrecisionDiag> groups{{{1.0, 0.0}}, {{0.5, 0.5}}};
    auto samples = std::vector<Sample>{make_sample({1, 2}, {1.0, 0.0})};
    auto padded = pad_samples(samples, groups);
    CHECK(mahalanobis_norm(padded.samples[0].features, padded.block_precision) ==
          doctest::Approx(1.0).epsilon(1e-12));
}
