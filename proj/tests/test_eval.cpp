#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "json.hpp"

#include "ellipsotron/eval.hpp"

using namespace ellipsotron;
namespace fs = std::filesystem;

namespace {

std::vector<StepRecord> make_records(const std::vector<std::pair<bool, double>>& rows) {
    std::vector<StepRecord> out;
    int step = 0;
    for (auto [mistake, loss] : rows) {
        StepRecord r;
        r.step = step++;
        r.mistake = mistake;
        r.loss = loss;
        out.push_back(r);
    }
    return out;
}

Dataset small_synth(std::uint64_t seed = 3) {
    SynthConfig cfg;
    cfg.dim = 15;
    cfg.num_classes = 3;
    cfg.pool_size = 4;
    cfg.relevant_per_sample = 2;
    cfg.samples_per_class = 12;
    cfg.seed = seed;
    return generate_synthetic(cfg);
}

}  // namespace

TEST_CASE("cumulative_metrics counting") {
    auto records = make_records({{true, 1.0}, {false, 0.5}, {true, 0.0}, {true, 0.2}, {false, 0.3}});
    auto rows = cumulative_metrics(records, {3, 5});
    CHECK(rows[0].cum_error_avg == doctest::Approx(2.0 / 3.0));
    CHECK(rows[0].cum_loss_avg == doctest::Approx(0.5));
    CHECK(rows[1].cum_error_avg == doctest::Approx(0.6));

    auto zero_loss = cumulative_metrics(make_records({{false, 0.0}, {false, 0.0}}), {2});
    CHECK(zero_loss[0].cum_loss_avg == doctest::Approx(0.0));

    CHECK_THROWS_AS(cumulative_metrics(records, {6}), std::invalid_argument);
}

TEST_CASE("test_error basics") {
    Dataset test;
    test.dim = 2;
    test.num_classes = 2;
    Sample a;
    a.id = "a";
    a.features = {1, 0};
    a.label = 0;
    Sample b;
    b.id = "b";
    b.features = {0, 1};
    b.label = 1;
    test.samples = {a, b};

    CHECK(test_error(WeightMatrix::zeros(2, 2), test) == doctest::Approx(0.5));
    WeightMatrix sep{{{1, 0}, {0, 1}}};
    CHECK(test_error(sep, test) == doctest::Approx(0.0));
    CHECK_THROWS_AS(test_error(sep, Dataset{}), std::invalid_argument);
}

TEST_CASE("test_error on random labels is near half") {
    std::mt19937_64 rng(50);
    std::normal_distribution<double> gauss;
    Dataset test;
    test.dim = 4;
    test.num_classes = 2;
    for (int i = 0; i < 1000; ++i) {
        Sample s;
        s.id = std::to_string(i);
        s.features.resize(4);
        for (double& v : s.features) v = gauss(rng);
        s.label = static_cast<int>(rng() % 2);
        test.samples.push_back(std::move(s));
    }
    WeightMatrix w = WeightMatrix::zeros(2, 4);
    for (auto& col : w.columns)
        for (double& v : col) v = gauss(rng);
    CHECK(test_error(w, test) == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("run_experiment determinism and stream sharing") {
    Dataset ds = small_synth();
    ExperimentSpec spec;
    spec.learners = {{LearnerKind::ellipsotron, 1.0, 1e-10}, {LearnerKind::lean, 1.0, 1e-10}};
    spec.budgets = {4};
    spec.num_seeds = 2;
    spec.eval_every = 2;
    auto a = run_experiment(spec, ds);
    auto b = run_experiment(spec, ds);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].cum_error == b.cells[i].cum_error);
        CHECK(a.cells[i].cum_loss == b.cells[i].cum_loss);
        REQUIRE(a.cells[i].curve.size() == b.cells[i].curve.size());
        for (std::size_t p = 0; p < a.cells[i].curve.size(); ++p)
            CHECK(a.cells[i].curve[p].test_error == b.cells[i].curve[p].test_error);
    }
}

TEST_CASE("duplicate learner configs produce identical cells") {
    Dataset ds = small_synth();
    ExperimentSpec spec;
    spec.learners = {{LearnerKind::ellipsotron, 1.0, 1e-10},
                     {LearnerKind::ellipsotron, 1.0, 1e-10}};
    spec.budgets = {4};
    spec.num_seeds = 1;
    auto r = run_experiment(spec, ds);
    REQUIRE(r.cells.size() == 2);
    CHECK(r.cells[0].cum_error == r.cells[1].cum_error);
    CHECK(r.cells[0].cum_loss == r.cells[1].cum_loss);
    CHECK(r.cells[0].final_test_error == r.cells[1].final_test_error);
}

TEST_CASE("aggregates are recomputable from per-seed cells") {
    Dataset ds = small_synth();
    ExperimentSpec spec;
    spec.learners = {{LearnerKind::ellipsotron, 1.0, 1e-10}};
    spec.budgets = {3, 5};
    spec.num_seeds = 3;
    auto r = run_experiment(spec, ds);
    for (const Aggregate& agg : r.aggregates) {
        double sum = 0.0;
        int n = 0;
        for (const CellResult& c : r.cells)
            if (c.learner == agg.learner && c.budget == agg.budget) {
                sum += c.cum_error;
                ++n;
            }
        CHECK(n == spec.num_seeds);
        CHECK(agg.cum_error_mean == sum / n);
        CHECK(agg.cum_error_mean >= 0.0);
        CHECK(agg.cum_error_mean <= 1.0);
        CHECK(agg.test_error_mean >= 0.0);
        CHECK(agg.test_error_mean <= 1.0);
    }
}

TEST_CASE("run_experiment rejects budgets larger than the training split") {
    Dataset ds = small_synth();
    ExperimentSpec spec;
    spec.learners = {{LearnerKind::lean, 1.0, 1e-10}};
    spec.budgets = {1000};
    spec.num_seeds = 1;
    CHECK_THROWS_AS(run_experiment(spec, ds), std::runtime_error);
}

TEST_CASE("emit_results writes a parseable summary and curves") {
    Dataset ds = small_synth();
    ExperimentSpec spec;
    spec.learners = {{LearnerKind::ellipsotron, 1.0, 1e-10}, {LearnerKind::lean, 1.0, 1e-10}};
    spec.budgets = {3, 5};
    spec.num_seeds = 2;
    auto r = run_experiment(spec, ds);

    const fs::path dir = fs::temp_directory_path() / "ellipsotron_tests" / "emit";
    fs::remove_all(dir);
    emit_results(r, dir.string(), "deadbeef");

    std::ifstream in(dir / "summary.json");
    REQUIRE(in.good());
    nlohmann::json summary;
    in >> summary;
    CHECK(summary["config_hash"] == "deadbeef");
    REQUIRE(summary["results"].size() == 4);  // 2 learners x 2 budgets
    for (const auto& entry : summary["results"]) {
        bool found = false;
        for (const Aggregate& agg : r.aggregates) {
            if (agg.learner == entry["config"] && agg.budget == entry["budget"]) {
                CHECK(entry["cum_error"]["mean"].get<double>() == agg.cum_error_mean);
                CHECK(entry["cum_loss"]["mean"].get<double>() == agg.cum_loss_mean);
                found = true;
            }
        }
        CHECK(found);
        CHECK(fs::exists(dir / entry["curve_file"].get<std::string>()));
    }

    CHECK_THROWS_AS(emit_results(ExperimentResult{}, dir.string(), ""), std::runtime_error);
}
