#ifndef ELLIPSOTRON_EVAL_HPP
#define ELLIPSOTRON_EVAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ellipsotron/data.hpp"
#include "ellipsotron/learners.hpp"

namespace ellipsotron {

enum class SupervisionMode { sample, class_soft, class_threshold, cross_classes, none };

SupervisionMode supervision_mode_from_string(const std::string& s);
std::string to_string(SupervisionMode m);

struct ExperimentSpec {
    std::vector<LearnerConfig> learners;
    SupervisionMode supervision = SupervisionMode::sample;
    std::vector<int> budgets = {5, 10, 20};  // training samples per class
    int num_seeds = 5;
    int eval_every = 10;  // test-error snapshot schedule, in steps
    double train_fraction = 0.5;
    int threshold_theta = 4;
    std::uint64_t base_seed = 0;
};

struct CurvePoint {
    int step = 0;
    double test_error = 0.0;
};

struct CellResult {
    std::string learner;
    int budget = 0;
    std::uint64_t seed = 0;
    double cum_error = 0.0;  // mistakes / steps at end of stream
    double cum_loss = 0.0;   // total loss / steps at end of stream
    double final_test_error = 0.0;
    std::vector<CurvePoint> curve;
};

struct Aggregate {
    std::string learner;
    int budget = 0;
    double cum_error_mean = 0.0, cum_error_stderr = 0.0;
    double cum_loss_mean = 0.0, cum_loss_stderr = 0.0;
    double test_error_mean = 0.0, test_error_stderr = 0.0;
    // Mean/stderr test-error curve across seeds, on the common step grid.
    std::vector<int> curve_steps;
    std::vector<double> curve_mean;
    std::vector<double> curve_stderr;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<CellResult> cells;
    std::vector<Aggregate> aggregates;
};

struct MetricsRow {
    int step = 0;
    double cum_error_avg = 0.0;
    double cum_loss_avg = 0.0;
};

/// Running averages of mistakes and losses over the first n steps.
std::vector<MetricsRow> cumulative_metrics(const std::vector<StepRecord>& records,
                                           const std::vector<int>& at);

/// Fraction of misclassified test samples. Precision vectors are never used.
double test_error(const WeightMatrix& w, const Dataset& test);

ExperimentResult run_experiment(const ExperimentSpec& spec, const Dataset& dataset);

/// Writes summary.json plus one step,mean,stderr CSV per (learner, budget).
void emit_results(const ExperimentResult& result, const std::string& out_dir,
                  const std::string& config_hash = "");

}  // namespace ellipsotron

#endif
