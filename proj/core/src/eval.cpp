#include "ellipsotron/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "json.hpp"

#include "ellipsotron/supervision.hpp"

namespace ellipsotron {

SupervisionMode supervision_mode_from_string(const std::string& s) {
    if (s == "sample") return SupervisionMode::sample;
    if (s == "class_soft") return SupervisionMode::class_soft;
    if (s == "class_threshold") return SupervisionMode::class_threshold;
    if (s == "cross_classes") return SupervisionMode::cross_classes;
    if (s == "none") return SupervisionMode::none;
    throw std::invalid_argument("unknown supervision mode: " + s);
}

std::string to_string(SupervisionMode m) {
    switch (m) {
        case SupervisionMode::sample: return "sample";
        case SupervisionMode::class_soft: return "class_soft";
        case SupervisionMode::class_threshold: return "class_threshold";
        case SupervisionMode::cross_classes: return "cross_classes";
        case SupervisionMode::none: return "none";
    }
    return "?";
}

std::vector<MetricsRow> cumulative_metrics(const std::vector<StepRecord>& records,
                                           const std::vector<int>& at) {
    std::vector<MetricsRow> out;
    out.reserve(at.size());
    for (int n : at) {
        if (n < 1 || n > static_cast<int>(records.size()))
            throw std::invalid_argument("cumulative_metrics: step count " + std::to_string(n) +
                                        " out of range");
        int mistakes = 0;
        double loss = 0.0;
        for (int i = 0; i < n; ++i) {
            mistakes += records[i].mistake ? 1 : 0;
            loss += records[i].loss;
        }
        out.push_back({n, static_cast<double>(mistakes) / n, loss / n});
    }
    return out;
}

double test_error(const WeightMatrix& w, const Dataset& test) {
    if (test.samples.empty()) throw std::invalid_argument("test_error: empty test set");
    int mistakes = 0;
    for (const Sample& s : test.samples)
        if (predict(w, s.features) != s.label) ++mistakes;
    return static_cast<double>(mistakes) / static_cast<double>(test.samples.size());
}

namespace {

// Attach precision vectors to the training samples per the supervision mode.
void apply_supervision(std::vector<Sample>& train, int num_classes, SupervisionMode mode,
                       double epsilon, int theta) {
    if (mode == SupervisionMode::none) {
        for (Sample& s : train) s.precision.reset();
        return;
    }
    if (mode == SupervisionMode::sample) {
        for (Sample& s : train) {
            if (s.votes) s.precision = sample_level(*s.votes, epsilon);
            else if (!s.precision)
                throw std::runtime_error("sample-level supervision needs votes or precision (id '" +
                                         s.id + "')");
        }
        return;
    }
    VoteTable table;
    table.per_class.resize(num_classes);
    for (const Sample& s : train) {
        if (!s.votes)
            throw std::runtime_error("class-level supervision needs votes (id '" + s.id + "')");
        table.per_class[s.label].push_back(*s.votes);
    }
    if (mode == SupervisionMode::cross_classes) {
        const PrecisionDiag q = cross_classes(table, epsilon).q;
        for (Sample& s : train) s.precision = q;
        return;
    }
    std::vector<PrecisionDiag> per_class(num_classes);
    for (int c = 0; c < num_classes; ++c) {
        if (table.per_class[c].empty()) continue;
        per_class[c] = mode == SupervisionMode::class_soft
                           ? class_soft(table.per_class[c], epsilon).q
                           : class_threshold(table.per_class[c], theta, epsilon).q;
    }
    for (Sample& s : train) s.precision = per_class[s.label];
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return sd / std::sqrt(static_cast<double>(v.size()));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const Dataset& dataset) {
    if (spec.learners.empty()) throw std::invalid_argument("run_experiment: no learners");
    if (spec.num_seeds < 1) throw std::invalid_argument("run_experiment: need >= 1 seed");
    for (int b : spec.budgets)
        if (b < 0) throw std::invalid_argument("run_experiment: negative budget");

    ExperimentResult result;
    result.spec = spec;

    for (int s = 0; s < spec.num_seeds; ++s) {
        const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(s);
        SplitResult parts = split(dataset, spec.train_fraction, seed);

        // Per-class train order is already a seeded shuffle from the split.
        std::vector<std::vector<std::size_t>> by_class(dataset.num_classes);
        for (std::size_t i = 0; i < parts.train.samples.size(); ++i)
            by_class[parts.train.samples[i].label].push_back(i);

        for (int budget : spec.budgets) {
            for (const auto& counts : by_class)
                if (static_cast<int>(counts.size()) < budget)
                    throw std::runtime_error("run_experiment: a class has fewer than " +
                                             std::to_string(budget) + " training samples");
            std::vector<std::size_t> stream_idx;
            for (const auto& idx : by_class)
                stream_idx.insert(stream_idx.end(), idx.begin(), idx.begin() + budget);
            std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(budget));
            std::shuffle(stream_idx.begin(), stream_idx.end(), rng);

            for (const LearnerConfig& lc : spec.learners) {
                std::vector<Sample> stream;
                stream.reserve(stream_idx.size());
                for (std::size_t i : stream_idx) stream.push_back(parts.train.samples[i]);
                apply_supervision(stream, dataset.num_classes,
                                  lc.kind == LearnerKind::lean ? SupervisionMode::none
                                                               : spec.supervision,
                                  lc.epsilon, spec.threshold_theta);

                CellResult cell;
                cell.learner = to_string(lc.kind);
                cell.budget = budget;
                cell.seed = seed;

                WeightMatrix w = WeightMatrix::zeros(dataset.num_classes, dataset.dim);
                int mistakes = 0;
                double total_loss = 0.0;
                int step = 0;
                for (const Sample& sample : stream) {
                    const int predicted = predict(w, sample.features);
                    if (lc.kind != LearnerKind::lean && !sample.precision)
                        throw std::runtime_error("run_experiment: learner '" +
                                                 to_string(lc.kind) +
                                                 "' needs rich supervision but sample '" +
                                                 sample.id + "' has none");
                    StepResult r{w, {}, false};
                    switch (lc.kind) {
                        case LearnerKind::lean:
                            r = lean_pa_step(w, sample.features, sample.label,
                                             lc.aggressiveness);
                            break;
                        case LearnerKind::ellipsotron:
                            r = ellipsotron_step(w, sample.features, sample.label,
                                                 *sample.precision, lc.aggressiveness);
                            break;
                        case LearnerKind::feature_scaling:
                            r = feature_scaling_step(w, sample.features, sample.label,
                                                     *sample.precision, lc.aggressiveness);
                            break;
                    }
                    w = std::move(r.weights);
                    mistakes += predicted != sample.label ? 1 : 0;
                    total_loss += r.loss.value;
                    ++step;
                    if (step % spec.eval_every == 0 ||
                        step == static_cast<int>(stream.size()))
                        cell.curve.push_back({step, test_error(w, parts.test)});
                }
                if (step > 0) {
                    cell.cum_error = static_cast<double>(mistakes) / step;
                    cell.cum_loss = total_loss / step;
                }
                cell.final_test_error =
                    cell.curve.empty() ? test_error(w, parts.test) : cell.curve.back().test_error;
                result.cells.push_back(std::move(cell));
            }
        }
    }

    // Aggregate across seeds.
    for (const LearnerConfig& lc : spec.learners) {
        for (int budget : spec.budgets) {
            Aggregate agg;
            agg.learner = to_string(lc.kind);
            agg.budget = budget;
            std::vector<double> errs, losses, tests;
            std::vector<const CellResult*> cells;
            for (const CellResult& c : result.cells)
                if (c.learner == agg.learner && c.budget == budget) {
                    errs.push_back(c.cum_error);
                    losses.push_back(c.cum_loss);
                    tests.push_back(c.final_test_error);
                    cells.push_back(&c);
                }
            agg.cum_error_mean = mean_of(errs);
            agg.cum_error_stderr = stderr_of(errs);
            agg.cum_loss_mean = mean_of(losses);
            agg.cum_loss_stderr = stderr_of(losses);
            agg.test_error_mean = mean_of(tests);
            agg.test_error_stderr = stderr_of(tests);
            if (!cells.empty()) {
                const std::size_t points = cells.front()->curve.size();
                for (std::size_t p = 0; p < points; ++p) {
                    std::vector<double> vals;
                    for (const CellResult* c : cells) vals.push_back(c->curve[p].test_error);
                    agg.curve_steps.push_back(cells.front()->curve[p].step);
                    agg.curve_mean.push_back(mean_of(vals));
                    agg.curve_stderr.push_back(stderr_of(vals));
                }
            }
            result.aggregates.push_back(std::move(agg));
        }
    }
    return result;
}

void emit_results(const ExperimentResult& result, const std::string& out_dir,
                  const std::string& config_hash) {
    if (result.aggregates.empty())
        throw std::runtime_error("emit_results: empty result set, nothing to write");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    nlohmann::ordered_json summary;
    summary["spec"] = {
        {"supervision", to_string(result.spec.supervision)},
        {"budgets", result.spec.budgets},
        {"num_seeds", result.spec.num_seeds},
        {"eval_every", result.spec.eval_every},
        {"train_fraction", result.spec.train_fraction},
        {"threshold_theta", result.spec.threshold_theta},
        {"base_seed", result.spec.base_seed},
    };
    if (!config_hash.empty()) summary["config_hash"] = config_hash;
    // Each learner logs its own loss function; loss columns are comparable
    // across runs of the same learner, not across learners.
    summary["loss_metric"] = "per-learner loss";
    summary["results"] = nlohmann::ordered_json::array();

    for (const Aggregate& agg : result.aggregates) {
        const std::string curve_name =
            "curve_" + agg.learner + "_b" + std::to_string(agg.budget) + ".csv";
        {
            std::ofstream out(fs::path(out_dir) / curve_name);
            if (!out) throw std::runtime_error("emit_results: cannot write " + curve_name);
            out << "step,mean,stderr\n";
            for (std::size_t p = 0; p < agg.curve_steps.size(); ++p)
                out << agg.curve_steps[p] << "," << format_double(agg.curve_mean[p]) << ","
                    << format_double(agg.curve_stderr[p]) << "\n";
        }
        summary["results"].push_back({
            {"config", agg.learner},
            {"budget", agg.budget},
            {"cum_error", {{"mean", agg.cum_error_mean}, {"stderr", agg.cum_error_stderr}}},
            {"cum_loss", {{"mean", agg.cum_loss_mean}, {"stderr", agg.cum_loss_stderr}}},
            {"test_error", {{"mean", agg.test_error_mean}, {"stderr", agg.test_error_stderr}}},
            {"curve_file", curve_name},
        });
    }
    std::ofstream out(fs::path(out_dir) / "summary.json");
    if (!out) throw std::runtime_error("emit_results: cannot write summary.json in " + out_dir);
    out << summary.dump(2) << "\n";
}

}  // namespace ellipsotron
