// Command-line driver: dataset generation, experiment runs, update-rule
// verification, and generalization-bound evaluation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ellipsotron/bounds.hpp"
#include "ellipsotron/data.hpp"
#include "ellipsotron/eval.hpp"
#include "ellipsotron/learners.hpp"
#include "ellipsotron/oracle.hpp"
#include "ellipsotron/supervision.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ellipsotron;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerification = 2;
constexpr int kExitIo = 3;

std::string fnv1a_hash(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return json::parse(in);
}

SynthConfig synth_from_json(const json& j) {
    SynthConfig cfg;
    cfg.dim = j.value("dim", cfg.dim);
    cfg.num_classes = j.value("num_classes", cfg.num_classes);
    cfg.pool_size = j.value("pool_size", cfg.pool_size);
    cfg.relevant_per_sample = j.value("relevant_per_sample", cfg.relevant_per_sample);
    cfg.signal = j.value("signal", cfg.signal);
    cfg.noise = j.value("noise", cfg.noise);
    cfg.samples_per_class = j.value("samples_per_class", cfg.samples_per_class);
    cfg.distractors_per_sample = j.value("distractors_per_sample", cfg.distractors_per_sample);
    cfg.distractor_scale = j.value("distractor_scale", cfg.distractor_scale);
    cfg.overlapping_pools = j.value("overlapping_pools", cfg.overlapping_pools);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

json synth_to_json(const SynthConfig& cfg) {
    return json{{"dim", cfg.dim},
                {"num_classes", cfg.num_classes},
                {"pool_size", cfg.pool_size},
                {"relevant_per_sample", cfg.relevant_per_sample},
                {"signal", cfg.signal},
                {"noise", cfg.noise},
                {"samples_per_class", cfg.samples_per_class},
                {"distractors_per_sample", cfg.distractors_per_sample},
                {"distractor_scale", cfg.distractor_scale},
                {"overlapping_pools", cfg.overlapping_pools},
                {"epsilon", cfg.epsilon},
                {"seed", cfg.seed}};
}

struct CommonOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> budget;
    std::optional<std::string> learner;
    std::optional<std::string> supervision;
    std::optional<double> aggressiveness;
    std::optional<double> epsilon;
    std::optional<int> theta;
};

ExperimentSpec experiment_from_json(const json& j, const CommonOverrides& ov) {
    ExperimentSpec spec;
    const double C = ov.aggressiveness.value_or(j.value("C", 1.0));
    const double eps = ov.epsilon.value_or(j.value("epsilon", 1e-10));
    std::vector<std::string> names =
        j.value("learners", std::vector<std::string>{"ellipsotron", "feature_scaling", "lean"});
    if (ov.learner) names = {*ov.learner};
    for (const auto& name : names)
        spec.learners.push_back({learner_kind_from_string(name), C, eps});
    spec.supervision = supervision_mode_from_string(
        ov.supervision.value_or(j.value("supervision", std::string("sample"))));
    spec.budgets = j.value("budgets", std::vector<int>{5, 10, 20});
    if (ov.budget) spec.budgets = {*ov.budget};
    spec.num_seeds = j.value("num_seeds", 5);
    spec.eval_every = j.value("eval_every", 10);
    spec.train_fraction = j.value("train_fraction", 0.5);
    spec.threshold_theta = ov.theta.value_or(j.value("theta", 4));
    spec.base_seed = ov.seed.value_or(j.value("base_seed", std::uint64_t{0}));
    return spec;
}

json experiment_to_json(const ExperimentSpec& spec) {
    std::vector<std::string> names;
    for (const auto& l : spec.learners) names.push_back(to_string(l.kind));
    return json{{"learners", names},
                {"supervision", to_string(spec.supervision)},
                {"budgets", spec.budgets},
                {"num_seeds", spec.num_seeds},
                {"eval_every", spec.eval_every},
                {"train_fraction", spec.train_fraction},
                {"theta", spec.threshold_theta},
                {"base_seed", spec.base_seed},
                {"C", spec.learners.empty() ? 1.0 : spec.learners[0].aggressiveness},
                {"epsilon", spec.learners.empty() ? 1e-10 : spec.learners[0].epsilon}};
}

Dataset resolve_dataset(const json& config, const std::string& features_path,
                        const std::string& supervision_path, double epsilon) {
    if (!features_path.empty()) {
        std::optional<std::string> sup;
        if (!supervision_path.empty()) sup = supervision_path;
        return load_dataset(features_path, sup, epsilon);
    }
    SynthConfig cfg = synth_from_json(config.value("synth", json::object()));
    return generate_synthetic(cfg);
}

int cmd_generate(const json& config, const CommonOverrides& ov, const std::string& out_dir) {
    SynthConfig cfg = synth_from_json(config.value("synth", json::object()));
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.epsilon) cfg.epsilon = *ov.epsilon;
    cfg.validate();
    Dataset ds = generate_synthetic(cfg);
    ds.config_hash = fnv1a_hash(synth_to_json(cfg).dump());
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    save_dataset(ds, (dir / "features.csv").string(), (dir / "supervision.csv").string(),
                 (dir / "metadata.json").string());
    std::cout << "wrote " << (dir / "features.csv").string() << ", supervision.csv, metadata.json ("
              << ds.samples.size() << " samples, hash " << ds.config_hash << ")\n";
    return kExitOk;
}

int cmd_run(const json& config, const CommonOverrides& ov, const std::string& features_path,
            const std::string& supervision_path, const std::string& out_dir, bool force) {
    ExperimentSpec spec = experiment_from_json(config.value("experiment", json::object()), ov);
    const double eps = spec.learners.empty() ? 1e-10 : spec.learners[0].epsilon;
    Dataset ds = resolve_dataset(config, features_path, supervision_path, eps);

    json hashed = experiment_to_json(spec);
    hashed["dataset"] = features_path.empty() ? json(synth_to_json(synth_from_json(
                                                    config.value("synth", json::object()))))
                                              : json(features_path);
    const std::string hash = fnv1a_hash(hashed.dump());

    const fs::path summary_path = fs::path(out_dir) / "summary.json";
    if (!force && fs::exists(summary_path)) {
        std::ifstream in(summary_path);
        json existing;
        in >> existing;
        const std::string old_hash = existing.value("config_hash", std::string{});
        if (!old_hash.empty() && old_hash != hash) {
            std::cerr << "error: " << out_dir << " holds results for a different config (hash "
                      << old_hash << " vs " << hash << "); use --force to overwrite\n";
            return kExitValidation;
        }
    }

    ExperimentResult result = run_experiment(spec, ds);
    emit_results(result, out_dir, hash);

    // Surface class-level precision norms so degenerate aggregations are visible.
    if (spec.supervision == SupervisionMode::class_soft) {
        VoteTable table;
        table.per_class.resize(ds.num_classes);
        for (const Sample& s : ds.samples)
            if (s.votes) table.per_class[s.label].push_back(*s.votes);
        json norms = json::array();
        for (const auto& cls : table.per_class) {
            if (cls.empty()) continue;
            norms.push_back(l2_norm(class_soft(cls, eps).q.entries));
        }
        std::ofstream out(fs::path(out_dir) / "class_soft_norms.json");
        out << json{{"l2_norms", norms}}.dump(2) << "\n";
    }

    for (const Aggregate& agg : result.aggregates)
        std::cout << agg.learner << " budget=" << agg.budget
                  << " cum_error=" << agg.cum_error_mean << " cum_loss=" << agg.cum_loss_mean
                  << " test_error=" << agg.test_error_mean << " (+-" << agg.test_error_stderr
                  << ")\n";
    std::cout << "results written to " << out_dir << " (hash " << hash << ")\n";
    return kExitOk;
}

int cmd_verify(int instances, long dirs, std::uint64_t seed, double tau_error) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double C_choices[] = {0.5, 1.0, 2.0};
    bool ok = true;

    for (int i = 0; i < instances; ++i) {
        const int d = 2 + static_cast<int>(rng() % 5);  // up to 6
        const int m = 2 + static_cast<int>(rng() % 4);  // up to 5
        const double C = C_choices[rng() % 3];
        WeightMatrix w = WeightMatrix::zeros(m, d);
        for (auto& col : w.columns)
            for (double& v : col) v = gauss(rng);
        Vec x(d);
        for (double& v : x) v = gauss(rng);
        PrecisionDiag q;
        q.entries.resize(d);
        for (double& v : q.entries) v = 0.05 + 0.95 * unit(rng);
        const int y = static_cast<int>(rng() % m);

        LossOutcome loss = multiclass_ellipsoid_loss(w, x, y, q);
        if (!loss.active) {
            --i;  // certification targets active-loss instances
            continue;
        }
        StepResult step = ellipsotron_step(w, x, y, q, C);
        if (tau_error != 0.0) {
            // test hook: perturb the closed-form update by a relative factor
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double delta =
                    (step.weights.columns[loss.pos_class][j] - w.columns[loss.pos_class][j]) *
                    tau_error;
                step.weights.columns[loss.pos_class][j] += delta;
                step.weights.columns[loss.neg_class][j] -= delta;
            }
        }
        const WeightMatrix numeric = oracle::solve_step_numeric(w, x, y, q, C);
        oracle::OracleReport report;
        report.closed_form_objective = oracle::step_objective(
            step.weights, w, x, loss.pos_class, loss.neg_class, q, C);
        report.oracle_objective = oracle::step_objective(
            numeric, w, x, loss.pos_class, loss.neg_class, q, C);
        report.no_update_objective =
            oracle::step_objective(w, w, x, loss.pos_class, loss.neg_class, q, C);
        report.relative_gap = (report.closed_form_objective - report.oracle_objective) /
                              std::max(std::abs(report.oracle_objective), 1.0);
        report.instance = "d=" + std::to_string(d) + ",m=" + std::to_string(m) +
                          ",C=" + std::to_string(C) + ",i=" + std::to_string(i);
        const bool pass = std::abs(report.relative_gap) <= 1e-6 &&
                          report.closed_form_objective <= report.no_update_objective + 1e-12;
        ok = ok && pass;
        if (!pass || i < 3) {
            std::cout << json{{"instance", report.instance},
                              {"closed_form_objective", report.closed_form_objective},
                              {"oracle_objective", report.oracle_objective},
                              {"no_update_objective", report.no_update_objective},
                              {"relative_gap", report.relative_gap},
                              {"pass", pass}}
                             .dump()
                      << "\n";
        }
    }

    // Ellipsoid-margin closed form vs Monte-Carlo minimum.
    double worst_gap = 0.0;
    for (int i = 0; i < 20; ++i) {
        const int d = 2 + static_cast<int>(rng() % 2);
        Vec dw(d), x(d);
        for (double& v : dw) v = gauss(rng);
        for (double& v : x) v = gauss(rng);
        PrecisionDiag q;
        q.entries.resize(d);
        for (double& v : q.entries) v = 0.1 + 0.9 * unit(rng);
        const double closed = dot(dw, x) - 1.0;
        const double numeric = oracle::ellipsoid_min_numeric(dw, x, q, dirs, rng());
        const double gap = numeric - closed;
        worst_gap = std::max(worst_gap, std::abs(gap));
        if (gap < -1e-9 || gap > 1e-3) ok = false;
    }
    std::cout << json{{"ellipsoid_min_worst_gap", worst_gap}}.dump() << "\n";

    // Block-embedding identities.
    for (int k = 1; k <= 3; ++k) {
        const int d = 4;
        std::vector<PrecisionDiag> groups(k);
        for (auto& g : groups) {
            g.entries.resize(d);
            for (double& v : g.entries) v = unit(rng);
        }
        std::vector<Sample> samples;
        for (int i = 0; i < 10; ++i) {
            Sample s;
            s.id = "v" + std::to_string(i);
            s.features.resize(d);
            for (double& v : s.features) v = gauss(rng);
            s.precision = groups[rng() % k];
            samples.push_back(std::move(s));
        }
        Vec w_ref(d);
        for (double& v : w_ref) v = gauss(rng);
        const PaddingReport rep = verify_padding_identities(samples, w_ref, groups);
        const bool pass = rep.max_norm_discrepancy <= 1e-12 &&
                          rep.max_inner_discrepancy <= 1e-12 &&
                          rep.weight_norm_discrepancy <= 1e-12;
        ok = ok && pass;
        std::cout << json{{"padding_groups", k},
                          {"max_norm_discrepancy", rep.max_norm_discrepancy},
                          {"max_inner_discrepancy", rep.max_inner_discrepancy},
                          {"weight_norm_discrepancy", rep.weight_norm_discrepancy},
                          {"pass", pass}}
                         .dump()
                  << "\n";
    }

    std::cout << (ok ? "verify: all checks passed\n" : "verify: FAILURES detected\n");
    return ok ? kExitOk : kExitVerification;
}

int cmd_bound(const json& config, const std::string& features_path,
              const std::string& supervision_path, double delta, double loss_upper_bound,
              double w_star_l2, double empirical_loss) {
    const json bound_cfg = config.value("bound", json::object());
    Dataset ds = resolve_dataset(config, features_path, supervision_path, 1e-10);
    for (const Sample& s : ds.samples)
        if (!s.precision)
            throw std::runtime_error("bound: sample '" + s.id + "' has no precision");

    BoundInputs b;
    b.empirical_loss = empirical_loss;
    b.w_star_l2 = w_star_l2;
    b.loss_upper_bound = loss_upper_bound;
    b.delta = delta;
    b.n = static_cast<long long>(ds.samples.size());
    b.max_sqrt_norm = max_confidence_norm(ds.samples, true);

    const double complexity = rademacher_term(ds.samples, w_star_l2, b.n, true);
    const double complexity_plain_norm = rademacher_term(ds.samples, w_star_l2, b.n, false);
    const double total = generalization_bound(b);
    const double confidence = total - b.empirical_loss - complexity;

    std::cout << json{{"n", b.n},
                      {"delta", b.delta},
                      {"loss_upper_bound", b.loss_upper_bound},
                      {"w_star_l2", b.w_star_l2},
                      {"empirical_loss", b.empirical_loss},
                      {"max_sqrt_norm", b.max_sqrt_norm},
                      {"complexity_term", complexity},
                      {"complexity_term_plain_norm", complexity_plain_norm},
                      {"confidence_term", confidence},
                      {"bound", total}}
                     .dump(2)
              << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ellipsotron: online multiclass learning with per-sample feature confidence"};
    app.require_subcommand(1);

    std::string config_path, features_path, supervision_path, out_dir = "results";
    CommonOverrides ov;
    bool force = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file");
        cmd->add_option("--seed", ov.seed, "Override base seed");
        cmd->add_option("--epsilon", ov.epsilon, "Override irrelevant-feature precision");
    };

    auto* generate = app.add_subcommand("generate", "Generate a synthetic dataset");
    add_common(generate);
    generate->add_option("--out", out_dir, "Output directory");

    auto* run = app.add_subcommand("run", "Run an online-learning experiment");
    add_common(run);
    run->add_option("--features", features_path, "Features CSV (otherwise synthetic)");
    run->add_option("--supervision", supervision_path, "Supervision CSV");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--budget", ov.budget, "Override training budget per class");
    run->add_option("--learner", ov.learner, "Override learner (single)");
    run->add_option("--supervision-mode", ov.supervision, "Override supervision mode");
    run->add_option("--C", ov.aggressiveness, "Override aggressiveness");
    run->add_option("--theta", ov.theta, "Override class-threshold theta");
    run->add_flag("--force", force, "Overwrite results of a different config");

    int instances = 200;
    long dirs = 100000;
    std::uint64_t verify_seed = 7;
    double tau_error = 0.0;
    auto* verify = app.add_subcommand("verify", "Certify the closed-form update numerically");
    verify->add_option("--instances", instances, "Number of random instances");
    verify->add_option("--dirs", dirs, "Monte-Carlo directions for the margin check");
    verify->add_option("--seed", verify_seed, "Instance seed");
    verify->add_option("--inject-tau-error", tau_error,
                       "Perturb the closed-form step (negative-control hook)")
        ->group("");

    double delta = 0.1, loss_upper_bound = 1.0, w_star_l2 = 1.0, empirical_loss = 0.0;
    auto* bound = app.add_subcommand("bound", "Evaluate the generalization bound");
    add_common(bound);
    bound->add_option("--features", features_path, "Features CSV (otherwise synthetic)");
    bound->add_option("--supervision", supervision_path, "Supervision CSV");
    bound->add_option("--delta", delta, "Confidence parameter in (0,1)");
    bound->add_option("--M-l", loss_upper_bound, "Loss upper bound");
    bound->add_option("--w-star-l2", w_star_l2, "Reference classifier L2 norm");
    bound->add_option("--empirical-loss", empirical_loss, "Empirical loss of the reference");

    CLI11_PARSE(app, argc, argv);

    try {
        const json config = load_config(config_path);
        if (generate->parsed()) return cmd_generate(config, ov, out_dir);
        if (run->parsed())
            return cmd_run(config, ov, features_path, supervision_path, out_dir, force);
        if (verify->parsed()) return cmd_verify(instances, dirs, verify_seed, tau_error);
        if (bound->parsed())
            return cmd_bound(config, features_path, supervision_path, delta, loss_upper_bound,
                             w_star_l2, empirical_loss);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
