#include "ellipsotron/learners.hpp"

#include <cmath>
#include <stdexcept>

namespace ellipsotron {

LearnerKind learner_kind_from_string(const std::string& s) {
    if (s == "ellipsotron") return LearnerKind::ellipsotron;
    if (s == "lean") return LearnerKind::lean;
    if (s == "feature_scaling") return LearnerKind::feature_scaling;
    throw std::invalid_argument("unknown learner kind: " + s);
}

std::string to_string(LearnerKind k) {
    switch (k) {
        case LearnerKind::ellipsotron: return "ellipsotron";
        case LearnerKind::lean: return "lean";
        case LearnerKind::feature_scaling: return "feature_scaling";
    }
    return "?";
}

namespace {

// Shared PA step skeleton: given the loss, the scaled sample u = q .* x and
// the update direction, move the pos/neg columns by tau * direction.
StepResult pa_update(const WeightMatrix& w, const LossOutcome& loss, const Vec& u,
                     const Vec& direction, double aggressiveness) {
    StepResult out{w, loss, false};
    if (!loss.active) return out;
    double u_sq = 0.0;
    for (double v : u) u_sq += v * v;
    const double denom = 2.0 * u_sq + 1.0 / (2.0 * aggressiveness);
    if (denom <= 0.0 || !std::isfinite(denom)) {
        out.degenerate = true;
        return out;
    }
    const double tau = loss.value / denom;
    Vec& pos = out.weights.columns[loss.pos_class];
    Vec& neg = out.weights.columns[loss.neg_class];
    for (std::size_t j = 0; j < direction.size(); ++j) {
        const double delta = tau * direction[j];
        pos[j] += delta;
        neg[j] -= delta;
    }
    return out;
}

}  // namespace

StepResult ellipsotron_step(const WeightMatrix& w, const Vec& x, int y,
                            const PrecisionDiag& q, double aggressiveness) {
    if (aggressiveness <= 0.0) throw std::invalid_argument("ellipsotron_step: C must be > 0");
    const LossOutcome loss = multiclass_ellipsoid_loss(w, x, y, q);
    Vec u(x.size()), direction(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        u[j] = q.entries[j] * x[j];
        direction[j] = q.entries[j] * u[j];  // q^2 .* x
    }
    return pa_update(w, loss, u, direction, aggressiveness);
}

StepResult lean_pa_step(const WeightMatrix& w, const Vec& x, int y,
                        double aggressiveness) {
    return ellipsotron_step(w, x, y, PrecisionDiag::ones(x.size()), aggressiveness);
}

StepResult feature_scaling_step(const WeightMatrix& w, const Vec& x, int y,
                                const PrecisionDiag& q, double aggressiveness) {
    if (aggressiveness <= 0.0) throw std::invalid_argument("feature_scaling_step: C must be > 0");
    const LossOutcome loss = feature_scaling_loss(w, x, y, q);
    Vec u(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) u[j] = q.entries[j] * x[j];
    return pa_update(w, loss, u, u, aggressiveness);
}

RunResult run_online(const LearnerConfig& config, const std::vector<Sample>& stream,
                     const WeightMatrix& w0) {
    RunResult out{w0, {}};
    out.records.reserve(stream.size());
    int step = 0;
    for (const Sample& s : stream) {
        const int predicted = predict(out.weights, s.features);
        StepResult r{out.weights, {}, false};
        switch (config.kind) {
            case LearnerKind::lean:
                r = lean_pa_step(out.weights, s.features, s.label, config.aggressiveness);
                break;
            case LearnerKind::ellipsotron:
                if (!s.precision)
                    throw std::runtime_error("run_online: sample '" + s.id +
                                             "' has no precision but learner requires it");
                r = ellipsotron_step(out.weights, s.features, s.label, *s.precision,
                                     config.aggressiveness);
                break;
            case LearnerKind::feature_scaling:
                if (!s.precision)
                    throw std::runtime_error("run_online: sample '" + s.id +
                                             "' has no precision but learner requires it");
                r = feature_scaling_step(out.weights, s.features, s.label, *s.precision,
                                         config.aggressiveness);
                break;
        }
        out.weights = std::move(r.weights);
        StepRecord rec;
        rec.step = step++;
        rec.predicted = predicted;
        rec.true_label = s.label;
        rec.mistake = predicted != s.label;
        rec.loss = r.loss.value;
        rec.pos_class = r.loss.pos_class;
        rec.neg_class = r.loss.neg_class;
        rec.degenerate = r.degenerate;
        out.records.push_back(rec);
    }
    return out;
}

}  // namespace ellipsotron
