#ifndef ELLIPSOTRON_LEARNERS_HPP
#define ELLIPSOTRON_LEARNERS_HPP

#include <string>
#include <vector>

#include "ellipsotron/losses.hpp"
#include "ellipsotron/types.hpp"

namespace ellipsotron {

enum class LearnerKind { ellipsotron, lean, feature_scaling };

LearnerKind learner_kind_from_string(const std::string& s);
std::string to_string(LearnerKind k);

struct LearnerConfig {
    LearnerKind kind = LearnerKind::ellipsotron;
    double aggressiveness = 1.0;  // C
    double epsilon = 1e-10;       // precision for irrelevant features
};

struct StepRecord {
    int step = 0;
    int predicted = 0;
    int true_label = 0;
    bool mistake = false;
    double loss = 0.0;
    int pos_class = 0;
    int neg_class = 0;
    bool degenerate = false;  // zero denominator, update skipped
};

struct StepResult {
    WeightMatrix weights;
    LossOutcome loss;
    bool degenerate = false;
};

/// Passive-aggressive update under the ellipsoid-margin loss. When the loss
/// is active the pos/neg columns move by tau * (q .* q .* x) with
/// tau = loss / (2 ||q .* x||^2 + 1/(2C)); all other columns are untouched.
StepResult ellipsotron_step(const WeightMatrix& w, const Vec& x, int y,
                            const PrecisionDiag& q, double aggressiveness);

/// Standard multiclass PA update (hinge loss, no rich supervision).
StepResult lean_pa_step(const WeightMatrix& w, const Vec& x, int y,
                        double aggressiveness);

/// PA update on the rescaled sample: loss on q .* x, columns move by
/// tau * (q .* x) (single power of q).
StepResult feature_scaling_step(const WeightMatrix& w, const Vec& x, int y,
                                const PrecisionDiag& q, double aggressiveness);

struct RunResult {
    WeightMatrix weights;
    std::vector<StepRecord> records;
};

/// Online loop: predict, suffer, update, in stream order. Learners that use
/// rich supervision require every sample to carry a precision vector.
RunResult run_online(const LearnerConfig& config, const std::vector<Sample>& stream,
                     const WeightMatrix& w0);

}  // namespace ellipsotron

#endif
