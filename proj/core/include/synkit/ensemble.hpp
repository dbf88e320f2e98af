#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace synkit {

// Validation-set predictions of one representation-model combination,
// e.g. "CDR^FCNN".
struct BaseLearnerEntry {
    std::string id;
    Eigen::VectorXd val_predictions;
};

// Ordered members with simplex weights (non-negative, summing to one).
struct EnsembleModel {
    std::vector<std::string> member_ids;
    Eigen::VectorXd weights;
};

void validate_simplex_weights(const Eigen::VectorXd& weights, double tolerance = 1e-9);

// Elementwise sum of w_i * predictions_i over aligned vectors.
Eigen::VectorXd weighted_predict(const std::vector<BaseLearnerEntry>& entries,
                                 const Eigen::VectorXd& weights);

struct MixResult {
    double gamma = 0.0;
    double mse = 0.0;
};

// Smallest gamma on the grid {0, step, ..., 1} minimizing the MSE of
// (1-gamma) * current + gamma * candidate against y. Ties resolve to the
// smaller gamma. `step` must divide 1 evenly.
MixResult search_mixing_weight(const Eigen::VectorXd& current, const Eigen::VectorXd& candidate,
                               const Eigen::VectorXd& y, double step);

// Greedy forward selection: entries are ordered best-MSE-first; the blend
// starts from the best entry and each next candidate is merged at its
// grid-optimal gamma, accepted while gamma > 0 and the relative MSE
// improvement is at least rel_tol. Final weights are the cascade products,
// renormalized onto the simplex.
EnsembleModel greedy_forward_ensemble(const std::vector<BaseLearnerEntry>& entries,
                                      const Eigen::VectorXd& y, double step = 0.005,
                                      double rel_tol = 1e-4);

// Joint grid search over the full simplex at a coarse step; cross-check mode
// for up to 3 members.
EnsembleModel joint_grid_ensemble(const std::vector<BaseLearnerEntry>& entries,
                                  const Eigen::VectorXd& y, double step);

// --- file formats ---------------------------------------------------------

// Prediction file: CSV `row_id,prediction`.
void write_prediction_csv(const Eigen::VectorXd& predictions, std::ostream& out);
void write_prediction_csv(const Eigen::VectorXd& predictions, const std::string& path);
Eigen::VectorXd read_prediction_csv(std::istream& in, const std::string& origin);
Eigen::VectorXd read_prediction_csv(const std::string& path);

// Targets file: CSV `row_id,target`.
void write_target_csv(const Eigen::VectorXd& targets, std::ostream& out);
Eigen::VectorXd read_target_csv(std::istream& in, const std::string& origin);
Eigen::VectorXd read_target_csv(const std::string& path);

// Ensemble description: `member_id weight` lines; `#`-prefixed lines are
// comments.
void write_ensemble_description(const EnsembleModel& model, std::ostream& out,
                                double validation_mse);
EnsembleModel read_ensemble_description(std::istream& in, const std::string& origin);

}  // namespace synkit
