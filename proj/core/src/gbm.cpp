#include "synkit/gbm.hpp"

#include "synkit/errors.hpp"
#include "synkit/model_io.hpp"

#include <cmath>

namespace synkit {

GbmModel::GbmModel(double base, std::vector<DecisionTree> stages, GbmConfig cfg,
                   Eigen::Index width)
    : base_(base), stages_(std::move(stages)), config_(cfg), width_(width) {
    if (!std::isfinite(base_)) throw NumericError("gbm: non-finite base prediction");
}

Eigen::VectorXd GbmModel::predict(const Eigen::MatrixXd& X) const {
    return predict_prefix(X, static_cast<int>(stages_.size()));
}

Eigen::VectorXd GbmModel::predict_prefix(const Eigen::MatrixXd& X, int stages) const {
    check_predict_input(*this, X);
    if (stages < 0 || stages > static_cast<int>(stages_.size())) {
        throw ArgumentError("gbm: stage prefix out of range");
    }
    Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), base_);
    for (int m = 0; m < stages; ++m) {
        out += config_.learning_rate * stages_[static_cast<std::size_t>(m)].predict(X);
    }
    return out;
}

void GbmModel::save(std::ostream& out) const { save_gbm(*this, out); }

GbmModel fit_gbm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GbmConfig& cfg) {
    if (cfg.n_estimators < 0) throw ArgumentError("fit_gbm: n_estimators must be >= 0");
    if (cfg.learning_rate <= 0.0 || cfg.learning_rate > 1.0) {
        throw ArgumentError("fit_gbm: learning_rate must lie in (0, 1]");
    }
    if (X.rows() == 0) throw ShapeError("fit_gbm: empty design matrix");
    if (X.rows() != y.size()) {
        throw ShapeError("fit_gbm: X has " + std::to_string(X.rows()) + " rows but y has " +
                         std::to_string(y.size()) + " entries");
    }

    const double base = y.mean();
    Eigen::VectorXd current = Eigen::VectorXd::Constant(y.size(), base);
    std::vector<DecisionTree> stages;
    stages.reserve(static_cast<std::size_t>(cfg.n_estimators));

    std::vector<double> train_mse;
    train_mse.reserve(static_cast<std::size_t>(cfg.n_estimators) + 1);
    train_mse.push_back((y - current).squaredNorm() / static_cast<double>(y.size()));

    for (int m = 0; m < cfg.n_estimators; ++m) {
        Eigen::VectorXd residual = y - current;
        DecisionTree tree = fit_decision_tree(X, residual, cfg.tree);
        current += cfg.learning_rate * tree.predict(X);
        stages.push_back(std::move(tree));
        train_mse.push_back((y - current).squaredNorm() / static_cast<double>(y.size()));
    }

    GbmModel model(base, std::move(stages), cfg, X.cols());
    model.set_training_mse_by_stage(std::move(train_mse));
    return model;
}

}  // namespace synkit
