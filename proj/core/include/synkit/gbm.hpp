#pragma once

#include "synkit/decision_tree.hpp"
#include "synkit/regressor.hpp"

#include <vector>

namespace synkit {

struct GbmConfig {
    int n_estimators = 1000;
    double learning_rate = 0.1;  // in (0, 1]
    TreeConfig tree;
};

// Stagewise additive model: prediction = mean(y) + rate * sum of trees, each
// tree fit to the residuals left by the previous stages.
class GbmModel : public Regressor {
public:
    GbmModel() = default;
    GbmModel(double base, std::vector<DecisionTree> stages, GbmConfig cfg, Eigen::Index width);

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override;
    // Prediction truncated to the first `stages` trees.
    Eigen::VectorXd predict_prefix(const Eigen::MatrixXd& X, int stages) const;
    Eigen::Index input_width() const override { return width_; }
    std::string kind() const override { return "gbm"; }
    void save(std::ostream& out) const override;

    double base() const { return base_; }
    const std::vector<DecisionTree>& stages() const { return stages_; }
    const GbmConfig& config() const { return config_; }

    // Training MSE recorded after each stage during the fit (index 0 = the
    // constant model). Not part of the serialized format.
    const std::vector<double>& training_mse_by_stage() const { return train_mse_; }
    void set_training_mse_by_stage(std::vector<double> mse) { train_mse_ = std::move(mse); }

private:
    double base_ = 0.0;
    std::vector<DecisionTree> stages_;
    GbmConfig config_;
    Eigen::Index width_ = 0;
    std::vector<double> train_mse_;
};

GbmModel fit_gbm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GbmConfig& cfg);

}  // namespace synkit
