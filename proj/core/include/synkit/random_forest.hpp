#pragma once

#include "synkit/decision_tree.hpp"
#include "synkit/regressor.hpp"

#include <cstdint>
#include <vector>

namespace synkit {

struct ForestConfig {
    int n_estimators = 1000;
    TreeConfig tree;
    double feature_fraction = 1.0;  // in (0, 1]
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

// Bagged regression trees; the forest prediction is the mean of its members'
// predictions, taken in tree-index order. Tree t draws from seed + t, so the
// fit is reproducible and independent of training parallelism.
class RandomForestModel : public Regressor {
public:
    RandomForestModel() = default;
    RandomForestModel(std::vector<DecisionTree> trees, ForestConfig cfg);

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override;
    Eigen::Index input_width() const override;
    std::string kind() const override { return "random_forest"; }
    void save(std::ostream& out) const override;

    const std::vector<DecisionTree>& trees() const { return trees_; }
    const ForestConfig& config() const { return config_; }

private:
    std::vector<DecisionTree> trees_;
    ForestConfig config_;
};

RandomForestModel fit_random_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                    const ForestConfig& cfg, int threads = 1);

}  // namespace synkit
