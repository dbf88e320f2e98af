#pragma once

#include "synkit/regressor.hpp"
#include "synkit/rng.hpp"

#include <Eigen/Core>

#include <vector>

namespace synkit {

struct TreeConfig {
    int max_depth = 6;
    int min_samples_leaf = 1;
};

// Axis-aligned regression tree. Splits greedily by variance reduction over
// all (feature, midpoint) candidates; candidate thresholds are midpoints
// between consecutive sorted unique feature values; ties resolve to the
// lowest feature index, then the lowest threshold. Leaves predict the mean
// target of their samples.
class DecisionTree : public Regressor {
public:
    struct Node {
        bool leaf = true;
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    DecisionTree() = default;
    DecisionTree(std::vector<Node> nodes, Eigen::Index width, TreeConfig cfg);

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override;
    double predict_row(const Eigen::RowVectorXd& row) const;
    Eigen::Index input_width() const override { return width_; }
    std::string kind() const override { return "decision_tree"; }
    void save(std::ostream& out) const override;

    const std::vector<Node>& nodes() const { return nodes_; }
    const TreeConfig& config() const { return config_; }
    int depth() const;

private:
    std::vector<Node> nodes_;
    Eigen::Index width_ = 0;
    TreeConfig config_;
};

// Optional per-split feature subsetting (used by random forests). Returns
// the candidate feature indices for one split, in ascending order.
using FeatureSampler = std::vector<int> (*)(Eigen::Index n_features, void* state);

struct SplitFeatureSource {
    // When fraction < 1, draws ceil(fraction * n_features) distinct features
    // per split from rng; otherwise yields every feature.
    double fraction = 1.0;
    Rng* rng = nullptr;

    std::vector<int> candidates(Eigen::Index n_features) const;
};

DecisionTree fit_decision_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const TreeConfig& cfg);

// Variant with row subset and per-split feature sampling; `rows` may repeat
// indices (bootstrap resamples).
DecisionTree fit_decision_tree_on(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const std::vector<Eigen::Index>& rows, const TreeConfig& cfg,
                                  const SplitFeatureSource& features);

}  // namespace synkit
