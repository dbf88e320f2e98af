#include "synkit/random_forest.hpp"

#include "synkit/errors.hpp"
#include "synkit/model_io.hpp"
#include "synkit/parallel.hpp"

#include <numeric>

namespace synkit {

RandomForestModel::RandomForestModel(std::vector<DecisionTree> trees, ForestConfig cfg)
    : trees_(std::move(trees)), config_(cfg) {
    if (trees_.empty()) throw ArgumentError("random forest has no trees");
}

Eigen::Index RandomForestModel::input_width() const { return trees_.front().input_width(); }

Eigen::VectorXd RandomForestModel::predict(const Eigen::MatrixXd& X) const {
    check_predict_input(*this, X);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(X.rows());
    for (const auto& tree : trees_) sum += tree.predict(X);
    return sum / static_cast<double>(trees_.size());
}

void RandomForestModel::save(std::ostream& out) const { save_random_forest(*this, out); }

RandomForestModel fit_random_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                    const ForestConfig& cfg, int threads) {
    if (cfg.n_estimators < 1) throw ArgumentError("fit_random_forest: n_estimators must be >= 1");
    if (cfg.feature_fraction <= 0.0 || cfg.feature_fraction > 1.0) {
        throw ArgumentError("fit_random_forest: feature_fraction must lie in (0, 1]");
    }
    if (X.rows() != y.size()) {
        throw ShapeError("fit_random_forest: X has " + std::to_string(X.rows()) +
                         " rows but y has " + std::to_string(y.size()) + " entries");
    }

    const std::size_t n = static_cast<std::size_t>(X.rows());
    std::vector<DecisionTree> trees(static_cast<std::size_t>(cfg.n_estimators));

    parallel_for(trees.size(), threads, [&](std::size_t t) {
        Rng rng(cfg.seed + static_cast<std::uint64_t>(t));
        std::vector<Eigen::Index> rows;
        rows.reserve(n);
        if (cfg.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                rows.push_back(static_cast<Eigen::Index>(rng.next_below(n)));
            }
        } else {
            rows.resize(n);
            std::iota(rows.begin(), rows.end(), 0);
        }
        SplitFeatureSource features{cfg.feature_fraction, &rng};
        trees[t] = fit_decision_tree_on(X, y, rows, cfg.tree, features);
    });

    return RandomForestModel(std::move(trees), cfg);
}

}  // namespace synkit
