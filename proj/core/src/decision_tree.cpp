#include "synkit/decision_tree.hpp"

#include "synkit/errors.hpp"
#include "synkit/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace synkit {

DecisionTree::DecisionTree(std::vector<Node> nodes, Eigen::Index width, TreeConfig cfg)
    : nodes_(std::move(nodes)), width_(width), config_(cfg) {
    for (const auto& node : nodes_) {
        if (node.leaf && !std::isfinite(node.value)) {
            throw NumericError("decision tree: non-finite leaf value");
        }
    }
}

double DecisionTree::predict_row(const Eigen::RowVectorXd& row) const {
    int idx = 0;
    while (!nodes_[static_cast<std::size_t>(idx)].leaf) {
        const Node& node = nodes_[static_cast<std::size_t>(idx)];
        idx = row[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes_[static_cast<std::size_t>(idx)].value;
}

Eigen::VectorXd DecisionTree::predict(const Eigen::MatrixXd& X) const {
    check_predict_input(*this, X);
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = predict_row(X.row(i));
    return out;
}

int DecisionTree::depth() const {
    std::function<int(int)> walk = [&](int idx) -> int {
        const Node& node = nodes_[static_cast<std::size_t>(idx)];
        if (node.leaf) return 0;
        return 1 + std::max(walk(node.left), walk(node.right));
    };
    return nodes_.empty() ? 0 : walk(0);
}

void DecisionTree::save(std::ostream& out) const { save_decision_tree(*this, out); }

std::vector<int> SplitFeatureSource::candidates(Eigen::Index n_features) const {
    if (fraction >= 1.0 || rng == nullptr) {
        std::vector<int> all(static_cast<std::size_t>(n_features));
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    auto k = static_cast<std::size_t>(
        std::max<Eigen::Index>(1, static_cast<Eigen::Index>(
                                      std::ceil(fraction * static_cast<double>(n_features)))));
    auto drawn = rng->sample_without_replacement(static_cast<std::size_t>(n_features), k);
    std::vector<int> subset(drawn.begin(), drawn.end());
    std::sort(subset.begin(), subset.end());
    return subset;
}

namespace {

struct BestSplit {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double score = std::numeric_limits<double>::infinity();  // SSE_left + SSE_right
};

struct TreeBuilder {
    const Eigen::MatrixXd& X;
    const Eigen::VectorXd& y;
    const TreeConfig& cfg;
    const SplitFeatureSource& features;
    std::vector<DecisionTree::Node> nodes;

    // Scratch: (value, target) pairs for the current node/feature.
    std::vector<std::pair<double, double>> sorted;

    BestSplit find_best_split(const std::vector<Eigen::Index>& rows) {
        BestSplit best;
        const std::size_t n = rows.size();
        auto feats = features.candidates(X.cols());
        for (int f : feats) {
            sorted.clear();
            sorted.reserve(n);
            for (Eigen::Index r : rows) sorted.emplace_back(X(r, f), y[r]);
            std::sort(sorted.begin(), sorted.end());

            // Prefix sweep: candidate split after position k (1-based count
            // on the left) whenever the value changes across the boundary.
            double left_sum = 0.0, left_sq = 0.0;
            double total_sum = 0.0, total_sq = 0.0;
            for (const auto& [v, t] : sorted) {
                total_sum += t;
                total_sq += t * t;
            }
            for (std::size_t k = 0; k + 1 < n; ++k) {
                left_sum += sorted[k].second;
                left_sq += sorted[k].second * sorted[k].second;
                if (sorted[k].first == sorted[k + 1].first) continue;
                std::size_t left_n = k + 1;
                std::size_t right_n = n - left_n;
                if (left_n < static_cast<std::size_t>(cfg.min_samples_leaf) ||
                    right_n < static_cast<std::size_t>(cfg.min_samples_leaf)) {
                    continue;
                }
                double right_sum = total_sum - left_sum;
                double right_sq = total_sq - left_sq;
                double sse = (left_sq - left_sum * left_sum / static_cast<double>(left_n)) +
                             (right_sq - right_sum * right_sum / static_cast<double>(right_n));
                if (sse < best.score) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = 0.5 * (sorted[k].first + sorted[k + 1].first);
                    best.score = sse;
                }
            }
        }
        return best;
    }

    int build(const std::vector<Eigen::Index>& rows, int depth) {
        double mean = 0.0;
        for (Eigen::Index r : rows) mean += y[r];
        mean /= static_cast<double>(rows.size());

        bool constant = true;
        for (Eigen::Index r : rows) {
            if (y[r] != y[rows.front()]) {
                constant = false;
                break;
            }
        }

        int idx = static_cast<int>(nodes.size());
        nodes.push_back({});
        nodes[static_cast<std::size_t>(idx)].value = mean;

        if (constant || depth >= cfg.max_depth ||
            rows.size() < 2 * static_cast<std::size_t>(cfg.min_samples_leaf)) {
            return idx;
        }
        BestSplit split = find_best_split(rows);
        if (!split.found) return idx;

        std::vector<Eigen::Index> left_rows, right_rows;
        left_rows.reserve(rows.size());
        right_rows.reserve(rows.size());
        for (Eigen::Index r : rows) {
            (X(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
        }

        int left = build(left_rows, depth + 1);
        int right = build(right_rows, depth + 1);
        auto& node = nodes[static_cast<std::size_t>(idx)];
        node.leaf = false;
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left;
        node.right = right;
        return idx;
    }
};

}  // namespace

DecisionTree fit_decision_tree_on(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const std::vector<Eigen::Index>& rows, const TreeConfig& cfg,
                                  const SplitFeatureSource& features) {
    if (X.rows() == 0 || X.cols() == 0) throw ShapeError("fit_decision_tree: empty design matrix");
    if (X.rows() != y.size()) {
        throw ShapeError("fit_decision_tree: X has " + std::to_string(X.rows()) +
                         " rows but y has " + std::to_string(y.size()) + " entries");
    }
    if (rows.empty()) throw ArgumentError("fit_decision_tree: empty row subset");
    if (cfg.max_depth < 1 || cfg.min_samples_leaf < 1) {
        throw ArgumentError("fit_decision_tree: config outside its domain");
    }
    if (!X.allFinite() || !y.allFinite()) throw NumericError("fit_decision_tree: non-finite input");

    TreeBuilder builder{X, y, cfg, features, {}, {}};
    builder.build(rows, 0);
    return DecisionTree(std::move(builder.nodes), X.cols(), cfg);
}

DecisionTree fit_decision_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const TreeConfig& cfg) {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(X.rows()));
    std::iota(rows.begin(), rows.end(), 0);
    return fit_decision_tree_on(X, y, rows, cfg, SplitFeatureSource{});
}

}  // namespace synkit
