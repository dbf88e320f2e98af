#pragma once

#include "synkit/fcnn.hpp"
#include "synkit/mlp.hpp"
#include "synkit/molgraph.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace synkit {

struct GnnConfig {
    int embed_dim = 25;  // d
    int radius = 2;      // r
    int layers = 3;      // L
    FcnnConfig head;     // prediction head on [emb_a | emb_b | cell]
    int epochs = 100;
    std::uint64_t seed = 0;
    bool bond_orders_in_types = true;
};

// Training examples for the graph path: unique graphs, per-instance index
// pairs into them, one cell-line feature row and one target per instance.
struct GraphPairExamples {
    std::vector<MolecularGraph> graphs;
    std::vector<std::pair<int, int>> pairs;
    Eigen::MatrixXd cell_features;
    Eigen::VectorXd targets;
};

// Message-passing network over molecular graphs. Vertices start from a
// learned embedding table indexed by r-radius subgraph type; each of the L
// layers applies h_v <- relu(W_l (h_v + sum of neighbor states)); the graph
// embedding is the vertex mean. A fully connected head maps
// [emb_a | emb_b | cell] to the synergy estimate.
//
// Inference sums vertex and neighbor states in a canonical (value-sorted)
// order, so predictions and extracted embeddings are bit-identical under
// any relabeling of the input graph's vertices.
class GnnModel {
public:
    GnnModel() = default;
    GnnModel(SubgraphDictionary dict, Eigen::MatrixXd embeddings,
             std::vector<Eigen::MatrixXd> layer_weights, Mlp head, Eigen::Index cell_dim,
             GnnConfig cfg);

    // Graph embedding after readout, before the prediction head (the GNNR
    // vector). Unknown subgraph types map to the reserved embedding row.
    Eigen::VectorXd embed(const MolecularGraph& graph) const;

    Eigen::VectorXd predict(const std::vector<MolecularGraph>& graphs,
                            const std::vector<std::pair<int, int>>& pairs,
                            const Eigen::MatrixXd& cell_features) const;
    double predict_one(const MolecularGraph& a, const MolecularGraph& b,
                       const Eigen::VectorXd& cell) const;

    const SubgraphDictionary& dictionary() const { return dict_; }
    const Eigen::MatrixXd& embeddings() const { return embeddings_; }
    const std::vector<Eigen::MatrixXd>& layer_weights() const { return layer_weights_; }
    const Mlp& head() const { return head_; }
    Eigen::Index cell_dim() const { return cell_dim_; }
    const GnnConfig& config() const { return config_; }

    void save(std::ostream& out) const;

    // Flat access over every trainable parameter (embeddings, layer weights,
    // head), used by the gradient checks.
    Eigen::VectorXd parameter_vector() const;
    void set_parameter_vector(const Eigen::VectorXd& flat);

    // Mean squared error and its analytic gradient on a set of examples;
    // gradient layout matches parameter_vector.
    double loss(const GraphPairExamples& data) const;
    Eigen::VectorXd loss_gradient(const GraphPairExamples& data) const;

private:
    SubgraphDictionary dict_{0};
    Eigen::MatrixXd embeddings_;  // vocabulary_size x d; last row = unknown type
    std::vector<Eigen::MatrixXd> layer_weights_;
    Mlp head_;
    Eigen::Index cell_dim_ = 0;
    GnnConfig config_;

    friend GnnModel fit_gnn(const GraphPairExamples&, const GnnConfig&);
};

GnnModel fit_gnn(const GraphPairExamples& data, const GnnConfig& cfg);

// Convenience wrapper matching the representation-extraction step: one
// embedding row per structure id.
Eigen::MatrixXd extract_gnnr(const GnnModel& model, const std::vector<MolecularGraph>& graphs);

}  // namespace synkit
