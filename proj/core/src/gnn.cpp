#include "synkit/gnn.hpp"

#include "synkit/errors.hpp"
#include "synkit/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace synkit {

namespace {

// Lexicographic comparison of equal-length columns; exact double compares.
bool column_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

// Sum of columns in value-sorted order: independent of vertex numbering.
Eigen::VectorXd canonical_sum(std::vector<Eigen::VectorXd> columns, Eigen::Index dim) {
    std::sort(columns.begin(), columns.end(), column_less);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    for (const auto& c : columns) sum += c;
    return sum;
}

struct GraphStructure {
    std::vector<int> types;
    std::vector<std::vector<int>> neighbors;
};

GraphStructure resolve_structure(const MolecularGraph& graph, const SubgraphDictionary& dict) {
    GraphStructure s;
    auto adj = graph.adjacency();
    s.neighbors.resize(adj.size());
    for (std::size_t v = 0; v < adj.size(); ++v) {
        for (auto [u, order] : adj[v]) s.neighbors[v].push_back(u);
    }
    s.types.reserve(adj.size());
    for (int v = 0; v < graph.atom_count(); ++v) {
        s.types.push_back(dict.lookup(
            encode_neighborhood(graph, v, dict.radius(), dict.use_bond_orders())));
    }
    return s;
}

struct GraphTrace {
    GraphStructure structure;
    // h[0] = initial embeddings; h[l] after layer l. Each d x V.
    std::vector<Eigen::MatrixXd> h;
    // m[l] = aggregated input to layer l (self + neighbors), z[l] = W_l m[l].
    std::vector<Eigen::MatrixXd> m;
    std::vector<Eigen::MatrixXd> z;
    Eigen::VectorXd readout;
};

struct GnnGradients {
    Eigen::MatrixXd embeddings;
    std::vector<Eigen::MatrixXd> layer_weights;
    Mlp::Gradients head;
};

// Core forward pass shared by training, prediction and GNNR extraction.
struct GnnForward {
    const Eigen::MatrixXd& embeddings;
    const std::vector<Eigen::MatrixXd>& layer_weights;

    GraphTrace run(const MolecularGraph& graph, const SubgraphDictionary& dict) const {
        GraphTrace trace;
        trace.structure = resolve_structure(graph, dict);
        const Eigen::Index d = embeddings.cols();
        const int n = graph.atom_count();

        Eigen::MatrixXd h0(d, n);
        for (int v = 0; v < n; ++v) {
            h0.col(v) = embeddings.row(trace.structure.types[static_cast<std::size_t>(v)])
                            .transpose();
        }
        trace.h.push_back(std::move(h0));

        for (const auto& w : layer_weights) {
            const Eigen::MatrixXd& h = trace.h.back();
            Eigen::MatrixXd m(d, n);
            for (int v = 0; v < n; ++v) {
                std::vector<Eigen::VectorXd> neigh;
                neigh.reserve(trace.structure.neighbors[static_cast<std::size_t>(v)].size());
                for (int u : trace.structure.neighbors[static_cast<std::size_t>(v)]) {
                    neigh.push_back(h.col(u));
                }
                m.col(v) = h.col(v) + canonical_sum(std::move(neigh), d);
            }
            Eigen::MatrixXd z(d, n);
            for (int v = 0; v < n; ++v) z.col(v) = w * m.col(v);
            trace.m.push_back(std::move(m));
            trace.z.push_back(z);
            trace.h.push_back(z.cwiseMax(0.0));
        }

        std::vector<Eigen::VectorXd> finals;
        finals.reserve(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) finals.push_back(trace.h.back().col(v));
        trace.readout = canonical_sum(std::move(finals), d) / static_cast<double>(n);
        return trace;
    }

    // Backpropagates a gradient on the readout into parameter gradients.
    void backward(const GraphTrace& trace, const Eigen::VectorXd& grad_readout,
                  Eigen::MatrixXd& grad_embeddings,
                  std::vector<Eigen::MatrixXd>& grad_layer_weights) const {
        const Eigen::Index d = embeddings.cols();
        const int n = static_cast<int>(trace.structure.types.size());
        const int layers = static_cast<int>(layer_weights.size());

        Eigen::MatrixXd grad_h(d, n);
        for (int v = 0; v < n; ++v) grad_h.col(v) = grad_readout / static_cast<double>(n);

        for (int l = layers - 1; l >= 0; --l) {
            const std::size_t lu = static_cast<std::size_t>(l);
            Eigen::MatrixXd grad_z =
                (trace.z[lu].array() > 0.0).select(grad_h, 0.0);
            grad_layer_weights[lu] += grad_z * trace.m[lu].transpose();
            Eigen::MatrixXd grad_m = layer_weights[lu].transpose() * grad_z;
            // m_u = h_u + sum_{w in N(u)} h_w, and the graph is undirected,
            // so dL/dh_v = grad_m_v + sum over neighbors' grad_m.
            Eigen::MatrixXd next(d, n);
            for (int v = 0; v < n; ++v) {
                Eigen::VectorXd g = grad_m.col(v);
                for (int u : trace.structure.neighbors[static_cast<std::size_t>(v)]) {
                    g += grad_m.col(u);
                }
                next.col(v) = g;
            }
            grad_h = std::move(next);
        }
        for (int v = 0; v < n; ++v) {
            grad_embeddings.row(trace.structure.types[static_cast<std::size_t>(v)]) +=
                grad_h.col(v).transpose();
        }
    }
};

}  // namespace

GnnModel::GnnModel(SubgraphDictionary dict, Eigen::MatrixXd embeddings,
                   std::vector<Eigen::MatrixXd> layer_weights, Mlp head, Eigen::Index cell_dim,
                   GnnConfig cfg)
    : dict_(std::move(dict)),
      embeddings_(std::move(embeddings)),
      layer_weights_(std::move(layer_weights)),
      head_(std::move(head)),
      cell_dim_(cell_dim),
      config_(std::move(cfg)) {
    if (embeddings_.rows() != dict_.vocabulary_size()) {
        throw ShapeError("gnn: embedding table does not cover the dictionary");
    }
}

Eigen::VectorXd GnnModel::embed(const MolecularGraph& graph) const {
    GnnForward fwd{embeddings_, layer_weights_};
    return fwd.run(graph, dict_).readout;
}

double GnnModel::predict_one(const MolecularGraph& a, const MolecularGraph& b,
                             const Eigen::VectorXd& cell) const {
    if (cell.size() != cell_dim_) {
        throw ShapeError("gnn predict: cell vector has " + std::to_string(cell.size()) +
                         " entries, expected " + std::to_string(cell_dim_));
    }
    Eigen::VectorXd input(2 * config_.embed_dim + cell_dim_);
    input.segment(0, config_.embed_dim) = embed(a);
    input.segment(config_.embed_dim, config_.embed_dim) = embed(b);
    input.segment(2 * config_.embed_dim, cell_dim_) = cell;
    Eigen::MatrixXd out = head_.forward(input, nullptr, nullptr);
    return out(0, 0);
}

Eigen::VectorXd GnnModel::predict(const std::vector<MolecularGraph>& graphs,
                                  const std::vector<std::pair<int, int>>& pairs,
                                  const Eigen::MatrixXd& cell_features) const {
    if (static_cast<Eigen::Index>(pairs.size()) != cell_features.rows()) {
        throw ShapeError("gnn predict: pair count does not match cell feature rows");
    }
    // Each unique graph is embedded once.
    std::vector<Eigen::VectorXd> embeds;
    embeds.reserve(graphs.size());
    for (const auto& g : graphs) embeds.push_back(embed(g));

    Eigen::VectorXd out(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs[i];
        Eigen::VectorXd input(2 * config_.embed_dim + cell_dim_);
        input.segment(0, config_.embed_dim) = embeds[static_cast<std::size_t>(a)];
        input.segment(config_.embed_dim, config_.embed_dim) = embeds[static_cast<std::size_t>(b)];
        input.segment(2 * config_.embed_dim, cell_dim_) =
            cell_features.row(static_cast<Eigen::Index>(i)).transpose();
        out[static_cast<Eigen::Index>(i)] = head_.forward(input, nullptr, nullptr)(0, 0);
    }
    return out;
}

void GnnModel::save(std::ostream& out) const { save_gnn(*this, out); }

Eigen::VectorXd GnnModel::parameter_vector() const {
    Eigen::Index total = embeddings_.size();
    for (const auto& w : layer_weights_) total += w.size();
    Eigen::VectorXd head_flat = head_.parameter_vector();
    Eigen::VectorXd flat(total + head_flat.size());
    Eigen::Index at = 0;
    for (Eigen::Index j = 0; j < embeddings_.cols(); ++j) {
        for (Eigen::Index i = 0; i < embeddings_.rows(); ++i) flat[at++] = embeddings_(i, j);
    }
    for (const auto& w : layer_weights_) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            for (Eigen::Index i = 0; i < w.rows(); ++i) flat[at++] = w(i, j);
        }
    }
    flat.segment(at, head_flat.size()) = head_flat;
    return flat;
}

void GnnModel::set_parameter_vector(const Eigen::VectorXd& flat) {
    Eigen::Index at = 0;
    for (Eigen::Index j = 0; j < embeddings_.cols(); ++j) {
        for (Eigen::Index i = 0; i < embeddings_.rows(); ++i) embeddings_(i, j) = flat[at++];
    }
    for (auto& w : layer_weights_) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = flat[at++];
        }
    }
    head_.set_parameter_vector(flat.segment(at, flat.size() - at));
}

double GnnModel::loss(const GraphPairExamples& data) const {
    Eigen::VectorXd pred = predict(data.graphs, data.pairs, data.cell_features);
    return (pred - data.targets).squaredNorm() / static_cast<double>(data.targets.size());
}

Eigen::VectorXd GnnModel::loss_gradient(const GraphPairExamples& data) const {
    GnnForward fwd{embeddings_, layer_weights_};

    GnnGradients grads;
    grads.embeddings = Eigen::MatrixXd::Zero(embeddings_.rows(), embeddings_.cols());
    for (const auto& w : layer_weights_) {
        grads.layer_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    grads.head = head_.zero_gradients();

    std::vector<GraphTrace> traces;
    traces.reserve(data.graphs.size());
    for (const auto& g : data.graphs) traces.push_back(fwd.run(g, dict_));

    const double n = static_cast<double>(data.targets.size());
    const Eigen::Index d = config_.embed_dim;
    for (std::size_t i = 0; i < data.pairs.size(); ++i) {
        auto [a, b] = data.pairs[i];
        Eigen::VectorXd input(2 * d + cell_dim_);
        input.segment(0, d) = traces[static_cast<std::size_t>(a)].readout;
        input.segment(d, d) = traces[static_cast<std::size_t>(b)].readout;
        input.segment(2 * d, cell_dim_) =
            data.cell_features.row(static_cast<Eigen::Index>(i)).transpose();

        Mlp::Trace head_trace;
        double pred = head_.forward(input, &head_trace, nullptr)(0, 0);
        double grad_pred = 2.0 * (pred - data.targets[static_cast<Eigen::Index>(i)]) / n;

        Eigen::MatrixXd grad_out(1, 1);
        grad_out(0, 0) = grad_pred;
        Eigen::MatrixXd grad_input = head_.backward(head_trace, grad_out, nullptr, grads.head);

        fwd.backward(traces[static_cast<std::size_t>(a)], grad_input.col(0).segment(0, d),
                     grads.embeddings, grads.layer_weights);
        fwd.backward(traces[static_cast<std::size_t>(b)], grad_input.col(0).segment(d, d),
                     grads.embeddings, grads.layer_weights);
    }

    Eigen::Index total = grads.embeddings.size();
    for (const auto& w : grads.layer_weights) total += w.size();
    Eigen::VectorXd head_flat = Mlp::flatten(grads.head);
    Eigen::VectorXd flat(total + head_flat.size());
    Eigen::Index at = 0;
    for (Eigen::Index j = 0; j < grads.embeddings.cols(); ++j) {
        for (Eigen::Index i = 0; i < grads.embeddings.rows(); ++i) {
            flat[at++] = grads.embeddings(i, j);
        }
    }
    for (const auto& w : grads.layer_weights) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            for (Eigen::Index i = 0; i < w.rows(); ++i) flat[at++] = w(i, j);
        }
    }
    flat.segment(at, head_flat.size()) = head_flat;
    return flat;
}

GnnModel fit_gnn(const GraphPairExamples& data, const GnnConfig& cfg) {
    if (cfg.embed_dim < 1) throw ArgumentError("fit_gnn: embed_dim must be positive");
    if (cfg.radius < 0) throw ArgumentError("fit_gnn: radius must be non-negative");
    if (cfg.layers < 1) throw ArgumentError("fit_gnn: layers must be positive");
    if (cfg.epochs < 1) throw ArgumentError("fit_gnn: epochs must be positive");
    validate_fcnn_config(cfg.head);
    if (data.graphs.empty() || data.pairs.empty()) {
        throw ArgumentError("fit_gnn: no training examples");
    }
    if (static_cast<Eigen::Index>(data.pairs.size()) != data.targets.size() ||
        static_cast<Eigen::Index>(data.pairs.size()) != data.cell_features.rows()) {
        throw ShapeError("fit_gnn: pairs, cell features and targets must align");
    }
    for (auto [a, b] : data.pairs) {
        if (a < 0 || b < 0 || a >= static_cast<int>(data.graphs.size()) ||
            b >= static_cast<int>(data.graphs.size())) {
            throw ArgumentError("fit_gnn: pair index out of range");
        }
    }

    // The dictionary grows over all training graphs, then freezes; training
    // can therefore never see an unknown type.
    SubgraphDictionary dict(cfg.radius, cfg.bond_orders_in_types);
    for (const auto& g : data.graphs) assign_r_radius_types(g, cfg.radius, dict);
    dict.freeze();

    const Eigen::Index cell_dim = data.cell_features.cols();
    Rng rng(cfg.seed);

    Eigen::MatrixXd embeddings(dict.vocabulary_size(), cfg.embed_dim);
    const double embed_limit = std::sqrt(3.0 / static_cast<double>(cfg.embed_dim));
    for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
        for (Eigen::Index j = 0; j < embeddings.cols(); ++j) {
            embeddings(i, j) = rng.next_symmetric(embed_limit);
        }
    }

    std::vector<Eigen::MatrixXd> layer_weights;
    const double w_limit = std::sqrt(6.0 / static_cast<double>(cfg.embed_dim));
    for (int l = 0; l < cfg.layers; ++l) {
        Eigen::MatrixXd w(cfg.embed_dim, cfg.embed_dim);
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.next_symmetric(w_limit);
        }
        layer_weights.push_back(std::move(w));
    }

    Mlp head({static_cast<int>(2 * cfg.embed_dim + cell_dim), cfg.head.hidden[0],
              cfg.head.hidden[1], 1},
             rng);
    {
        // Output bias starts at the target mean, as in fit_fcnn.
        auto weights = head.weights();
        auto biases = head.biases();
        biases.back()[0] = data.targets.mean();
        head.set_layers(std::move(weights), std::move(biases));
    }

    GnnModel model(std::move(dict), std::move(embeddings), std::move(layer_weights),
                   std::move(head), cell_dim, cfg);

    GnnForward fwd{model.embeddings_, model.layer_weights_};

    const std::size_t n = data.pairs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    const int batch_size = cfg.head.batch_size;
    const double lr = cfg.head.learning_rate;
    const double dropout = cfg.head.dropout;

    GnnGradients grads;
    grads.embeddings = Eigen::MatrixXd::Zero(model.embeddings_.rows(), model.embeddings_.cols());
    for (const auto& w : model.layer_weights_) {
        grads.layer_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    grads.head = model.head_.zero_gradients();

    const Eigen::Index d = cfg.embed_dim;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch_size)) {
            const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(batch_size),
                                                        n - start);
            grads.embeddings.setZero();
            for (auto& w : grads.layer_weights) w.setZero();
            grads.head.setZero();

            double batch_loss = 0.0;
            for (std::size_t k = 0; k < b; ++k) {
                const std::size_t idx = order[start + k];
                auto [ga, gb] = data.pairs[idx];
                GraphTrace ta = fwd.run(data.graphs[static_cast<std::size_t>(ga)], model.dict_);
                GraphTrace tb = fwd.run(data.graphs[static_cast<std::size_t>(gb)], model.dict_);

                Eigen::VectorXd input(2 * d + cell_dim);
                input.segment(0, d) = ta.readout;
                input.segment(d, d) = tb.readout;
                input.segment(2 * d, cell_dim) =
                    data.cell_features.row(static_cast<Eigen::Index>(idx)).transpose();

                std::vector<Eigen::MatrixXd> masks;
                const std::vector<Eigen::MatrixXd>* mask_ptr = nullptr;
                if (dropout > 0.0) {
                    masks = model.head_.make_dropout_masks(1, dropout, rng);
                    mask_ptr = &masks;
                }

                Mlp::Trace head_trace;
                double pred = model.head_.forward(input, &head_trace, mask_ptr)(0, 0);
                double err = pred - data.targets[static_cast<Eigen::Index>(idx)];
                batch_loss += err * err;

                Eigen::MatrixXd grad_out(1, 1);
                grad_out(0, 0) = 2.0 * err / static_cast<double>(b);
                Eigen::MatrixXd grad_input =
                    model.head_.backward(head_trace, grad_out, mask_ptr, grads.head);

                fwd.backward(ta, grad_input.col(0).segment(0, d), grads.embeddings,
                             grads.layer_weights);
                fwd.backward(tb, grad_input.col(0).segment(d, d), grads.embeddings,
                             grads.layer_weights);
            }
            if (!std::isfinite(batch_loss)) {
                throw DivergenceError("fit_gnn: non-finite training loss", epoch);
            }

            model.embeddings_ -= lr * grads.embeddings;
            for (std::size_t l = 0; l < model.layer_weights_.size(); ++l) {
                model.layer_weights_[l] -= lr * grads.layer_weights[l];
            }
            model.head_.apply_sgd(grads.head, lr);
        }
    }
    return model;
}

Eigen::MatrixXd extract_gnnr(const GnnModel& model, const std::vector<MolecularGraph>& graphs) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(graphs.size()), model.config().embed_dim);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = model.embed(graphs[i]).transpose();
    }
    return out;
}

}  // namespace synkit
