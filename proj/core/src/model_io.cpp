#include "synkit/model_io.hpp"

#include "synkit/dataio.hpp"
#include "synkit/decision_tree.hpp"
#include "synkit/elastic_net.hpp"
#include "synkit/errors.hpp"
#include "synkit/fcnn.hpp"
#include "synkit/gbm.hpp"
#include "synkit/gnn.hpp"
#include "synkit/random_forest.hpp"
#include "synkit/regressor.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace synkit {

void check_predict_input(const Regressor& model, const Eigen::MatrixXd& X) {
    if (X.rows() > 0 && X.cols() != model.input_width()) {
        throw ShapeError(model.kind() + " predict: input width " + std::to_string(X.cols()) +
                         " does not match training width " + std::to_string(model.input_width()));
    }
}

namespace {

constexpr int kFormatVersion = 1;

void write_header(std::ostream& out, const std::string& kind) {
    out << "synkit-model " << kFormatVersion << "\n";
    out << "kind " << kind << "\n";
}

void write_vector(std::ostream& out, const std::string& tag, const Eigen::VectorXd& v) {
    out << tag << ' ' << v.size();
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v[i]);
    out << "\n";
}

void write_matrix(std::ostream& out, const std::string& tag, const Eigen::MatrixXd& m) {
    out << tag << ' ' << m.rows() << ' ' << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ' ';
            out << format_double(m(i, j));
        }
        out << "\n";
    }
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::string token() {
        std::string t;
        if (!(in_ >> t)) throw FormatError("model file: unexpected end of input");
        return t;
    }

    void expect(const std::string& want) {
        std::string got = token();
        if (got != want) {
            throw FormatError("model file: expected '" + want + "', got '" + got + "'");
        }
    }

    long integer() {
        std::string t = token();
        char* end = nullptr;
        long v = std::strtol(t.c_str(), &end, 10);
        if (end != t.c_str() + t.size()) {
            throw FormatError("model file: bad integer '" + t + "'");
        }
        return v;
    }

    std::uint64_t unsigned64() {
        std::string t = token();
        char* end = nullptr;
        unsigned long long v = std::strtoull(t.c_str(), &end, 10);
        if (end != t.c_str() + t.size()) {
            throw FormatError("model file: bad unsigned integer '" + t + "'");
        }
        return static_cast<std::uint64_t>(v);
    }

    double real() {
        std::string t = token();
        char* end = nullptr;
        double v = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size()) {
            throw FormatError("model file: bad number '" + t + "'");
        }
        return v;
    }

    Eigen::VectorXd vector(const std::string& tag) {
        expect(tag);
        Eigen::Index n = integer();
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = real();
        return v;
    }

    Eigen::MatrixXd matrix(const std::string& tag) {
        expect(tag);
        Eigen::Index rows = integer();
        Eigen::Index cols = integer();
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = real();
        }
        return m;
    }

private:
    std::istream& in_;
};

std::string read_header(Reader& r) {
    r.expect("synkit-model");
    long version = r.integer();
    if (version != kFormatVersion) {
        throw FormatError("model file: unsupported version " + std::to_string(version));
    }
    r.expect("kind");
    return r.token();
}

// --- tree block (shared by tree, forest, gbm) ---------------------------

void write_tree_block(std::ostream& out, const DecisionTree& tree) {
    out << "nodes " << tree.nodes().size() << "\n";
    for (const auto& node : tree.nodes()) {
        out << "node " << (node.leaf ? 1 : 0) << ' ' << node.feature << ' '
            << format_double(node.threshold) << ' ' << node.left << ' ' << node.right << ' '
            << format_double(node.value) << "\n";
    }
}

DecisionTree read_tree_block(Reader& r, Eigen::Index width, const TreeConfig& cfg) {
    r.expect("nodes");
    long count = r.integer();
    std::vector<DecisionTree::Node> nodes;
    nodes.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        r.expect("node");
        DecisionTree::Node node;
        node.leaf = r.integer() != 0;
        node.feature = static_cast<int>(r.integer());
        node.threshold = r.real();
        node.left = static_cast<int>(r.integer());
        node.right = static_cast<int>(r.integer());
        node.value = r.real();
        nodes.push_back(node);
    }
    return DecisionTree(std::move(nodes), width, cfg);
}

void write_tree_config(std::ostream& out, const TreeConfig& cfg) {
    out << "max_depth " << cfg.max_depth << "\n";
    out << "min_samples_leaf " << cfg.min_samples_leaf << "\n";
}

TreeConfig read_tree_config(Reader& r) {
    TreeConfig cfg;
    r.expect("max_depth");
    cfg.max_depth = static_cast<int>(r.integer());
    r.expect("min_samples_leaf");
    cfg.min_samples_leaf = static_cast<int>(r.integer());
    return cfg;
}

// --- mlp block ------------------------------------------------------------

void write_mlp_block(std::ostream& out, const Mlp& net) {
    out << "mlp_layers " << net.weights().size() << "\n";
    for (std::size_t l = 0; l < net.weights().size(); ++l) {
        write_matrix(out, "weights", net.weights()[l]);
        write_vector(out, "bias", net.biases()[l]);
    }
}

Mlp read_mlp_block(Reader& r) {
    r.expect("mlp_layers");
    long layers = r.integer();
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    for (long l = 0; l < layers; ++l) {
        weights.push_back(r.matrix("weights"));
        biases.push_back(r.vector("bias"));
    }
    Mlp net;
    net.set_layers(std::move(weights), std::move(biases));
    return net;
}

void write_fcnn_config(std::ostream& out, const FcnnConfig& cfg) {
    out << "hidden " << cfg.hidden.size();
    for (int h : cfg.hidden) out << ' ' << h;
    out << "\n";
    out << "learning_rate " << format_double(cfg.learning_rate) << "\n";
    out << "dropout " << format_double(cfg.dropout) << "\n";
    out << "epochs " << cfg.epochs << "\n";
    out << "batch_size " << cfg.batch_size << "\n";
    out << "seed " << cfg.seed << "\n";
}

FcnnConfig read_fcnn_config(Reader& r) {
    FcnnConfig cfg;
    r.expect("hidden");
    long n = r.integer();
    cfg.hidden.clear();
    for (long i = 0; i < n; ++i) cfg.hidden.push_back(static_cast<int>(r.integer()));
    r.expect("learning_rate");
    cfg.learning_rate = r.real();
    r.expect("dropout");
    cfg.dropout = r.real();
    r.expect("epochs");
    cfg.epochs = static_cast<int>(r.integer());
    r.expect("batch_size");
    cfg.batch_size = static_cast<int>(r.integer());
    r.expect("seed");
    cfg.seed = r.unsigned64();
    return cfg;
}

// --- per-kind loaders -------------------------------------------------------

std::unique_ptr<Regressor> load_elastic_net(Reader& r) {
    ElasticNetConfig cfg;
    r.expect("strength");
    cfg.strength = r.real();
    r.expect("mixing");
    cfg.mixing = r.real();
    r.expect("tol");
    cfg.tol = r.real();
    r.expect("max_sweeps");
    cfg.max_sweeps = static_cast<int>(r.integer());
    r.expect("intercept");
    double intercept = r.real();
    Eigen::VectorXd beta = r.vector("beta");
    r.expect("end");
    return std::make_unique<LinearModel>(std::move(beta), intercept, cfg);
}

std::unique_ptr<Regressor> load_decision_tree(Reader& r) {
    TreeConfig cfg = read_tree_config(r);
    r.expect("width");
    Eigen::Index width = r.integer();
    auto tree = read_tree_block(r, width, cfg);
    r.expect("end");
    return std::make_unique<DecisionTree>(std::move(tree));
}

std::unique_ptr<Regressor> load_random_forest(Reader& r) {
    ForestConfig cfg;
    r.expect("n_estimators");
    cfg.n_estimators = static_cast<int>(r.integer());
    cfg.tree = read_tree_config(r);
    r.expect("feature_fraction");
    cfg.feature_fraction = r.real();
    r.expect("bootstrap");
    cfg.bootstrap = r.integer() != 0;
    r.expect("seed");
    cfg.seed = r.unsigned64();
    r.expect("width");
    Eigen::Index width = r.integer();
    std::vector<DecisionTree> trees;
    trees.reserve(static_cast<std::size_t>(cfg.n_estimators));
    for (int t = 0; t < cfg.n_estimators; ++t) {
        r.expect("tree");
        long index = r.integer();
        if (index != t) throw FormatError("model file: tree indices out of order");
        trees.push_back(read_tree_block(r, width, cfg.tree));
    }
    r.expect("end");
    return std::make_unique<RandomForestModel>(std::move(trees), cfg);
}

std::unique_ptr<Regressor> load_gbm(Reader& r) {
    GbmConfig cfg;
    r.expect("n_estimators");
    cfg.n_estimators = static_cast<int>(r.integer());
    r.expect("learning_rate");
    cfg.learning_rate = r.real();
    cfg.tree = read_tree_config(r);
    r.expect("width");
    Eigen::Index width = r.integer();
    r.expect("base");
    double base = r.real();
    std::vector<DecisionTree> stages;
    stages.reserve(static_cast<std::size_t>(cfg.n_estimators));
    for (int t = 0; t < cfg.n_estimators; ++t) {
        r.expect("stage");
        long index = r.integer();
        if (index != t) throw FormatError("model file: stage indices out of order");
        stages.push_back(read_tree_block(r, width, cfg.tree));
    }
    r.expect("end");
    return std::make_unique<GbmModel>(base, std::move(stages), cfg, width);
}

std::unique_ptr<Regressor> load_fcnn(Reader& r) {
    FcnnConfig cfg = read_fcnn_config(r);
    Mlp net = read_mlp_block(r);
    r.expect("end");
    return std::make_unique<FcnnModel>(std::move(net), cfg);
}

}  // namespace

// --- savers ---------------------------------------------------------------

void save_linear_model(const LinearModel& model, std::ostream& out) {
    write_header(out, "elastic_net");
    const auto& cfg = model.config();
    out << "strength " << format_double(cfg.strength) << "\n";
    out << "mixing " << format_double(cfg.mixing) << "\n";
    out << "tol " << format_double(cfg.tol) << "\n";
    out << "max_sweeps " << cfg.max_sweeps << "\n";
    out << "intercept " << format_double(model.intercept()) << "\n";
    write_vector(out, "beta", model.beta());
    out << "end\n";
}

void save_decision_tree(const DecisionTree& model, std::ostream& out) {
    write_header(out, "decision_tree");
    write_tree_config(out, model.config());
    out << "width " << model.input_width() << "\n";
    write_tree_block(out, model);
    out << "end\n";
}

void save_random_forest(const RandomForestModel& model, std::ostream& out) {
    write_header(out, "random_forest");
    const auto& cfg = model.config();
    out << "n_estimators " << cfg.n_estimators << "\n";
    write_tree_config(out, cfg.tree);
    out << "feature_fraction " << format_double(cfg.feature_fraction) << "\n";
    out << "bootstrap " << (cfg.bootstrap ? 1 : 0) << "\n";
    out << "seed " << cfg.seed << "\n";
    out << "width " << model.input_width() << "\n";
    for (std::size_t t = 0; t < model.trees().size(); ++t) {
        out << "tree " << t << "\n";
        write_tree_block(out, model.trees()[t]);
    }
    out << "end\n";
}

void save_gbm(const GbmModel& model, std::ostream& out) {
    write_header(out, "gbm");
    const auto& cfg = model.config();
    out << "n_estimators " << cfg.n_estimators << "\n";
    out << "learning_rate " << format_double(cfg.learning_rate) << "\n";
    write_tree_config(out, cfg.tree);
    out << "width " << model.input_width() << "\n";
    out << "base " << format_double(model.base()) << "\n";
    for (std::size_t t = 0; t < model.stages().size(); ++t) {
        out << "stage " << t << "\n";
        write_tree_block(out, model.stages()[t]);
    }
    out << "end\n";
}

void save_fcnn(const FcnnModel& model, std::ostream& out) {
    write_header(out, "fcnn");
    write_fcnn_config(out, model.config());
    write_mlp_block(out, model.net());
    out << "end\n";
}

void save_gnn(const GnnModel& model, std::ostream& out) {
    write_header(out, "gnn");
    const auto& cfg = model.config();
    out << "embed_dim " << cfg.embed_dim << "\n";
    out << "radius " << cfg.radius << "\n";
    out << "layers " << cfg.layers << "\n";
    out << "epochs " << cfg.epochs << "\n";
    out << "seed " << cfg.seed << "\n";
    out << "bond_orders " << (cfg.bond_orders_in_types ? 1 : 0) << "\n";
    out << "head\n";
    write_fcnn_config(out, cfg.head);
    out << "cell_dim " << model.cell_dim() << "\n";

    // Dictionary entries in id order; encodings contain no whitespace.
    const auto& entries = model.dictionary().entries();
    std::vector<const std::string*> by_id(entries.size());
    for (const auto& [enc, id] : entries) by_id[static_cast<std::size_t>(id)] = &enc;
    out << "dictionary " << entries.size() << "\n";
    for (std::size_t id = 0; id < by_id.size(); ++id) {
        out << "entry " << id << ' ' << *by_id[id] << "\n";
    }

    write_matrix(out, "embeddings", model.embeddings());
    out << "layer_weights " << model.layer_weights().size() << "\n";
    for (const auto& w : model.layer_weights()) write_matrix(out, "weights", w);
    write_mlp_block(out, model.head());
    out << "end\n";
}

// --- loaders ----------------------------------------------------------------

std::unique_ptr<Regressor> load_regressor(std::istream& in) {
    Reader r(in);
    std::string kind = read_header(r);
    if (kind == "elastic_net") return load_elastic_net(r);
    if (kind == "decision_tree") return load_decision_tree(r);
    if (kind == "random_forest") return load_random_forest(r);
    if (kind == "gbm") return load_gbm(r);
    if (kind == "fcnn") return load_fcnn(r);
    throw FormatError("model file: unknown kind '" + kind + "'");
}

GnnModel load_gnn(std::istream& in) {
    Reader r(in);
    std::string kind = read_header(r);
    if (kind != "gnn") throw FormatError("model file: expected kind gnn, got '" + kind + "'");

    GnnConfig cfg;
    r.expect("embed_dim");
    cfg.embed_dim = static_cast<int>(r.integer());
    r.expect("radius");
    cfg.radius = static_cast<int>(r.integer());
    r.expect("layers");
    cfg.layers = static_cast<int>(r.integer());
    r.expect("epochs");
    cfg.epochs = static_cast<int>(r.integer());
    r.expect("seed");
    cfg.seed = r.unsigned64();
    r.expect("bond_orders");
    cfg.bond_orders_in_types = r.integer() != 0;
    r.expect("head");
    cfg.head = read_fcnn_config(r);
    r.expect("cell_dim");
    Eigen::Index cell_dim = r.integer();

    r.expect("dictionary");
    long entries = r.integer();
    SubgraphDictionary dict(cfg.radius, cfg.bond_orders_in_types);
    for (long i = 0; i < entries; ++i) {
        r.expect("entry");
        long id = r.integer();
        std::string encoding = r.token();
        dict.insert_entry(encoding, static_cast<int>(id));
    }
    dict.freeze();

    Eigen::MatrixXd embeddings = r.matrix("embeddings");
    r.expect("layer_weights");
    long n_layers = r.integer();
    std::vector<Eigen::MatrixXd> layer_weights;
    for (long l = 0; l < n_layers; ++l) layer_weights.push_back(r.matrix("weights"));
    Mlp head = read_mlp_block(r);
    r.expect("end");

    return GnnModel(std::move(dict), std::move(embeddings), std::move(layer_weights),
                    std::move(head), cell_dim, cfg);
}

std::unique_ptr<Regressor> load_regressor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open model file: " + path);
    return load_regressor(in);
}

GnnModel load_gnn_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open model file: " + path);
    return load_gnn(in);
}

std::string peek_model_kind(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open model file: " + path);
    Reader r(in);
    return read_header(r);
}

void save_model_file(const Regressor& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open file for writing: " + path);
    model.save(out);
}

void save_gnn_file(const GnnModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open file for writing: " + path);
    model.save(out);
}

}  // namespace synkit
