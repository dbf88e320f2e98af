#include "synkit/model_io.hpp"

#include "synkit/decision_tree.hpp"
#include "synkit/elastic_net.hpp"
#include "synkit/errors.hpp"
#include "synkit/fcnn.hpp"
#include "synkit/gbm.hpp"
#include "synkit/gnn.hpp"
#include "synkit/random_forest.hpp"
#include "synkit/rng.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace synkit;

namespace {

struct TabularProblem {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

TabularProblem make_problem(std::uint64_t seed) {
    Rng rng(seed);
    TabularProblem p;
    p.X.resize(20, 3);
    p.y.resize(20);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 3; ++j) p.X(i, j) = rng.next_symmetric(2.0);
        p.y[i] = p.X(i, 0) - 0.5 * p.X(i, 2) + rng.next_symmetric(0.3);
    }
    return p;
}

// save -> load -> save must reproduce the bytes, and the reloaded model must
// predict bit-identically.
void check_round_trip(const Regressor& model, const Eigen::MatrixXd& X) {
    std::ostringstream first;
    model.save(first);
    std::istringstream in(first.str());
    auto loaded = load_regressor(in);
    std::ostringstream second;
    loaded->save(second);
    EXPECT_EQ(first.str(), second.str());
    EXPECT_EQ(loaded->kind(), model.kind());
    EXPECT_TRUE((loaded->predict(X).array() == model.predict(X).array()).all());
}

}  // namespace

TEST(ModelIo, ElasticNetRoundTrip) {
    auto p = make_problem(1);
    ElasticNetConfig cfg;
    cfg.strength = 0.05;
    cfg.mixing = 0.7;
    check_round_trip(fit_elastic_net(p.X, p.y, cfg), p.X);
}

TEST(ModelIo, DecisionTreeRoundTrip) {
    auto p = make_problem(2);
    check_round_trip(fit_decision_tree(p.X, p.y, {4, 1}), p.X);
}

TEST(ModelIo, RandomForestRoundTrip) {
    auto p = make_problem(3);
    ForestConfig cfg;
    cfg.n_estimators = 5;
    cfg.tree = {3, 1};
    cfg.feature_fraction = 0.7;
    cfg.seed = 9;
    check_round_trip(fit_random_forest(p.X, p.y, cfg), p.X);
}

TEST(ModelIo, GbmRoundTrip) {
    auto p = make_problem(4);
    GbmConfig cfg;
    cfg.n_estimators = 8;
    cfg.learning_rate = 0.2;
    cfg.tree = {2, 1};
    check_round_trip(fit_gbm(p.X, p.y, cfg), p.X);
}

TEST(ModelIo, FcnnRoundTrip) {
    auto p = make_problem(5);
    FcnnConfig cfg;
    cfg.hidden = {6, 4};
    cfg.epochs = 3;
    cfg.batch_size = 8;
    cfg.seed = 21;
    check_round_trip(fit_fcnn(p.X, p.y, cfg), p.X);
}

TEST(ModelIo, GnnRoundTrip) {
    GraphPairExamples data;
    data.graphs.push_back(parse_smiles_subset("CCO"));
    data.graphs.push_back(parse_smiles_subset("CC(C)O"));
    data.pairs = {{0, 1}, {1, 0}};
    data.cell_features.resize(2, 2);
    data.cell_features << 0.1, 0.9, 0.9, 0.1;
    data.targets.resize(2);
    data.targets << 2.0, 2.0;

    GnnConfig cfg;
    cfg.embed_dim = 5;
    cfg.radius = 1;
    cfg.layers = 2;
    cfg.head.hidden = {5, 4};
    cfg.head.batch_size = 2;
    cfg.epochs = 2;
    cfg.seed = 33;
    GnnModel model = fit_gnn(data, cfg);

    std::ostringstream first;
    model.save(first);
    std::istringstream in(first.str());
    GnnModel loaded = load_gnn(in);
    std::ostringstream second;
    loaded.save(second);
    EXPECT_EQ(first.str(), second.str());

    MolecularGraph g = parse_smiles_subset("CCO");
    EXPECT_TRUE((loaded.embed(g).array() == model.embed(g).array()).all());
    Eigen::VectorXd pred_orig = model.predict(data.graphs, data.pairs, data.cell_features);
    Eigen::VectorXd pred_back = loaded.predict(data.graphs, data.pairs, data.cell_features);
    EXPECT_TRUE((pred_orig.array() == pred_back.array()).all());
}

TEST(ModelIo, RejectsGarbage) {
    std::istringstream bad("not-a-model 1\n");
    EXPECT_THROW(load_regressor(bad), FormatError);
    std::istringstream wrong_version("synkit-model 99\nkind gbm\n");
    EXPECT_THROW(load_regressor(wrong_version), FormatError);
    std::istringstream unknown_kind("synkit-model 1\nkind mystery\n");
    EXPECT_THROW(load_regressor(unknown_kind), FormatError);
    std::istringstream truncated("synkit-model 1\nkind elastic_net\nstrength 0.1\n");
    EXPECT_THROW(load_regressor(truncated), FormatError);
}
