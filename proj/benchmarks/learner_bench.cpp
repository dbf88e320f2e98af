// Microbenchmarks for the hot training and assembly paths.

#include "synkit/dataio.hpp"
#include "synkit/decision_tree.hpp"
#include "synkit/elastic_net.hpp"
#include "synkit/fcnn.hpp"
#include "synkit/gbm.hpp"
#include "synkit/gnn.hpp"
#include "synkit/molgraph.hpp"
#include "synkit/random_forest.hpp"
#include "synkit/rng.hpp"

#include <benchmark/benchmark.h>

using namespace synkit;

namespace {

struct Problem {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

Problem make_problem(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Problem p;
    p.X.resize(rows, cols);
    p.y.resize(rows);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) p.X(i, j) = rng.next_symmetric(2.0);
        p.y[i] = p.X(i, 0) - 0.3 * p.X(i, cols - 1) + rng.next_symmetric(0.5);
    }
    return p;
}

}  // namespace

static void BM_DecisionTreeFit(benchmark::State& state) {
    auto p = make_problem(static_cast<int>(state.range(0)), 16, 1);
    TreeConfig cfg{6, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_decision_tree(p.X, p.y, cfg));
    }
}
BENCHMARK(BM_DecisionTreeFit)->Arg(256)->Arg(1024);

static void BM_GbmFit(benchmark::State& state) {
    auto p = make_problem(396, 26, 2);
    GbmConfig cfg;
    cfg.n_estimators = static_cast<int>(state.range(0));
    cfg.learning_rate = 0.1;
    cfg.tree = {2, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_gbm(p.X, p.y, cfg));
    }
}
BENCHMARK(BM_GbmFit)->Arg(10)->Arg(50);

static void BM_RandomForestFit(benchmark::State& state) {
    auto p = make_problem(396, 26, 3);
    ForestConfig cfg;
    cfg.n_estimators = 50;
    cfg.tree = {6, 1};
    cfg.feature_fraction = 0.5;
    cfg.seed = 7;
    int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_random_forest(p.X, p.y, cfg, threads));
    }
}
BENCHMARK(BM_RandomForestFit)->Arg(1)->Arg(4);

static void BM_ElasticNetFit(benchmark::State& state) {
    auto p = make_problem(396, static_cast<int>(state.range(0)), 4);
    ElasticNetConfig cfg;
    cfg.strength = 0.1;
    cfg.tol = 1e-8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_elastic_net(p.X, p.y, cfg));
    }
}
BENCHMARK(BM_ElasticNetFit)->Arg(26)->Arg(128);

static void BM_FcnnEpoch(benchmark::State& state) {
    auto p = make_problem(396, 26, 5);
    FcnnConfig cfg;
    cfg.hidden = {64, 32};
    cfg.epochs = 1;
    cfg.batch_size = 64;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_fcnn(p.X, p.y, cfg));
    }
}
BENCHMARK(BM_FcnnEpoch);

static void BM_AssemblePairs(benchmark::State& state) {
    Rng rng(6);
    std::vector<std::string> drug_ids, cell_ids;
    Eigen::MatrixXd drug_vecs(12, 64), cell_vecs(3, 128);
    for (int d = 0; d < 12; ++d) drug_ids.push_back("d" + std::to_string(d));
    for (int c = 0; c < 3; ++c) cell_ids.push_back("c" + std::to_string(c));
    for (Eigen::Index i = 0; i < drug_vecs.size(); ++i) {
        drug_vecs.data()[i] = rng.next_real();
    }
    for (Eigen::Index i = 0; i < cell_vecs.size(); ++i) {
        cell_vecs.data()[i] = rng.next_real();
    }
    RepresentationTable drugs("drug", drug_ids, drug_vecs);
    RepresentationTable cells("cell", cell_ids, cell_vecs);
    std::vector<SynergyInstance> instances;
    for (int a = 0; a < 12; ++a) {
        for (int b = a + 1; b < 12; ++b) {
            for (int c = 0; c < 3; ++c) {
                instances.push_back({drug_ids[static_cast<std::size_t>(a)],
                                     drug_ids[static_cast<std::size_t>(b)],
                                     cell_ids[static_cast<std::size_t>(c)], 1.0});
            }
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_pairs(instances, drugs, cells));
    }
}
BENCHMARK(BM_AssemblePairs);

static void BM_GnnEmbed(benchmark::State& state) {
    GraphPairExamples data;
    data.graphs.push_back(parse_smiles_subset("CCO"));
    data.graphs.push_back(parse_smiles_subset("C1CCCCC1"));
    data.pairs = {{0, 1}, {1, 0}};
    data.cell_features = Eigen::MatrixXd::Random(2, 8);
    data.targets.resize(2);
    data.targets << 1.0, 1.0;
    GnnConfig cfg;
    cfg.embed_dim = 25;
    cfg.radius = 2;
    cfg.layers = 3;
    cfg.head.hidden = {32, 16};
    cfg.head.batch_size = 2;
    cfg.epochs = 1;
    GnnModel model = fit_gnn(data, cfg);
    MolecularGraph mol = parse_smiles_subset("OCC(O)CO");
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.embed(mol));
    }
}
BENCHMARK(BM_GnnEmbed);

BENCHMARK_MAIN();
