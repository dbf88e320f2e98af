#pragma once

#include "synkit/dataio.hpp"
#include "synkit/elastic_net.hpp"
#include "synkit/fcnn.hpp"
#include "synkit/gbm.hpp"
#include "synkit/gnn.hpp"
#include "synkit/random_forest.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace synkit {

// Leave-drug-combinations-out fold assignment: every unordered drug pair
// maps to exactly one fold, so no pair ever straddles a train/test split.
struct FoldPlan {
    int k = 5;
    std::map<std::string, int> assignment;  // unordered pair id -> fold
    std::uint64_t seed = 0;

    int fold_of(const std::string& pair_id) const;
};

// Pairs are sorted, shuffled by the seed and dealt round-robin; group counts
// per fold differ by at most one.
FoldPlan make_folds(const std::vector<SynergyInstance>& instances, int k, std::uint64_t seed);

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& y);
double pearson(const Eigen::VectorXd& pred, const Eigen::VectorXd& y);

struct WilcoxonResult {
    double statistic = 0.0;  // W = min(W+, W-)
    double p_value = 1.0;    // two-sided
    int n = 0;               // non-zero differences used
    bool exact = true;
};

// Signed-rank test on paired samples. Zero differences are dropped; ties get
// average ranks. Exact two-sided p by full sign-pattern enumeration for
// n <= 20, normal approximation with continuity correction above.
WilcoxonResult wilcoxon_signed_rank(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Model comparison, default pairing: per-fold MSE vectors of two reports.
WilcoxonResult compare_models(const struct EvalReport& a, const struct EvalReport& b);

// Alternative pairing: per-instance absolute errors of two prediction
// vectors against shared targets.
WilcoxonResult compare_predictions(const Eigen::VectorXd& pred_a, const Eigen::VectorXd& pred_b,
                                   const Eigen::VectorXd& y);

struct EvalReport {
    std::vector<double> fold_mse;
    std::vector<double> fold_pearson;
    double mse_mean = 0.0;
    double mse_std = 0.0;  // sample std across folds
    double pearson_mean = 0.0;
    double pearson_std = 0.0;
};

EvalReport summarize_folds(std::vector<double> fold_mse, std::vector<double> fold_pearson);

// CSV `fold,mse,pearson` rows followed by mean and std summary lines.
void write_report_csv(const EvalReport& report, std::ostream& out);
EvalReport read_report_csv(std::istream& in, const std::string& origin);

// --- cross-validation pipeline -------------------------------------------

using LearnerConfig = std::variant<ElasticNetConfig, TreeConfig, ForestConfig, GbmConfig,
                                   FcnnConfig, GnnConfig>;

std::string learner_kind(const LearnerConfig& cfg);

struct PipelineConfig {
    LearnerConfig learner;
    bool normalize_drugs = true;  // tanh normalization of the drug table
    double tanh_scale = 0.01;
};

struct CvInputs {
    std::vector<SynergyInstance> instances;
    RepresentationTable drug_table;  // tabular learners
    RepresentationTable cell_table;
    // Graph path (GNN): structure per drug id.
    std::map<std::string, MolecularGraph> structures;
};

struct CvOutputs {
    // Out-of-fold predictions indexed like assemble_pairs over all instances:
    // rows [0, N) in instance order, rows [N, 2N) mirrored.
    Eigen::VectorXd oof_predictions;
    Eigen::VectorXd targets;
    std::vector<RowMeta> row_meta;
};

// Graph-path analogue of assemble_pairs: unique structures plus mirrored
// index pairs (originals first, swapped copies after), cells and targets
// duplicated accordingly.
GraphPairExamples build_graph_examples(const std::vector<SynergyInstance>& instances,
                                       const std::map<std::string, MolecularGraph>& structures,
                                       const RepresentationTable& cell_table);

// For each fold: fit the normalizer and learner on the other folds, predict
// the held-out fold (both mirrored rows per instance), and record MSE and
// Pearson. Folds may run in parallel; results are independent of the thread
// count.
EvalReport cross_validate(const PipelineConfig& pipeline, const CvInputs& inputs,
                          const FoldPlan& plan, int threads = 1,
                          CvOutputs* outputs = nullptr);

}  // namespace synkit
