#include "synkit/eval.hpp"

#include "synkit/decision_tree.hpp"
#include "synkit/errors.hpp"
#include "synkit/parallel.hpp"
#include "synkit/regressor.hpp"
#include "synkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>

namespace synkit {

int FoldPlan::fold_of(const std::string& pair_id) const {
    auto it = assignment.find(pair_id);
    if (it == assignment.end()) {
        throw MissingKeyError("fold plan does not cover pair '" + pair_id + "'");
    }
    return it->second;
}

FoldPlan make_folds(const std::vector<SynergyInstance>& instances, int k, std::uint64_t seed) {
    if (k < 2) throw ArgumentError("make_folds: need at least 2 folds");
    std::set<std::string> unique_pairs;
    for (const auto& inst : instances) {
        unique_pairs.insert(unordered_pair_id(inst.drug_a, inst.drug_b));
    }
    if (unique_pairs.size() < static_cast<std::size_t>(k)) {
        throw ArgumentError("make_folds: " + std::to_string(unique_pairs.size()) +
                            " distinct pairs cannot fill " + std::to_string(k) + " folds");
    }

    // Sorted pair ids shuffled by the seed: the plan is a pure function of
    // (pairs, k, seed) on every platform.
    std::vector<std::string> pairs(unique_pairs.begin(), unique_pairs.end());
    Rng rng(seed);
    rng.shuffle(pairs);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        plan.assignment[pairs[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return plan;
}

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& y) {
    if (pred.size() != y.size()) {
        throw ShapeError("mse: lengths differ (" + std::to_string(pred.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    }
    if (pred.size() == 0) throw ArgumentError("mse: empty vectors");
    return (pred - y).squaredNorm() / static_cast<double>(pred.size());
}

double pearson(const Eigen::VectorXd& pred, const Eigen::VectorXd& y) {
    if (pred.size() != y.size()) {
        throw ShapeError("pearson: lengths differ (" + std::to_string(pred.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    }
    if (pred.size() < 2) throw ArgumentError("pearson: need at least 2 samples");
    Eigen::VectorXd dp = pred.array() - pred.mean();
    Eigen::VectorXd dy = y.array() - y.mean();
    double sp = dp.squaredNorm();
    double sy = dy.squaredNorm();
    if (sp == 0.0 || sy == 0.0) {
        throw DegenerateSampleError("pearson: correlation undefined for constant input");
    }
    double rho = dp.dot(dy) / std::sqrt(sp * sy);
    return std::clamp(rho, -1.0, 1.0);
}

// --- Wilcoxon signed-rank ---------------------------------------------------

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) {
        throw ShapeError("wilcoxon: lengths differ (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    }
    std::vector<double> diffs;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    const int n = static_cast<int>(diffs.size());
    if (n == 0) throw DegenerateSampleError("wilcoxon: all differences are zero");

    // Average ranks of |d|.
    std::vector<int> idx(diffs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) {
        return std::abs(diffs[static_cast<std::size_t>(x)]) <
               std::abs(diffs[static_cast<std::size_t>(y)]);
    });
    std::vector<double> ranks(diffs.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() &&
               std::abs(diffs[static_cast<std::size_t>(idx[j + 1])]) ==
                   std::abs(diffs[static_cast<std::size_t>(idx[i])])) {
            ++j;
        }
        double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[static_cast<std::size_t>(idx[t])] = avg_rank;
        i = j + 1;
    }

    double w_plus = 0.0, w_minus = 0.0;
    for (std::size_t t = 0; t < diffs.size(); ++t) {
        (diffs[t] > 0.0 ? w_plus : w_minus) += ranks[t];
    }
    WilcoxonResult result;
    result.statistic = std::min(w_plus, w_minus);
    result.n = n;

    if (n <= 20) {
        // Exact: every sign pattern is equally likely under H0; the ranks
        // stay fixed, only the signs flip.
        const std::uint64_t patterns = 1ULL << n;
        const double total = [&] {
            double s = 0.0;
            for (double r : ranks) s += r;
            return s;
        }();
        std::uint64_t at_or_below = 0;
        for (std::uint64_t mask = 0; mask < patterns; ++mask) {
            double wp = 0.0;
            for (int bit = 0; bit < n; ++bit) {
                if (mask & (1ULL << bit)) wp += ranks[static_cast<std::size_t>(bit)];
            }
            double stat = std::min(wp, total - wp);
            if (stat <= result.statistic) ++at_or_below;
        }
        result.p_value = static_cast<double>(at_or_below) / static_cast<double>(patterns);
        result.exact = true;
    } else {
        const double nd = static_cast<double>(n);
        double mu = nd * (nd + 1.0) / 4.0;
        double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
        // Tie correction: subtract sum(t^3 - t)/48 over tie groups.
        std::size_t s = 0;
        while (s < idx.size()) {
            std::size_t e = s;
            while (e + 1 < idx.size() &&
                   std::abs(diffs[static_cast<std::size_t>(idx[e + 1])]) ==
                       std::abs(diffs[static_cast<std::size_t>(idx[s])])) {
                ++e;
            }
            double t = static_cast<double>(e - s + 1);
            var -= (t * t * t - t) / 48.0;
            s = e + 1;
        }
        double z = (result.statistic - mu + 0.5) / std::sqrt(var);
        result.p_value = std::clamp(2.0 * normal_cdf(z), 0.0, 1.0);
        result.exact = false;
    }
    return result;
}

WilcoxonResult compare_models(const EvalReport& a, const EvalReport& b) {
    Eigen::Map<const Eigen::VectorXd> ma(a.fold_mse.data(),
                                         static_cast<Eigen::Index>(a.fold_mse.size()));
    Eigen::Map<const Eigen::VectorXd> mb(b.fold_mse.data(),
                                         static_cast<Eigen::Index>(b.fold_mse.size()));
    return wilcoxon_signed_rank(ma, mb);
}

WilcoxonResult compare_predictions(const Eigen::VectorXd& pred_a, const Eigen::VectorXd& pred_b,
                                   const Eigen::VectorXd& y) {
    if (pred_a.size() != y.size() || pred_b.size() != y.size()) {
        throw ShapeError("compare_predictions: lengths do not align");
    }
    Eigen::VectorXd err_a = (pred_a - y).cwiseAbs();
    Eigen::VectorXd err_b = (pred_b - y).cwiseAbs();
    return wilcoxon_signed_rank(err_a, err_b);
}

// --- report -------------------------------------------------------------------

EvalReport summarize_folds(std::vector<double> fold_mse, std::vector<double> fold_pearson) {
    if (fold_mse.size() != fold_pearson.size() || fold_mse.empty()) {
        throw ShapeError("summarize_folds: fold metric vectors must align and be non-empty");
    }
    EvalReport report;
    report.fold_mse = std::move(fold_mse);
    report.fold_pearson = std::move(fold_pearson);

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto sample_std = [](const std::vector<double>& v, double mean) {
        if (v.size() < 2) return 0.0;
        double s = 0.0;
        for (double x : v) s += (x - mean) * (x - mean);
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    };
    report.mse_mean = mean_of(report.fold_mse);
    report.mse_std = sample_std(report.fold_mse, report.mse_mean);
    report.pearson_mean = mean_of(report.fold_pearson);
    report.pearson_std = sample_std(report.fold_pearson, report.pearson_mean);
    return report;
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
    out << "fold,mse,pearson\n";
    for (std::size_t f = 0; f < report.fold_mse.size(); ++f) {
        out << f << ',' << format_double(report.fold_mse[f]) << ','
            << format_double(report.fold_pearson[f]) << "\n";
    }
    out << "mean," << format_double(report.mse_mean) << ',' << format_double(report.pearson_mean)
        << "\n";
    out << "std," << format_double(report.mse_std) << ',' << format_double(report.pearson_std)
        << "\n";
}

EvalReport read_report_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line) || line != "fold,mse,pearson") {
        throw FormatError(origin + ": bad header, expected `fold,mse,pearson`");
    }
    std::vector<double> fold_mse, fold_pearson;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string fold, mse_s, rho_s;
        std::getline(ls, fold, ',');
        std::getline(ls, mse_s, ',');
        std::getline(ls, rho_s, ',');
        if (fold == "mean" || fold == "std") continue;
        fold_mse.push_back(std::strtod(mse_s.c_str(), nullptr));
        fold_pearson.push_back(std::strtod(rho_s.c_str(), nullptr));
    }
    return summarize_folds(std::move(fold_mse), std::move(fold_pearson));
}

// --- cross-validation ----------------------------------------------------------

std::string learner_kind(const LearnerConfig& cfg) {
    struct Visitor {
        std::string operator()(const ElasticNetConfig&) const { return "elastic_net"; }
        std::string operator()(const TreeConfig&) const { return "decision_tree"; }
        std::string operator()(const ForestConfig&) const { return "random_forest"; }
        std::string operator()(const GbmConfig&) const { return "gbm"; }
        std::string operator()(const FcnnConfig&) const { return "fcnn"; }
        std::string operator()(const GnnConfig&) const { return "gnn"; }
    };
    return std::visit(Visitor{}, cfg);
}

namespace {

std::unique_ptr<Regressor> fit_tabular_learner(const LearnerConfig& cfg, const Eigen::MatrixXd& X,
                                               const Eigen::VectorXd& y) {
    struct Visitor {
        const Eigen::MatrixXd& X;
        const Eigen::VectorXd& y;

        std::unique_ptr<Regressor> operator()(const ElasticNetConfig& c) const {
            return std::make_unique<LinearModel>(fit_elastic_net(X, y, c));
        }
        std::unique_ptr<Regressor> operator()(const TreeConfig& c) const {
            return std::make_unique<DecisionTree>(fit_decision_tree(X, y, c));
        }
        std::unique_ptr<Regressor> operator()(const ForestConfig& c) const {
            return std::make_unique<RandomForestModel>(fit_random_forest(X, y, c));
        }
        std::unique_ptr<Regressor> operator()(const GbmConfig& c) const {
            return std::make_unique<GbmModel>(fit_gbm(X, y, c));
        }
        std::unique_ptr<Regressor> operator()(const FcnnConfig& c) const {
            return std::make_unique<FcnnModel>(fit_fcnn(X, y, c));
        }
        std::unique_ptr<Regressor> operator()(const GnnConfig&) const {
            throw ArgumentError("gnn is not a tabular learner");
        }
    };
    return std::visit(Visitor{X, y}, cfg);
}

struct FoldSlices {
    std::vector<SynergyInstance> train;
    std::vector<SynergyInstance> test;
    std::vector<Eigen::Index> test_instance_indices;  // into the full instance list
};

FoldSlices slice_fold(const std::vector<SynergyInstance>& instances, const FoldPlan& plan,
                      int fold) {
    FoldSlices s;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        int f = plan.fold_of(unordered_pair_id(inst.drug_a, inst.drug_b));
        if (f == fold) {
            s.test.push_back(inst);
            s.test_instance_indices.push_back(static_cast<Eigen::Index>(i));
        } else {
            s.train.push_back(inst);
        }
    }
    return s;
}

std::unordered_set<std::string> drug_ids_of(const std::vector<SynergyInstance>& instances) {
    std::unordered_set<std::string> ids;
    for (const auto& inst : instances) {
        ids.insert(inst.drug_a);
        ids.insert(inst.drug_b);
    }
    return ids;
}

}  // namespace

GraphPairExamples build_graph_examples(const std::vector<SynergyInstance>& instances,
                                       const std::map<std::string, MolecularGraph>& structures,
                                       const RepresentationTable& cell_table) {
    GraphPairExamples data;
    std::map<std::string, int> graph_index;
    auto graph_of = [&](const std::string& drug) {
        auto it = graph_index.find(drug);
        if (it != graph_index.end()) return it->second;
        auto sit = structures.find(drug);
        if (sit == structures.end()) {
            throw MissingKeyError("no structure for drug '" + drug + "'");
        }
        int idx = static_cast<int>(data.graphs.size());
        data.graphs.push_back(sit->second);
        graph_index.emplace(drug, idx);
        return idx;
    };

    const Eigen::Index n = static_cast<Eigen::Index>(instances.size());
    data.cell_features.resize(2 * n, cell_table.dim());
    data.targets.resize(2 * n);
    data.pairs.resize(static_cast<std::size_t>(2 * n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& inst = instances[static_cast<std::size_t>(i)];
        int ga = graph_of(inst.drug_a);
        int gb = graph_of(inst.drug_b);
        Eigen::RowVectorXd cell = cell_table.vector_of(inst.cell_line);
        data.pairs[static_cast<std::size_t>(i)] = {ga, gb};
        data.pairs[static_cast<std::size_t>(n + i)] = {gb, ga};
        data.cell_features.row(i) = cell;
        data.cell_features.row(n + i) = cell;
        data.targets[i] = inst.score;
        data.targets[n + i] = inst.score;
    }
    return data;
}

EvalReport cross_validate(const PipelineConfig& pipeline, const CvInputs& inputs,
                          const FoldPlan& plan, int threads, CvOutputs* outputs) {
    if (inputs.instances.empty()) throw ArgumentError("cross_validate: no instances");
    for (const auto& inst : inputs.instances) {
        plan.fold_of(unordered_pair_id(inst.drug_a, inst.drug_b));  // must be covered
    }
    const bool graph_path = std::holds_alternative<GnnConfig>(pipeline.learner);
    const Eigen::Index n = static_cast<Eigen::Index>(inputs.instances.size());

    std::vector<double> fold_mse(static_cast<std::size_t>(plan.k));
    std::vector<double> fold_pearson(static_cast<std::size_t>(plan.k));
    Eigen::VectorXd oof = Eigen::VectorXd::Zero(2 * n);

    parallel_for(static_cast<std::size_t>(plan.k), threads, [&](std::size_t f) {
        try {
            FoldSlices slices = slice_fold(inputs.instances, plan, static_cast<int>(f));
            if (slices.train.empty() || slices.test.empty()) {
                throw ArgumentError("fold has no training or no test instances");
            }

            Eigen::VectorXd pred;
            Eigen::VectorXd truth;
            if (graph_path) {
                const auto& cfg = std::get<GnnConfig>(pipeline.learner);
                GraphPairExamples train =
                    build_graph_examples(slices.train, inputs.structures, inputs.cell_table);
                GnnModel model = fit_gnn(train, cfg);
                GraphPairExamples test =
                    build_graph_examples(slices.test, inputs.structures, inputs.cell_table);
                pred = model.predict(test.graphs, test.pairs, test.cell_features);
                truth = test.targets;
            } else {
                RepresentationTable drug_table = inputs.drug_table;
                if (pipeline.normalize_drugs) {
                    TanhNormalizer norm = fit_tanh_normalizer(
                        inputs.drug_table, drug_ids_of(slices.train), pipeline.tanh_scale);
                    drug_table = apply_normalizer(norm, inputs.drug_table);
                }
                AssembledDataset train = assemble_pairs(slices.train, drug_table,
                                                        inputs.cell_table);
                AssembledDataset test = assemble_pairs(slices.test, drug_table,
                                                       inputs.cell_table);
                auto model = fit_tabular_learner(pipeline.learner, train.features, train.targets);
                pred = model->predict(test.features);
                truth = test.targets;
            }

            fold_mse[f] = mse(pred, truth);
            fold_pearson[f] = pearson(pred, truth);

            const Eigen::Index fold_n = static_cast<Eigen::Index>(slices.test.size());
            for (Eigen::Index j = 0; j < fold_n; ++j) {
                Eigen::Index g = slices.test_instance_indices[static_cast<std::size_t>(j)];
                oof[g] = pred[j];
                oof[n + g] = pred[fold_n + j];
            }
        } catch (const std::exception& e) {
            throw Error("fold " + std::to_string(f) + ": " + e.what());
        }
    });

    if (outputs) {
        outputs->oof_predictions = oof;
        outputs->targets.resize(2 * n);
        outputs->row_meta.resize(static_cast<std::size_t>(2 * n));
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& inst = inputs.instances[static_cast<std::size_t>(i)];
            std::string pid = unordered_pair_id(inst.drug_a, inst.drug_b);
            outputs->targets[i] = inst.score;
            outputs->targets[n + i] = inst.score;
            outputs->row_meta[static_cast<std::size_t>(i)] = {pid, inst.cell_line, false};
            outputs->row_meta[static_cast<std::size_t>(n + i)] = {pid, inst.cell_line, true};
        }
    }
    return summarize_folds(std::move(fold_mse), std::move(fold_pearson));
}

}  // namespace synkit
