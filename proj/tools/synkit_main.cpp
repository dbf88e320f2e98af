// synkit command-line entry point: cv, train, predict, ensemble, embed,
// report and validate subcommands over the synergy-prediction pipeline.

#include "synkit/config.hpp"
#include "synkit/dataio.hpp"
#include "synkit/ensemble.hpp"
#include "synkit/errors.hpp"
#include "synkit/eval.hpp"
#include "synkit/manifest.hpp"
#include "synkit/model_io.hpp"
#include "synkit/molgraph.hpp"
#include "synkit/regressor.hpp"
#include "synkit/svg_report.hpp"
#include "synkit/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fs = std::filesystem;
using namespace synkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

void ensure_out_dir(const GlobalOptions& opts) {
    if (!fs::exists(opts.out_dir)) fs::create_directories(opts.out_dir);
}

std::string out_path(const GlobalOptions& opts, const std::string& name) {
    return (fs::path(opts.out_dir) / name).string();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open file for writing: " + path);
    out << content;
}

// Applies --seed on top of the config: it overrides both the fold seed and
// the learner seed.
void apply_seed_override(RunConfig& cfg, const GlobalOptions& opts) {
    if (!opts.seed) return;
    cfg.cv.seed = *opts.seed;
    if (cfg.has_model) {
        std::visit(
            [&](auto& learner) {
                using T = std::decay_t<decltype(learner)>;
                if constexpr (std::is_same_v<T, ForestConfig> || std::is_same_v<T, FcnnConfig>) {
                    learner.seed = *opts.seed;
                } else if constexpr (std::is_same_v<T, GnnConfig>) {
                    learner.seed = *opts.seed;
                    learner.head.seed = *opts.seed;
                }
            },
            cfg.learner);
    }
}

Manifest base_manifest(const std::string& command, const RunConfig& cfg,
                       const GlobalOptions& opts) {
    Manifest m;
    m.command = command;
    m.seed = opts.seed.value_or(cfg.cv.seed);
    m.config_echo = cfg.echo;
    if (!opts.config_path.empty()) {
        m.inputs.emplace_back(opts.config_path, checksum_file(opts.config_path));
    }
    return m;
}

void add_input(Manifest& m, const std::string& path) {
    if (!path.empty()) m.inputs.emplace_back(path, checksum_file(path));
}

// --- data loading shared by cv/train/predict ------------------------------

struct LoadedData {
    std::vector<SynergyInstance> instances;
    RepresentationTable drug_table;
    RepresentationTable cell_table;
    std::map<std::string, MolecularGraph> structures;
};

LoadedData load_pipeline_data(const RunConfig& cfg, bool graph_path, Manifest& manifest) {
    LoadedData data;
    if (cfg.data.synergy.empty()) throw ConfigError("field `synergy`: required");
    if (cfg.data.cell_table.empty()) throw ConfigError("field `cell_table`: required");
    data.instances = load_synergy_triples(cfg.data.synergy);
    add_input(manifest, cfg.data.synergy);
    data.cell_table = load_representation_table(cfg.data.cell_table, "cell");
    add_input(manifest, cfg.data.cell_table);

    if (graph_path) {
        if (cfg.data.structures.empty()) {
            throw ConfigError("field `structures`: required for the gnn learner");
        }
        for (const auto& [id, smiles] : load_structures_csv(cfg.data.structures)) {
            try {
                data.structures.emplace(id, parse_smiles_subset(smiles));
            } catch (const ParseError& e) {
                throw Error("drug '" + id + "': " + e.what());
            }
        }
        add_input(manifest, cfg.data.structures);
    } else {
        if (cfg.data.drug_table.empty()) throw ConfigError("field `drug_table`: required");
        data.drug_table = load_representation_table(cfg.data.drug_table, "drug");
        add_input(manifest, cfg.data.drug_table);
    }
    return data;
}

PipelineConfig pipeline_of(const RunConfig& cfg) {
    if (!cfg.has_model) throw ConfigError("section [model]: required");
    PipelineConfig p;
    p.learner = cfg.learner;
    p.normalize_drugs = cfg.data.normalize_drugs;
    p.tanh_scale = cfg.data.tanh_scale;
    return p;
}

// --- subcommands -----------------------------------------------------------

int cmd_validate(const GlobalOptions& opts) {
    RunConfig cfg = load_run_config(opts.config_path);
    check_config_paths(cfg);
    std::cout << "config OK: " << opts.config_path << "\n";
    return kExitOk;
}

int cmd_cv(const GlobalOptions& opts) {
    RunConfig cfg = load_run_config(opts.config_path);
    apply_seed_override(cfg, opts);
    PipelineConfig pipeline = pipeline_of(cfg);
    const bool graph_path = learner_kind(pipeline.learner) == "gnn";

    Manifest manifest = base_manifest("cv", cfg, opts);
    LoadedData data = load_pipeline_data(cfg, graph_path, manifest);

    FoldPlan plan = make_folds(data.instances, cfg.cv.folds, cfg.cv.seed);

    CvInputs inputs{data.instances, data.drug_table, data.cell_table, data.structures};
    CvOutputs outputs;
    EvalReport report = cross_validate(pipeline, inputs, plan, opts.threads, &outputs);

    ensure_out_dir(opts);
    {
        std::ofstream out(out_path(opts, "report.csv"));
        write_report_csv(report, out);
    }
    write_prediction_csv(outputs.oof_predictions, out_path(opts, "oof_predictions.csv"));
    {
        std::ofstream out(out_path(opts, "targets.csv"));
        write_target_csv(outputs.targets, out);
    }
    // Per-fold predictions, keyed by global assembled row index.
    for (int f = 0; f < plan.k; ++f) {
        std::ofstream out(out_path(opts, "fold_" + std::to_string(f) + "_predictions.csv"));
        out << "row_id,prediction\n";
        for (Eigen::Index i = 0; i < outputs.oof_predictions.size(); ++i) {
            if (plan.fold_of(outputs.row_meta[static_cast<std::size_t>(i)].pair_id) == f) {
                out << i << ',' << format_double(outputs.oof_predictions[i]) << "\n";
            }
        }
    }

    manifest.outputs = {"report.csv", "oof_predictions.csv", "targets.csv"};
    for (int f = 0; f < plan.k; ++f) {
        manifest.outputs.push_back("fold_" + std::to_string(f) + "_predictions.csv");
    }
    manifest.notes["std_kind"] = "sample";
    manifest.notes["folds"] = std::to_string(plan.k);
    manifest.notes["learner"] = learner_kind(pipeline.learner);
    write_manifest(manifest, out_path(opts, "manifest.json"));

    std::cout << "cv: mse " << format_double(report.mse_mean) << " +/- "
              << format_double(report.mse_std) << ", pearson "
              << format_double(report.pearson_mean) << " +/- "
              << format_double(report.pearson_std) << "\n";
    return kExitOk;
}

int cmd_train(const GlobalOptions& opts) {
    RunConfig cfg = load_run_config(opts.config_path);
    apply_seed_override(cfg, opts);
    PipelineConfig pipeline = pipeline_of(cfg);
    const bool graph_path = learner_kind(pipeline.learner) == "gnn";

    Manifest manifest = base_manifest("train", cfg, opts);
    LoadedData data = load_pipeline_data(cfg, graph_path, manifest);
    ensure_out_dir(opts);

    if (graph_path) {
        const auto& gnn_cfg = std::get<GnnConfig>(pipeline.learner);
        GraphPairExamples examples =
            build_graph_examples(data.instances, data.structures, data.cell_table);
        GnnModel model = fit_gnn(examples, gnn_cfg);
        save_gnn_file(model, out_path(opts, "model.txt"));
    } else {
        RepresentationTable drug_table = data.drug_table;
        if (pipeline.normalize_drugs) {
            std::unordered_set<std::string> ids(data.drug_table.ids().begin(),
                                                data.drug_table.ids().end());
            TanhNormalizer norm = fit_tanh_normalizer(data.drug_table, ids, pipeline.tanh_scale);
            drug_table = apply_normalizer(norm, data.drug_table);
            std::ofstream out(out_path(opts, "normalizer.txt"));
            out << "synkit-normalizer 1\n";
            out << "scale " << format_double(norm.scale()) << "\n";
            out << "dim " << norm.dim() << "\n";
            out << "means";
            for (Eigen::Index j = 0; j < norm.dim(); ++j) {
                out << ' ' << format_double(norm.means()[j]);
            }
            out << "\nstds";
            for (Eigen::Index j = 0; j < norm.dim(); ++j) {
                out << ' ' << format_double(norm.stds()[j]);
            }
            out << "\n";
        }
        AssembledDataset train = assemble_pairs(data.instances, drug_table, data.cell_table);
        struct FitVisitor {
            const Eigen::MatrixXd& X;
            const Eigen::VectorXd& y;
            int threads;
            std::unique_ptr<Regressor> operator()(const ElasticNetConfig& c) const {
                return std::make_unique<LinearModel>(fit_elastic_net(X, y, c));
            }
            std::unique_ptr<Regressor> operator()(const TreeConfig& c) const {
                return std::make_unique<DecisionTree>(fit_decision_tree(X, y, c));
            }
            std::unique_ptr<Regressor> operator()(const ForestConfig& c) const {
                return std::make_unique<RandomForestModel>(fit_random_forest(X, y, c, threads));
            }
            std::unique_ptr<Regressor> operator()(const GbmConfig& c) const {
                return std::make_unique<GbmModel>(fit_gbm(X, y, c));
            }
            std::unique_ptr<Regressor> operator()(const FcnnConfig& c) const {
                return std::make_unique<FcnnModel>(fit_fcnn(X, y, c));
            }
            std::unique_ptr<Regressor> operator()(const GnnConfig&) const {
                throw ArgumentError("gnn handled on the graph path");
            }
        };
        auto model = std::visit(FitVisitor{train.features, train.targets, opts.threads},
                                pipeline.learner);
        save_model_file(*model, out_path(opts, "model.txt"));
    }

    manifest.outputs = {"model.txt"};
    if (!graph_path && pipeline.normalize_drugs) manifest.outputs.push_back("normalizer.txt");
    manifest.notes["learner"] = learner_kind(pipeline.learner);
    write_manifest(manifest, out_path(opts, "manifest.json"));
    std::cout << "train: wrote " << out_path(opts, "model.txt") << "\n";
    return kExitOk;
}

TanhNormalizer read_normalizer_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open normalizer file: " + path);
    std::string tag;
    int version;
    in >> tag >> version;
    if (tag != "synkit-normalizer" || version != 1) {
        throw FormatError(path + ": not a synkit normalizer file");
    }
    double scale;
    Eigen::Index dim;
    in >> tag >> scale >> tag >> dim;
    Eigen::VectorXd means(dim), stds(dim);
    in >> tag;
    for (Eigen::Index j = 0; j < dim; ++j) in >> means[j];
    in >> tag;
    for (Eigen::Index j = 0; j < dim; ++j) in >> stds[j];
    if (!in) throw FormatError(path + ": truncated normalizer file");
    return TanhNormalizer(means, stds, scale);
}

int cmd_predict(const GlobalOptions& opts, const std::string& model_path,
                const std::string& normalizer_path) {
    RunConfig cfg = load_run_config(opts.config_path);
    apply_seed_override(cfg, opts);
    const std::string kind = peek_model_kind(model_path);
    const bool graph_path = kind == "gnn";

    Manifest manifest = base_manifest("predict", cfg, opts);
    LoadedData data = load_pipeline_data(cfg, graph_path, manifest);
    add_input(manifest, model_path);

    Eigen::VectorXd predictions;
    Eigen::VectorXd targets;
    if (graph_path) {
        GnnModel model = load_gnn_file(model_path);
        GraphPairExamples examples =
            build_graph_examples(data.instances, data.structures, data.cell_table);
        predictions = model.predict(examples.graphs, examples.pairs, examples.cell_features);
        targets = examples.targets;
    } else {
        auto model = load_regressor_file(model_path);
        RepresentationTable drug_table = data.drug_table;
        if (!normalizer_path.empty()) {
            TanhNormalizer norm = read_normalizer_file(normalizer_path);
            add_input(manifest, normalizer_path);
            drug_table = apply_normalizer(norm, data.drug_table);
        }
        AssembledDataset assembled = assemble_pairs(data.instances, drug_table, data.cell_table);
        predictions = model->predict(assembled.features);
        targets = assembled.targets;
    }

    ensure_out_dir(opts);
    write_prediction_csv(predictions, out_path(opts, "predictions.csv"));
    {
        std::ofstream out(out_path(opts, "targets.csv"));
        write_target_csv(targets, out);
    }
    manifest.outputs = {"predictions.csv", "targets.csv"};
    manifest.notes["model_kind"] = kind;
    write_manifest(manifest, out_path(opts, "manifest.json"));
    std::cout << "predict: wrote " << out_path(opts, "predictions.csv") << "\n";
    return kExitOk;
}

int cmd_ensemble(const GlobalOptions& opts) {
    RunConfig cfg = load_run_config(opts.config_path);
    if (!cfg.has_ensemble) throw ConfigError("section [ensemble]: required");

    Manifest manifest = base_manifest("ensemble", cfg, opts);
    Eigen::VectorXd targets = read_target_csv(cfg.ensemble.targets);
    add_input(manifest, cfg.ensemble.targets);

    std::vector<BaseLearnerEntry> entries;
    for (const auto& [id, path] : cfg.ensemble.members) {
        Eigen::VectorXd pred = read_prediction_csv(path);
        if (pred.size() != targets.size()) {
            throw Error("member '" + id + "': " + std::to_string(pred.size()) +
                        " predictions do not align with " + std::to_string(targets.size()) +
                        " targets");
        }
        add_input(manifest, path);
        entries.push_back({id, std::move(pred)});
    }

    EnsembleModel model = greedy_forward_ensemble(entries, targets, cfg.ensemble.step,
                                                  cfg.ensemble.rel_tol);
    std::vector<BaseLearnerEntry> members;
    for (const auto& id : model.member_ids) {
        for (const auto& e : entries) {
            if (e.id == id) members.push_back(e);
        }
    }
    Eigen::VectorXd blended = weighted_predict(members, model.weights);
    double validation_mse = mse(blended, targets);

    ensure_out_dir(opts);
    {
        std::ofstream out(out_path(opts, "ensemble.txt"));
        write_ensemble_description(model, out, validation_mse);
    }
    write_prediction_csv(blended, out_path(opts, "ensemble_predictions.csv"));

    manifest.outputs = {"ensemble.txt", "ensemble_predictions.csv"};
    manifest.notes["members"] = std::to_string(model.member_ids.size());
    write_manifest(manifest, out_path(opts, "manifest.json"));
    std::cout << "ensemble: " << model.member_ids.size() << " members, validation mse "
              << format_double(validation_mse) << "\n";
    return kExitOk;
}

int cmd_embed(const GlobalOptions& opts, const std::string& model_path) {
    RunConfig cfg = load_run_config(opts.config_path);
    if (cfg.data.structures.empty()) throw ConfigError("field `structures`: required");

    Manifest manifest = base_manifest("embed", cfg, opts);
    GnnModel model = load_gnn_file(model_path);
    add_input(manifest, model_path);
    auto structures = load_structures_csv(cfg.data.structures);
    add_input(manifest, cfg.data.structures);

    std::vector<std::string> ids;
    Eigen::MatrixXd vectors(static_cast<Eigen::Index>(structures.size()), model.config().embed_dim);
    for (std::size_t i = 0; i < structures.size(); ++i) {
        const auto& [id, smiles] = structures[i];
        try {
            MolecularGraph graph = parse_smiles_subset(smiles);
            vectors.row(static_cast<Eigen::Index>(i)) = model.embed(graph).transpose();
        } catch (const ParseError& e) {
            throw Error("drug '" + id + "': " + e.what());
        }
        ids.push_back(id);
    }
    RepresentationTable gnnr("GNNR", std::move(ids), std::move(vectors));

    ensure_out_dir(opts);
    write_representation_csv(gnnr, out_path(opts, "gnnr.csv"));
    manifest.outputs = {"gnnr.csv"};
    manifest.notes["embed_dim"] = std::to_string(model.config().embed_dim);
    write_manifest(manifest, out_path(opts, "manifest.json"));
    std::cout << "embed: wrote " << out_path(opts, "gnnr.csv") << " (" << gnnr.size()
              << " drugs x " << gnnr.dim() << ")\n";
    return kExitOk;
}

int cmd_report(const GlobalOptions& opts, const std::string& predictions_path,
               const std::string& targets_path, int n) {
    Eigen::VectorXd predictions = read_prediction_csv(predictions_path);
    Eigen::VectorXd targets = read_target_csv(targets_path);
    if (predictions.size() != targets.size()) {
        throw Error("predictions (" + std::to_string(predictions.size()) + " rows) and targets (" +
                    std::to_string(targets.size()) + " rows) do not align");
    }
    if (n < 1) {
        throw ConfigError("field `n`: need at least 1 sample (empty plot)");
    }
    if (n > targets.size()) {
        throw ConfigError("field `n`: " + std::to_string(n) + " samples requested but only " +
                          std::to_string(targets.size()) + " rows available");
    }

    std::uint64_t seed = opts.seed.value_or(0);
    std::string svg = render_target_estimate_svg(targets, predictions, n, seed);

    ensure_out_dir(opts);
    write_text_file(out_path(opts, "report.svg"), svg);

    Manifest manifest;
    manifest.command = "report";
    manifest.seed = seed;
    add_input(manifest, predictions_path);
    add_input(manifest, targets_path);
    manifest.outputs = {"report.svg"};
    manifest.notes["samples"] = std::to_string(n);
    write_manifest(manifest, out_path(opts, "manifest.json"));
    std::cout << "report: wrote " << out_path(opts, "report.svg") << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synkit: drug-pair synergy prediction toolkit"};
    app.set_version_flag("--version", std::string("synkit ") + kVersion);
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "Run configuration file");
    app.add_option("--out", opts.out_dir, "Output directory");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Seed override");
    app.add_option("--threads", opts.threads, "Worker thread bound")
        ->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Check a run configuration");
    auto* cv = app.add_subcommand("cv", "Leave-drug-combinations-out cross-validation");
    auto* train = app.add_subcommand("train", "Fit one model on the full dataset");
    auto* predict = app.add_subcommand("predict", "Predict with a saved model");
    auto* ensemble = app.add_subcommand("ensemble", "Greedy forward ensemble from predictions");
    auto* embed = app.add_subcommand("embed", "Export GNNR drug representations");
    auto* report = app.add_subcommand("report", "Target-vs-estimate SVG plot");

    std::string model_path;
    std::string normalizer_path;
    predict->add_option("--model", model_path, "Saved model file")->required();
    predict->add_option("--normalizer", normalizer_path, "Saved normalizer file");
    embed->add_option("--model", model_path, "Saved gnn model file")->required();

    std::string predictions_path, targets_path;
    int samples = 100;
    report->add_option("--predictions", predictions_path, "Prediction CSV")->required();
    report->add_option("--targets", targets_path, "Target CSV")->required();
    report->add_option("--n", samples, "Rows to sample into the plot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }
    if (*seed_opt) opts.seed = seed_value;

    auto needs_config = [&](const char* command) {
        if (opts.config_path.empty()) {
            std::cerr << "error: " << command << " requires --config\n";
            return false;
        }
        return true;
    };

    try {
        if (*validate) {
            if (!needs_config("validate")) return kExitValidation;
            return cmd_validate(opts);
        }
        if (*cv) {
            if (!needs_config("cv")) return kExitValidation;
            return cmd_cv(opts);
        }
        if (*train) {
            if (!needs_config("train")) return kExitValidation;
            return cmd_train(opts);
        }
        if (*predict) {
            if (!needs_config("predict")) return kExitValidation;
            return cmd_predict(opts, model_path, normalizer_path);
        }
        if (*ensemble) {
            if (!needs_config("ensemble")) return kExitValidation;
            return cmd_ensemble(opts);
        }
        if (*embed) {
            if (!needs_config("embed")) return kExitValidation;
            return cmd_embed(opts, model_path);
        }
        if (*report) {
            return cmd_report(opts, predictions_path, targets_path, samples);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitValidation;
}
