#pragma once

#include "synkit/eval.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace synkit {

// Flat `key = value` run configuration with [data], [model], [cv] and
// [ensemble] sections. Unknown sections or keys are hard errors, as are
// values outside their documented domains; diagnostics carry the line and
// field name.

struct DataConfig {
    std::string synergy;
    std::string drug_table;
    std::string cell_table;
    std::string structures;
    bool normalize_drugs = true;
    double tanh_scale = 0.01;
};

struct CvSectionConfig {
    int folds = 5;
    std::uint64_t seed = 0;
};

struct EnsembleSectionConfig {
    // (member id, prediction file) pairs, `id:path` comma-separated in the file.
    std::vector<std::pair<std::string, std::string>> members;
    std::string targets;
    double step = 0.005;
    double rel_tol = 1e-4;
};

struct RunConfig {
    DataConfig data;
    bool has_model = false;
    LearnerConfig learner;
    CvSectionConfig cv;
    bool has_ensemble = false;
    EnsembleSectionConfig ensemble;

    // Raw entries in file order ("section.key" -> value), echoed into run
    // manifests.
    std::vector<std::pair<std::string, std::string>> echo;
};

RunConfig parse_run_config(std::istream& in, const std::string& origin);

// Loads and resolves relative data paths against the config file's directory.
RunConfig load_run_config(const std::string& path);

// Re-validates path existence (the `validate` subcommand's extra check).
void check_config_paths(const RunConfig& cfg);

}  // namespace synkit
