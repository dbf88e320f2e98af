#include "synkit/config.hpp"

#include "synkit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace synkit {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Entry {
    std::string value;
    std::size_t line = 0;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
    std::string origin;
    std::map<std::string, Section> sections;

    [[noreturn]] void fail(const std::string& field, std::size_t line,
                           const std::string& why) const {
        throw ConfigError(origin + ":" + std::to_string(line) + ": field `" + field + "`: " + why);
    }
};

class SectionReader {
public:
    SectionReader(const RawConfig& raw, const std::string& name) : raw_(raw), name_(name) {
        auto it = raw.sections.find(name);
        if (it != raw.sections.end()) entries_ = it->second;
    }

    bool present() const { return !entries_.empty(); }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string take_string(const std::string& key, const std::string& fallback = "") {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::string v = it->second.value;
        consumed_.insert(key);
        return v;
    }

    double take_real(const std::string& key, double fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        const std::string& v = it->second.value;
        char* end = nullptr;
        double parsed = std::strtod(v.c_str(), &end);
        if (end != v.c_str() + v.size() || v.empty()) {
            raw_.fail(key, it->second.line, "expected a number, got '" + v + "'");
        }
        return parsed;
    }

    long take_integer(const std::string& key, long fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        const std::string& v = it->second.value;
        char* end = nullptr;
        long parsed = std::strtol(v.c_str(), &end, 10);
        if (end != v.c_str() + v.size() || v.empty()) {
            raw_.fail(key, it->second.line, "expected an integer, got '" + v + "'");
        }
        return parsed;
    }

    std::uint64_t take_unsigned(const std::string& key, std::uint64_t fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        const std::string& v = it->second.value;
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(v.c_str(), &end, 10);
        if (end != v.c_str() + v.size() || v.empty()) {
            raw_.fail(key, it->second.line, "expected an unsigned integer, got '" + v + "'");
        }
        return static_cast<std::uint64_t>(parsed);
    }

    bool take_bool(const std::string& key, bool fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        const std::string& v = it->second.value;
        if (v == "true") return true;
        if (v == "false") return false;
        raw_.fail(key, it->second.line, "expected true or false, got '" + v + "'");
    }

    std::vector<int> take_int_list(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return {};
        consumed_.insert(key);
        std::vector<int> out;
        std::stringstream ss(it->second.value);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            char* end = nullptr;
            long v = std::strtol(tok.c_str(), &end, 10);
            if (tok.empty() || end != tok.c_str() + tok.size()) {
                raw_.fail(key, it->second.line, "expected comma-separated integers");
            }
            out.push_back(static_cast<int>(v));
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        auto it = entries_.find(key);
        raw_.fail(key, it != entries_.end() ? it->second.line : 0, why);
    }

    std::size_t line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it != entries_.end() ? it->second.line : 0;
    }

    // Every key must have been consumed; leftovers are unknown keys.
    void finish() const {
        for (const auto& [key, entry] : entries_) {
            if (!consumed_.count(key)) {
                raw_.fail(key, entry.line,
                          "unknown key in section [" + name_ + "]");
            }
        }
    }

private:
    const RawConfig& raw_;
    std::string name_;
    Section entries_;
    std::set<std::string> consumed_;
};

RawConfig read_raw(std::istream& in, const std::string& origin) {
    static const std::set<std::string> kSections = {"data", "model", "cv", "ensemble"};
    RawConfig raw;
    raw.origin = origin;
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed section header '" + t + "'");
            }
            section = trim(t.substr(1, t.size() - 2));
            if (!kSections.count(section)) {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            }
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected `key = value`, got '" + t + "'");
        }
        if (section.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": key outside any section");
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        }
        auto [it, inserted] = raw.sections[section].emplace(key, Entry{value, line_no});
        if (!inserted) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key `" + key +
                              "` in section [" + section + "]");
        }
    }
    return raw;
}

FcnnConfig read_fcnn_fields(SectionReader& model, std::uint64_t seed) {
    FcnnConfig cfg;
    cfg.hidden = model.take_int_list("hidden");
    if (cfg.hidden.empty()) model.fail("hidden", "required (two comma-separated widths)");
    if (cfg.hidden.size() != 2) model.fail("hidden", "exactly two hidden widths required");
    for (int h : cfg.hidden) {
        if (h < 1) model.fail("hidden", "widths must be positive");
    }
    cfg.learning_rate = model.take_real("learning_rate", 0.01);
    if (cfg.learning_rate <= 0.0) model.fail("learning_rate", "must be positive");
    cfg.dropout = model.take_real("dropout", 0.0);
    if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) model.fail("dropout", "must lie in [0, 1)");
    cfg.epochs = static_cast<int>(model.take_integer("epochs", 10));
    if (cfg.epochs < 1) model.fail("epochs", "must be positive");
    cfg.batch_size = static_cast<int>(model.take_integer("batch_size", 64));
    if (cfg.batch_size < 1) model.fail("batch_size", "must be positive");
    cfg.seed = seed;
    return cfg;
}

TreeConfig read_tree_fields(SectionReader& model, int default_depth) {
    TreeConfig cfg;
    cfg.max_depth = static_cast<int>(model.take_integer("max_depth", default_depth));
    if (cfg.max_depth < 1) model.fail("max_depth", "must be positive");
    cfg.min_samples_leaf = static_cast<int>(model.take_integer("min_samples_leaf", 1));
    if (cfg.min_samples_leaf < 1) model.fail("min_samples_leaf", "must be positive");
    return cfg;
}

LearnerConfig read_model_section(SectionReader& model) {
    std::string kind = model.take_string("kind");
    if (kind.empty()) model.fail("kind", "required");
    std::uint64_t seed = model.take_unsigned("seed", 0);

    if (kind == "elastic_net") {
        ElasticNetConfig cfg;
        cfg.strength = model.take_real("strength", 1.0);
        if (cfg.strength < 0.0) model.fail("strength", "must be non-negative");
        cfg.mixing = model.take_real("mixing", 0.5);
        if (cfg.mixing < 0.0 || cfg.mixing > 1.0) model.fail("mixing", "must lie in [0, 1]");
        cfg.tol = model.take_real("tol", 1e-8);
        if (cfg.tol <= 0.0) model.fail("tol", "must be positive");
        cfg.max_sweeps = static_cast<int>(model.take_integer("max_sweeps", 1000));
        if (cfg.max_sweeps < 1) model.fail("max_sweeps", "must be positive");
        return cfg;
    }
    if (kind == "decision_tree") {
        return read_tree_fields(model, 6);
    }
    if (kind == "random_forest") {
        ForestConfig cfg;
        cfg.n_estimators = static_cast<int>(model.take_integer("n_estimators", 1000));
        if (cfg.n_estimators < 1) model.fail("n_estimators", "must be positive");
        cfg.tree = read_tree_fields(model, 6);
        cfg.feature_fraction = model.take_real("feature_fraction", 1.0);
        if (cfg.feature_fraction <= 0.0 || cfg.feature_fraction > 1.0) {
            model.fail("feature_fraction", "must lie in (0, 1]");
        }
        cfg.bootstrap = model.take_bool("bootstrap", true);
        cfg.seed = seed;
        return cfg;
    }
    if (kind == "gbm") {
        GbmConfig cfg;
        cfg.n_estimators = static_cast<int>(model.take_integer("n_estimators", 1000));
        if (cfg.n_estimators < 1) model.fail("n_estimators", "must be positive");
        cfg.learning_rate = model.take_real("learning_rate", 0.1);
        if (cfg.learning_rate <= 0.0 || cfg.learning_rate > 1.0) {
            model.fail("learning_rate", "must lie in (0, 1]");
        }
        cfg.tree = read_tree_fields(model, 6);
        return cfg;
    }
    if (kind == "fcnn") {
        return read_fcnn_fields(model, seed);
    }
    if (kind == "gnn") {
        GnnConfig cfg;
        cfg.embed_dim = static_cast<int>(model.take_integer("embed_dim", 25));
        if (cfg.embed_dim < 1) model.fail("embed_dim", "must be positive");
        cfg.radius = static_cast<int>(model.take_integer("radius", 2));
        if (cfg.radius < 0) model.fail("radius", "must be non-negative");
        cfg.layers = static_cast<int>(model.take_integer("gnn_layers", 3));
        if (cfg.layers < 1) model.fail("gnn_layers", "must be positive");
        cfg.bond_orders_in_types = model.take_bool("bond_orders", true);
        cfg.head = read_fcnn_fields(model, seed);
        cfg.epochs = cfg.head.epochs;
        cfg.seed = seed;
        return cfg;
    }
    model.fail("kind", "unknown learner kind '" + kind + "'");
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::string& origin) {
    RawConfig raw = read_raw(in, origin);

    RunConfig cfg;
    for (const auto& [section, entries] : raw.sections) {
        for (const auto& [key, entry] : entries) {
            cfg.echo.emplace_back(section + "." + key, entry.value);
        }
    }

    SectionReader data(raw, "data");
    cfg.data.synergy = data.take_string("synergy");
    cfg.data.drug_table = data.take_string("drug_table");
    cfg.data.cell_table = data.take_string("cell_table");
    cfg.data.structures = data.take_string("structures");
    cfg.data.normalize_drugs = data.take_bool("normalize_drugs", true);
    cfg.data.tanh_scale = data.take_real("tanh_scale", 0.01);
    if (cfg.data.tanh_scale <= 0.0) data.fail("tanh_scale", "must be positive");
    data.finish();

    SectionReader model(raw, "model");
    if (model.present()) {
        cfg.learner = read_model_section(model);
        cfg.has_model = true;
        model.finish();
    }

    SectionReader cv(raw, "cv");
    cfg.cv.folds = static_cast<int>(cv.take_integer("folds", 5));
    if (cfg.cv.folds < 2) cv.fail("folds", "must be at least 2");
    cfg.cv.seed = cv.take_unsigned("seed", 0);
    cv.finish();

    SectionReader ensemble(raw, "ensemble");
    if (ensemble.present()) {
        cfg.has_ensemble = true;
        std::string members = ensemble.take_string("members");
        if (members.empty()) ensemble.fail("members", "required (`id:path` comma-separated)");
        std::stringstream ss(members);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            auto colon = tok.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) {
                ensemble.fail("members", "each member must be `id:path`, got '" + tok + "'");
            }
            cfg.ensemble.members.emplace_back(trim(tok.substr(0, colon)),
                                              trim(tok.substr(colon + 1)));
        }
        cfg.ensemble.targets = ensemble.take_string("targets");
        if (cfg.ensemble.targets.empty()) ensemble.fail("targets", "required");
        cfg.ensemble.step = ensemble.take_real("step", 0.005);
        if (cfg.ensemble.step <= 0.0 || cfg.ensemble.step > 1.0) {
            ensemble.fail("step", "must lie in (0, 1]");
        }
        cfg.ensemble.rel_tol = ensemble.take_real("rel_tol", 1e-4);
        if (cfg.ensemble.rel_tol < 0.0) ensemble.fail("rel_tol", "must be non-negative");
        ensemble.finish();
    }

    return cfg;
}

namespace {

std::string resolve_against(const std::filesystem::path& base, const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (base / p).lexically_normal().string();
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config file: " + path);
    RunConfig cfg = parse_run_config(in, path);

    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    cfg.data.synergy = resolve_against(base, cfg.data.synergy);
    cfg.data.drug_table = resolve_against(base, cfg.data.drug_table);
    cfg.data.cell_table = resolve_against(base, cfg.data.cell_table);
    cfg.data.structures = resolve_against(base, cfg.data.structures);
    cfg.ensemble.targets = resolve_against(base, cfg.ensemble.targets);
    for (auto& [id, member_path] : cfg.ensemble.members) {
        member_path = resolve_against(base, member_path);
    }
    return cfg;
}

void check_config_paths(const RunConfig& cfg) {
    auto require = [](const std::string& path, const std::string& field) {
        if (!path.empty() && !std::filesystem::exists(path)) {
            throw ConfigError("field `" + field + "`: path does not exist: " + path);
        }
    };
    require(cfg.data.synergy, "synergy");
    require(cfg.data.drug_table, "drug_table");
    require(cfg.data.cell_table, "cell_table");
    require(cfg.data.structures, "structures");
    require(cfg.ensemble.targets, "targets");
    for (const auto& [id, path] : cfg.ensemble.members) require(path, "members");
}

}  // namespace synkit
