#include "synkit/dataio.hpp"

#include "synkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace synkit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_numeric_cell(const std::string& cell, const std::string& origin, std::size_t line_no,
                          const std::string& what) {
    if (cell.empty()) {
        throw ParseError(origin + ":" + std::to_string(line_no) + ": empty " + what + " cell");
    }
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + cell.size()) {
        throw ParseError(origin + ":" + std::to_string(line_no) + ": non-numeric " + what +
                         " cell '" + cell + "'");
    }
    if (!std::isfinite(v)) {
        throw ParseError(origin + ":" + std::to_string(line_no) + ": non-finite " + what +
                         " value '" + cell + "'");
    }
    return v;
}

void reject_quoting(const std::string& field, const std::string& origin, std::size_t line_no) {
    if (field.find('"') != std::string::npos) {
        throw FormatError(origin + ":" + std::to_string(line_no) +
                          ": quoted fields are not supported");
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open file: " + path);
    return in;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- RepresentationTable -------------------------------------------------

RepresentationTable::RepresentationTable(std::string name, std::vector<std::string> ids,
                                         Eigen::MatrixXd vectors)
    : name_(std::move(name)), ids_(std::move(ids)), vectors_(std::move(vectors)) {
    if (static_cast<Eigen::Index>(ids_.size()) != vectors_.rows()) {
        throw ShapeError("table '" + name_ + "': id count " + std::to_string(ids_.size()) +
                         " does not match row count " + std::to_string(vectors_.rows()));
    }
    if (!vectors_.allFinite()) {
        throw NumericError("table '" + name_ + "': non-finite feature value");
    }
    index_.reserve(ids_.size());
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(ids_.size()); ++i) {
        auto [it, inserted] = index_.emplace(ids_[i], i);
        if (!inserted) {
            throw DuplicateKeyError("table '" + name_ + "': duplicate id '" + ids_[i] + "'");
        }
    }
}

Eigen::Index RepresentationTable::row_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw MissingKeyError("id '" + id + "' not found in table '" + name_ + "'");
    }
    return it->second;
}

RepresentationTable read_representation_table(std::istream& in, const std::string& name,
                                              const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(origin + ": empty file, expected header `id,f1,...,fD`");
    }
    auto header = split_fields(line);
    if (header.size() < 2 || header[0] != "id") {
        throw FormatError(origin + ": bad header, expected `id,f1,...,fD`");
    }
    const std::size_t dim = header.size() - 1;
    for (std::size_t j = 0; j < dim; ++j) {
        if (header[j + 1] != "f" + std::to_string(j + 1)) {
            throw FormatError(origin + ": bad header column '" + header[j + 1] + "', expected f" +
                              std::to_string(j + 1));
        }
    }

    std::vector<std::string> ids;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (fields.size() != dim + 1) {
            throw FormatError(origin + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(dim + 1) + " fields, got " +
                              std::to_string(fields.size()));
        }
        reject_quoting(fields[0], origin, line_no);
        if (fields[0].empty()) {
            throw FormatError(origin + ":" + std::to_string(line_no) + ": empty id");
        }
        ids.push_back(fields[0]);
        for (std::size_t j = 0; j < dim; ++j) {
            values.push_back(parse_numeric_cell(fields[j + 1], origin, line_no, "feature"));
        }
    }

    Eigen::MatrixXd vectors(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
        for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
            vectors(i, j) = values[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(j)];
        }
    }
    return RepresentationTable(name, std::move(ids), std::move(vectors));
}

RepresentationTable load_representation_table(const std::string& path, const std::string& name) {
    auto in = open_or_throw(path);
    return read_representation_table(in, name, path);
}

// --- Synergy triples -----------------------------------------------------

std::vector<SynergyInstance> read_synergy_triples(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(origin + ": empty file, expected header `drug_a,drug_b,cell_line,score`");
    }
    auto header = split_fields(line);
    const std::vector<std::string> expected = {"drug_a", "drug_b", "cell_line", "score"};
    if (std::vector<std::string>(header.begin(), header.end()) != expected) {
        throw FormatError(origin + ": bad header, expected `drug_a,drug_b,cell_line,score`");
    }

    std::vector<SynergyInstance> instances;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (fields.size() != 4) {
            throw FormatError(origin + ":" + std::to_string(line_no) + ": expected 4 fields, got " +
                              std::to_string(fields.size()));
        }
        for (int j = 0; j < 3; ++j) reject_quoting(fields[j], origin, line_no);
        if (fields[0] == fields[1]) {
            throw InvalidInstanceError(origin + ":" + std::to_string(line_no) +
                                       ": drug paired with itself: '" + fields[0] + "'");
        }
        double score = parse_numeric_cell(fields[3], origin, line_no, "score");
        instances.push_back({fields[0], fields[1], fields[2], score});
    }
    return instances;
}

std::vector<SynergyInstance> load_synergy_triples(const std::string& path) {
    auto in = open_or_throw(path);
    return read_synergy_triples(in, path);
}

std::string unordered_pair_id(const std::string& drug_a, const std::string& drug_b) {
    return drug_a <= drug_b ? drug_a + "|" + drug_b : drug_b + "|" + drug_a;
}

void write_representation_csv(const RepresentationTable& table, std::ostream& out) {
    out << "id";
    for (Eigen::Index j = 0; j < table.dim(); ++j) out << ",f" << (j + 1);
    out << "\n";
    for (Eigen::Index i = 0; i < table.size(); ++i) {
        out << table.ids()[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < table.dim(); ++j) {
            out << ',' << format_double(table.vectors()(i, j));
        }
        out << "\n";
    }
}

void write_representation_csv(const RepresentationTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open file for writing: " + path);
    write_representation_csv(table, out);
}

void write_synergy_csv(const std::vector<SynergyInstance>& instances, std::ostream& out) {
    out << "drug_a,drug_b,cell_line,score\n";
    for (const auto& inst : instances) {
        out << inst.drug_a << ',' << inst.drug_b << ',' << inst.cell_line << ','
            << format_double(inst.score) << "\n";
    }
}

void write_synergy_csv(const std::vector<SynergyInstance>& instances, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open file for writing: " + path);
    write_synergy_csv(instances, out);
}

// --- TanhNormalizer ------------------------------------------------------

TanhNormalizer::TanhNormalizer(Eigen::VectorXd means, Eigen::VectorXd stds, double scale)
    : means_(std::move(means)), stds_(std::move(stds)), scale_(scale) {
    if (means_.size() != stds_.size()) {
        throw ShapeError("normalizer: means and stds lengths differ");
    }
    if ((stds_.array() < 0.0).any()) {
        throw InvariantError("normalizer: negative standard deviation");
    }
}

double TanhNormalizer::transform_value(double x, Eigen::Index feature) const {
    double sd = stds_[feature];
    if (sd == 0.0) return 0.5;
    return 0.5 * (std::tanh(scale_ * (x - means_[feature]) / sd) + 1.0);
}

TanhNormalizer fit_tanh_normalizer(const RepresentationTable& table,
                                   const std::unordered_set<std::string>& training_ids,
                                   double scale) {
    if (training_ids.empty()) {
        throw ArgumentError("fit_tanh_normalizer: empty training id set");
    }
    // Collect rows in table order so statistics do not depend on set iteration.
    std::vector<Eigen::Index> rows;
    rows.reserve(training_ids.size());
    for (const auto& id : training_ids) {
        rows.push_back(table.row_of(id));  // throws MissingKeyError for unknown ids
    }
    std::sort(rows.begin(), rows.end());

    const Eigen::Index dim = table.dim();
    const double n = static_cast<double>(rows.size());
    Eigen::VectorXd means = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index r : rows) means += table.vectors().row(r).transpose();
    means /= n;

    Eigen::VectorXd variances = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index r : rows) {
        Eigen::VectorXd d = table.vectors().row(r).transpose() - means;
        variances += d.cwiseProduct(d);
    }
    variances /= n;
    return TanhNormalizer(means, variances.cwiseSqrt(), scale);
}

RepresentationTable apply_normalizer(const TanhNormalizer& normalizer,
                                     const RepresentationTable& table) {
    if (table.dim() != normalizer.dim()) {
        throw ShapeError("apply_normalizer: table dim " + std::to_string(table.dim()) +
                         " does not match normalizer dim " + std::to_string(normalizer.dim()));
    }
    Eigen::MatrixXd out(table.size(), table.dim());
    for (Eigen::Index i = 0; i < table.size(); ++i) {
        for (Eigen::Index j = 0; j < table.dim(); ++j) {
            out(i, j) = normalizer.transform_value(table.vectors()(i, j), j);
        }
    }
    return RepresentationTable(table.name(), table.ids(), std::move(out));
}

// --- Assembly -------------------------------------------------------------

AssembledDataset assemble_pairs(const std::vector<SynergyInstance>& instances,
                                const RepresentationTable& drug_table,
                                const RepresentationTable& cell_table) {
    const Eigen::Index n = static_cast<Eigen::Index>(instances.size());
    const Eigen::Index drug_dim = drug_table.dim();
    const Eigen::Index cell_dim = cell_table.dim();
    const Eigen::Index width = 2 * drug_dim + cell_dim;

    AssembledDataset ds;
    ds.features.resize(2 * n, width);
    ds.targets.resize(2 * n);
    ds.row_meta.resize(static_cast<std::size_t>(2 * n));

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& inst = instances[static_cast<std::size_t>(i)];
        Eigen::RowVectorXd va = drug_table.vector_of(inst.drug_a);
        Eigen::RowVectorXd vb = drug_table.vector_of(inst.drug_b);
        Eigen::RowVectorXd vc = cell_table.vector_of(inst.cell_line);

        ds.features.row(i).segment(0, drug_dim) = va;
        ds.features.row(i).segment(drug_dim, drug_dim) = vb;
        ds.features.row(i).segment(2 * drug_dim, cell_dim) = vc;

        ds.features.row(n + i).segment(0, drug_dim) = vb;
        ds.features.row(n + i).segment(drug_dim, drug_dim) = va;
        ds.features.row(n + i).segment(2 * drug_dim, cell_dim) = vc;

        ds.targets[i] = inst.score;
        ds.targets[n + i] = inst.score;

        std::string pid = unordered_pair_id(inst.drug_a, inst.drug_b);
        ds.row_meta[static_cast<std::size_t>(i)] = {pid, inst.cell_line, false};
        ds.row_meta[static_cast<std::size_t>(n + i)] = {pid, inst.cell_line, true};
    }
    return ds;
}

void write_assembled_csv(const AssembledDataset& dataset, std::ostream& out) {
    out << "pair_id,mirrored,cell_line,target";
    for (Eigen::Index j = 0; j < dataset.width(); ++j) out << ",x" << (j + 1);
    out << "\n";
    for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
        const auto& meta = dataset.row_meta[static_cast<std::size_t>(i)];
        out << meta.pair_id << ',' << (meta.mirrored ? 1 : 0) << ',' << meta.cell_line << ','
            << format_double(dataset.targets[i]);
        for (Eigen::Index j = 0; j < dataset.width(); ++j) {
            out << ',' << format_double(dataset.features(i, j));
        }
        out << "\n";
    }
}

void write_assembled_csv(const AssembledDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open file for writing: " + path);
    write_assembled_csv(dataset, out);
}

AssembledDataset read_assembled_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(origin + ": empty file");
    auto header = split_fields(line);
    if (header.size() < 5 || header[0] != "pair_id" || header[1] != "mirrored" ||
        header[2] != "cell_line" || header[3] != "target") {
        throw FormatError(origin + ": bad header, expected `pair_id,mirrored,cell_line,target,x1..xW`");
    }
    const std::size_t width = header.size() - 4;

    std::vector<RowMeta> meta;
    std::vector<double> targets;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (fields.size() != width + 4) {
            throw FormatError(origin + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(width + 4) + " fields, got " +
                              std::to_string(fields.size()));
        }
        if (fields[1] != "0" && fields[1] != "1") {
            throw ParseError(origin + ":" + std::to_string(line_no) +
                             ": mirrored flag must be 0 or 1");
        }
        meta.push_back({fields[0], fields[2], fields[1] == "1"});
        targets.push_back(parse_numeric_cell(fields[3], origin, line_no, "target"));
        for (std::size_t j = 0; j < width; ++j) {
            values.push_back(parse_numeric_cell(fields[j + 4], origin, line_no, "feature"));
        }
    }

    AssembledDataset ds;
    const Eigen::Index rows = static_cast<Eigen::Index>(meta.size());
    ds.features.resize(rows, static_cast<Eigen::Index>(width));
    ds.targets.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        ds.targets[i] = targets[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < width; ++j) {
            ds.features(i, static_cast<Eigen::Index>(j)) =
                values[static_cast<std::size_t>(i) * width + j];
        }
    }
    ds.row_meta = std::move(meta);
    return ds;
}

AssembledDataset read_assembled_csv(const std::string& path) {
    auto in = open_or_throw(path);
    return read_assembled_csv(in, path);
}

}  // namespace synkit
