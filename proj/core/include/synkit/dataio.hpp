#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace synkit {

// A named mapping from entity ids (drugs or cell lines) to fixed-length
// feature vectors. Row order follows the source file.
class RepresentationTable {
public:
    RepresentationTable() = default;
    RepresentationTable(std::string name, std::vector<std::string> ids, Eigen::MatrixXd vectors);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& ids() const { return ids_; }
    const Eigen::MatrixXd& vectors() const { return vectors_; }
    Eigen::Index dim() const { return vectors_.cols(); }
    Eigen::Index size() const { return vectors_.rows(); }

    bool contains(const std::string& id) const { return index_.count(id) > 0; }
    // Row index for an id; throws MissingKeyError naming the table.
    Eigen::Index row_of(const std::string& id) const;
    Eigen::RowVectorXd vector_of(const std::string& id) const { return vectors_.row(row_of(id)); }

private:
    std::string name_;
    std::vector<std::string> ids_;
    Eigen::MatrixXd vectors_;
    std::unordered_map<std::string, Eigen::Index> index_;
};

// One measured (drugA, drugB, cell line, synergy score) record.
struct SynergyInstance {
    std::string drug_a;
    std::string drug_b;
    std::string cell_line;
    double score = 0.0;
};

// Fold-grouping key: the two drug ids sorted lexicographically, joined by '|'.
std::string unordered_pair_id(const std::string& drug_a, const std::string& drug_b);

// Bounded per-feature transform x -> 0.5 * (tanh(scale * (x - mean) / std) + 1),
// with statistics taken from training rows only. Features whose training std
// is zero map every input to 0.5.
class TanhNormalizer {
public:
    TanhNormalizer() = default;
    TanhNormalizer(Eigen::VectorXd means, Eigen::VectorXd stds, double scale);

    const Eigen::VectorXd& means() const { return means_; }
    const Eigen::VectorXd& stds() const { return stds_; }
    double scale() const { return scale_; }
    Eigen::Index dim() const { return means_.size(); }

    double transform_value(double x, Eigen::Index feature) const;

private:
    Eigen::VectorXd means_;
    Eigen::VectorXd stds_;
    double scale_ = 0.01;
};

struct RowMeta {
    std::string pair_id;
    std::string cell_line;
    bool mirrored = false;
};

// Mirrored drug-pair design matrix: for N input instances, rows [0, N) are
// [vec(drug_a) | vec(drug_b) | vec(cell)] and rows [N, 2N) repeat the same
// instances with the two drug blocks swapped.
struct AssembledDataset {
    Eigen::MatrixXd features;
    Eigen::VectorXd targets;
    std::vector<RowMeta> row_meta;

    Eigen::Index rows() const { return features.rows(); }
    Eigen::Index width() const { return features.cols(); }
};

// --- Loading -----------------------------------------------------------

// CSV with header `id,f1,...,fD`. Rejects ragged rows, non-numeric cells,
// duplicate ids and quoted fields.
RepresentationTable load_representation_table(const std::string& path, const std::string& name);
RepresentationTable read_representation_table(std::istream& in, const std::string& name,
                                              const std::string& origin);

// CSV with header `drug_a,drug_b,cell_line,score`. No deduplication.
std::vector<SynergyInstance> load_synergy_triples(const std::string& path);
std::vector<SynergyInstance> read_synergy_triples(std::istream& in, const std::string& origin);

void write_representation_csv(const RepresentationTable& table, std::ostream& out);
void write_representation_csv(const RepresentationTable& table, const std::string& path);
void write_synergy_csv(const std::vector<SynergyInstance>& instances, std::ostream& out);
void write_synergy_csv(const std::vector<SynergyInstance>& instances, const std::string& path);

// --- Normalization ------------------------------------------------------

TanhNormalizer fit_tanh_normalizer(const RepresentationTable& table,
                                   const std::unordered_set<std::string>& training_ids,
                                   double scale = 0.01);

RepresentationTable apply_normalizer(const TanhNormalizer& normalizer,
                                     const RepresentationTable& table);

// --- Assembly -----------------------------------------------------------

AssembledDataset assemble_pairs(const std::vector<SynergyInstance>& instances,
                                const RepresentationTable& drug_table,
                                const RepresentationTable& cell_table);

// CSV export `pair_id,mirrored,cell_line,target,x1..xW`; values are written
// with enough digits to reload bit-exactly.
void write_assembled_csv(const AssembledDataset& dataset, std::ostream& out);
void write_assembled_csv(const AssembledDataset& dataset, const std::string& path);
AssembledDataset read_assembled_csv(std::istream& in, const std::string& origin);
AssembledDataset read_assembled_csv(const std::string& path);

// Full-precision decimal rendering of a double; round-trips binary64 exactly.
std::string format_double(double v);

}  // namespace synkit
