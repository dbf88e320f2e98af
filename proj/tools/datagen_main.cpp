// Writes the bundled synthetic dataset: 12 drugs x 3 cell lines, all 66
// unordered pairs per cell line (198 instances), with a smooth symmetric
// score plus seeded noise. Keeps the demo configs self-contained and the
// smoke tests fast.

#include "synkit/dataio.hpp"
#include "synkit/rng.hpp"

#include <CLI11.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace synkit;

namespace {

const std::vector<std::pair<std::string, std::string>> kStructures = {
    {"d01", "CCO"},       {"d02", "CC(=O)O"},   {"d03", "C1CC1"},      {"d04", "CCN"},
    {"d05", "C(=O)O"},    {"d06", "CCCC"},      {"d07", "C1CCCCC1"},   {"d08", "CC(C)O"},
    {"d09", "CC#N"},      {"d10", "ClCCCl"},    {"d11", "OCC(O)CO"},   {"d12", "CSC"},
};

constexpr int kDrugDim = 8;
constexpr int kCellDim = 10;
constexpr int kCells = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synkit-datagen: bundled synthetic dataset generator"};
    std::string out_dir = ".";
    std::uint64_t seed = 7;
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Generator seed");
    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(out_dir);
    Rng rng(seed);

    std::vector<std::string> drug_ids;
    for (const auto& [id, smiles] : kStructures) drug_ids.push_back(id);

    Eigen::MatrixXd drug_vecs(static_cast<Eigen::Index>(drug_ids.size()), kDrugDim);
    for (Eigen::Index i = 0; i < drug_vecs.rows(); ++i) {
        for (Eigen::Index j = 0; j < drug_vecs.cols(); ++j) {
            drug_vecs(i, j) = 10.0 * rng.next_real();
        }
    }

    std::vector<std::string> cell_ids;
    Eigen::MatrixXd cell_vecs(kCells, kCellDim);
    for (int c = 0; c < kCells; ++c) {
        cell_ids.push_back("c" + std::to_string(c + 1));
        for (Eigen::Index j = 0; j < kCellDim; ++j) cell_vecs(c, j) = 5.0 * rng.next_real();
    }

    Eigen::VectorXd w_drug(kDrugDim), w_inter(kDrugDim), w_cell(kCellDim);
    for (Eigen::Index j = 0; j < kDrugDim; ++j) w_drug[j] = rng.next_symmetric(1.0);
    for (Eigen::Index j = 0; j < kDrugDim; ++j) w_inter[j] = rng.next_symmetric(0.15);
    for (Eigen::Index j = 0; j < kCellDim; ++j) w_cell[j] = rng.next_symmetric(1.0);

    std::vector<SynergyInstance> instances;
    for (std::size_t a = 0; a < drug_ids.size(); ++a) {
        for (std::size_t b = a + 1; b < drug_ids.size(); ++b) {
            for (int c = 0; c < kCells; ++c) {
                Eigen::VectorXd va = drug_vecs.row(static_cast<Eigen::Index>(a)).transpose();
                Eigen::VectorXd vb = drug_vecs.row(static_cast<Eigen::Index>(b)).transpose();
                Eigen::VectorXd vc = cell_vecs.row(c).transpose();
                double score = w_drug.dot(va + vb) + w_inter.dot(va.cwiseProduct(vb)) +
                               w_cell.dot(vc) + rng.next_symmetric(2.0);
                instances.push_back({drug_ids[a], drug_ids[b], cell_ids[static_cast<std::size_t>(c)],
                                     score});
            }
        }
    }

    RepresentationTable drugs("synthetic_drugs", drug_ids, drug_vecs);
    RepresentationTable cells("synthetic_cells", cell_ids, cell_vecs);

    auto path_of = [&](const std::string& name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    write_representation_csv(drugs, path_of("drugs.csv"));
    write_representation_csv(cells, path_of("cells.csv"));
    write_synergy_csv(instances, path_of("synergy.csv"));
    {
        std::ofstream out(path_of("structures.csv"));
        out << "id,smiles\n";
        for (const auto& [id, smiles] : kStructures) out << id << ',' << smiles << "\n";
    }

    std::cout << "wrote " << instances.size() << " instances, " << drug_ids.size() << " drugs, "
              << kCells << " cell lines to " << out_dir << "\n";
    return 0;
}
