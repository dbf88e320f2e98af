#include "synkit/dataio.hpp"
#include "synkit/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace synkit;

namespace {

RepresentationTable table_from_csv(const std::string& csv, const std::string& name = "t") {
    std::istringstream in(csv);
    return read_representation_table(in, name, "test.csv");
}

std::vector<SynergyInstance> triples_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    return read_synergy_triples(in, "test.csv");
}

}  // namespace

TEST(RepresentationTable, LoadsTwoDrugsThreeFeatures) {
    auto t = table_from_csv("id,f1,f2,f3\nd1,1,2,3\nd2,4,5,6\n");
    EXPECT_EQ(t.dim(), 3);
    EXPECT_EQ(t.size(), 2);
    EXPECT_EQ(t.ids()[0], "d1");
    EXPECT_DOUBLE_EQ(t.vectors()(1, 2), 6.0);
}

TEST(RepresentationTable, RowOrderPreserved) {
    auto t = table_from_csv("id,f1\nz,1\na,2\nm,3\n");
    EXPECT_EQ(t.ids(), (std::vector<std::string>{"z", "a", "m"}));
}

TEST(RepresentationTable, DuplicateIdRejected) {
    EXPECT_THROW(table_from_csv("id,f1\nd1,1\nd1,2\n"), DuplicateKeyError);
}

TEST(RepresentationTable, RaggedRowRejected) {
    EXPECT_THROW(table_from_csv("id,f1,f2\nd1,1\n"), FormatError);
}

TEST(RepresentationTable, NonNumericCellRejected) {
    EXPECT_THROW(table_from_csv("id,f1\nd1,abc\n"), ParseError);
}

TEST(RepresentationTable, NonFiniteValueRejected) {
    EXPECT_THROW(table_from_csv("id,f1\nd1,inf\n"), ParseError);
}

TEST(RepresentationTable, QuotedIdRejected) {
    EXPECT_THROW(table_from_csv("id,f1\n\"d,1\",1\n"), FormatError);
}

TEST(RepresentationTable, MissingIdReportsTable) {
    auto t = table_from_csv("id,f1\nd1,1\n", "chem");
    try {
        t.row_of("nope");
        FAIL() << "expected MissingKeyError";
    } catch (const MissingKeyError& e) {
        EXPECT_NE(std::string(e.what()).find("chem"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
    }
}

TEST(RepresentationTable, FullScaleWidthAndCount) {
    // 29 drugs x 978 features, the expression-based drug table geometry.
    std::ostringstream csv;
    csv << "id";
    for (int j = 1; j <= 978; ++j) csv << ",f" << j;
    csv << "\n";
    for (int d = 0; d < 29; ++d) {
        csv << "drug" << d;
        for (int j = 0; j < 978; ++j) csv << ',' << (0.001 * d + 0.01 * j);
        csv << "\n";
    }
    auto t = table_from_csv(csv.str(), "cdr");
    EXPECT_EQ(t.dim(), 978);
    EXPECT_EQ(t.size(), 29);
}

TEST(SynergyTriples, FullScaleRowCount) {
    // 12390 unmirrored triples; mirroring later doubles them to 24780 rows.
    std::ostringstream csv;
    csv << "drug_a,drug_b,cell_line,score\n";
    int written = 0;
    for (int a = 0; a < 30 && written < 12390; ++a) {
        for (int b = a + 1; b < 30 && written < 12390; ++b) {
            for (int c = 0; c < 40 && written < 12390; ++c) {
                csv << "d" << a << ",d" << b << ",c" << c << ',' << (a + b - c) << "\n";
                ++written;
            }
        }
    }
    ASSERT_EQ(written, 12390);
    auto v = triples_from_csv(csv.str());
    EXPECT_EQ(v.size(), 12390u);
}

TEST(SynergyTriples, LoadsValidRows) {
    auto v = triples_from_csv("drug_a,drug_b,cell_line,score\nd1,d2,c1,5.5\nd2,d3,c1,-1\n");
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].drug_a, "d1");
    EXPECT_DOUBLE_EQ(v[1].score, -1.0);
}

TEST(SynergyTriples, EmptyDataSectionIsEmpty) {
    EXPECT_TRUE(triples_from_csv("drug_a,drug_b,cell_line,score\n").empty());
}

TEST(SynergyTriples, SelfPairRejected) {
    EXPECT_THROW(triples_from_csv("drug_a,drug_b,cell_line,score\nd1,d1,c1,5.0\n"),
                 InvalidInstanceError);
}

TEST(SynergyTriples, NonFiniteScoreRejected) {
    EXPECT_THROW(triples_from_csv("drug_a,drug_b,cell_line,score\nd1,d2,c1,nan\n"), ParseError);
}

TEST(SynergyTriples, NoDeduplication) {
    auto v = triples_from_csv(
        "drug_a,drug_b,cell_line,score\nd1,d2,c1,5\nd1,d2,c1,5\n");
    EXPECT_EQ(v.size(), 2u);
}

TEST(UnorderedPairId, SortsLexicographically) {
    EXPECT_EQ(unordered_pair_id("b", "a"), "a|b");
    EXPECT_EQ(unordered_pair_id("a", "b"), "a|b");
}

// --- tanh normalization ----------------------------------------------------

TEST(TanhNormalizer, MeanMapsToHalf) {
    auto t = table_from_csv("id,f1\nd1,2\nd2,4\n");
    auto norm = fit_tanh_normalizer(t, {"d1", "d2"});
    EXPECT_DOUBLE_EQ(norm.transform_value(3.0, 0), 0.5);
}

TEST(TanhNormalizer, ConstantFeatureMapsToHalf) {
    auto t = table_from_csv("id,f1\nd1,7\nd2,7\nd3,7\n");
    auto norm = fit_tanh_normalizer(t, {"d1", "d2", "d3"});
    EXPECT_DOUBLE_EQ(norm.transform_value(7.0, 0), 0.5);
    EXPECT_DOUBLE_EQ(norm.transform_value(123.0, 0), 0.5);
}

TEST(TanhNormalizer, OneStdAboveMeanMatchesScalarOracle) {
    auto t = table_from_csv("id,f1\nd1,2\nd2,4\n");
    auto norm = fit_tanh_normalizer(t, {"d1", "d2"});
    // High-precision scalar evaluation of 0.5*(tanh(0.01 * 1) + 1).
    long double expected = 0.5L * (std::tanh(0.01L) + 1.0L);
    double got = norm.transform_value(norm.means()[0] + norm.stds()[0], 0);
    EXPECT_NEAR(got, static_cast<double>(expected), 1e-12);
    EXPECT_NEAR(got, 0.505000, 1e-6);
}

TEST(TanhNormalizer, UnknownTrainingIdRejected) {
    auto t = table_from_csv("id,f1\nd1,2\n");
    EXPECT_THROW(fit_tanh_normalizer(t, {"d1", "ghost"}), MissingKeyError);
}

TEST(TanhNormalizer, StatsDependOnlyOnTrainingIds) {
    auto t = table_from_csv("id,f1\nd1,2\nd2,4\nd3,1000\n");
    auto a = fit_tanh_normalizer(t, {"d1", "d2"});
    auto b = fit_tanh_normalizer(t, {"d1", "d2"});
    EXPECT_EQ(a.means()[0], b.means()[0]);
    EXPECT_EQ(a.stds()[0], b.stds()[0]);
    // Adding the holdout row changes the statistics, as it must.
    auto c = fit_tanh_normalizer(t, {"d1", "d2", "d3"});
    EXPECT_NE(a.means()[0], c.means()[0]);
}

TEST(ApplyNormalizer, OutputsStayInOpenUnitInterval) {
    auto t = table_from_csv("id,f1,f2\nd1,1,10\nd2,2,20\nd3,3,35\n");
    auto norm = fit_tanh_normalizer(t, {"d1", "d2", "d3"});
    auto out = apply_normalizer(norm, t);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        for (Eigen::Index j = 0; j < out.dim(); ++j) {
            EXPECT_GT(out.vectors()(i, j), 0.0);
            EXPECT_LT(out.vectors()(i, j), 1.0);
        }
    }
    EXPECT_EQ(out.ids(), t.ids());
    EXPECT_EQ(out.dim(), t.dim());
}

TEST(ApplyNormalizer, SingleRowTableMapsToAllHalf) {
    auto t = table_from_csv("id,f1,f2\nd1,3,9\n");
    auto norm = fit_tanh_normalizer(t, {"d1"});
    auto out = apply_normalizer(norm, t);
    EXPECT_DOUBLE_EQ(out.vectors()(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(out.vectors()(0, 1), 0.5);
}

TEST(ApplyNormalizer, StrictlyMonotoneForPositiveStd) {
    auto t = table_from_csv("id,f1\nd1,2\nd2,4\n");
    auto norm = fit_tanh_normalizer(t, {"d1", "d2"});
    double prev = norm.transform_value(-5.0, 0);
    for (double x = -4.5; x < 10.0; x += 0.5) {
        double cur = norm.transform_value(x, 0);
        EXPECT_LT(prev, cur);
        prev = cur;
    }
}

TEST(ApplyNormalizer, DimensionMismatchRejected) {
    auto t1 = table_from_csv("id,f1\nd1,2\nd2,4\n");
    auto t2 = table_from_csv("id,f1,f2\nd1,2,1\nd2,4,1\n");
    auto norm = fit_tanh_normalizer(t1, {"d1", "d2"});
    EXPECT_THROW(apply_normalizer(norm, t2), ShapeError);
}

// --- pair assembly -----------------------------------------------------------

namespace {

AssembledDataset small_assembly() {
    auto drugs = table_from_csv("id,f1,f2\nA,1,2\nB,3,4\n", "drug");
    auto cells = table_from_csv("id,f1,f2,f3\nc1,9,8,7\n", "cell");
    std::vector<SynergyInstance> instances = {{"A", "B", "c1", 5.0}};
    return assemble_pairs(instances, drugs, cells);
}

}  // namespace

TEST(AssemblePairs, SingleInstanceMirrors) {
    auto ds = small_assembly();
    ASSERT_EQ(ds.rows(), 2);
    ASSERT_EQ(ds.width(), 2 * 2 + 3);
    Eigen::RowVectorXd row0(7), row1(7);
    row0 << 1, 2, 3, 4, 9, 8, 7;
    row1 << 3, 4, 1, 2, 9, 8, 7;
    EXPECT_TRUE(ds.features.row(0).isApprox(row0));
    EXPECT_TRUE(ds.features.row(1).isApprox(row1));
    EXPECT_DOUBLE_EQ(ds.targets[0], 5.0);
    EXPECT_DOUBLE_EQ(ds.targets[1], 5.0);
    EXPECT_FALSE(ds.row_meta[0].mirrored);
    EXPECT_TRUE(ds.row_meta[1].mirrored);
    EXPECT_EQ(ds.row_meta[0].pair_id, "A|B");
    EXPECT_EQ(ds.row_meta[1].pair_id, "A|B");
}

TEST(AssemblePairs, MirrorBlockSwapProperty) {
    auto drugs = table_from_csv("id,f1,f2\nA,1,2\nB,3,4\nC,5,6\n", "drug");
    auto cells = table_from_csv("id,f1\nc1,9\nc2,8\n", "cell");
    std::vector<SynergyInstance> instances = {
        {"A", "B", "c1", 1.0}, {"B", "C", "c2", 2.0}, {"A", "C", "c1", 3.0}};
    auto ds = assemble_pairs(instances, drugs, cells);
    const Eigen::Index n = 3, d = 2;
    ASSERT_EQ(ds.rows(), 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::RowVectorXd swapped(ds.width());
        swapped.segment(0, d) = ds.features.row(i).segment(d, d);
        swapped.segment(d, d) = ds.features.row(i).segment(0, d);
        swapped.segment(2 * d, 1) = ds.features.row(i).segment(2 * d, 1);
        EXPECT_TRUE((swapped.array() == ds.features.row(i + n).array()).all());
        EXPECT_EQ(ds.targets[i], ds.targets[i + n]);
    }
}

TEST(AssemblePairs, UnresolvedIdNamesTable) {
    auto drugs = table_from_csv("id,f1\nA,1\n", "drug");
    auto cells = table_from_csv("id,f1\nc1,9\n", "cell");
    std::vector<SynergyInstance> instances = {{"A", "Z", "c1", 1.0}};
    try {
        assemble_pairs(instances, drugs, cells);
        FAIL() << "expected MissingKeyError";
    } catch (const MissingKeyError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("Z"), std::string::npos);
        EXPECT_NE(msg.find("drug"), std::string::npos);
    }
}

TEST(AssemblePairs, CsvRoundTripIsBitExact) {
    auto drugs = table_from_csv(
        "id,f1,f2\nA,0.1234567890123457,2\nB,3,4.000000000000001\n", "drug");
    auto cells = table_from_csv("id,f1\nc1,0.3333333333333333\n", "cell");
    std::vector<SynergyInstance> instances = {{"A", "B", "c1", 1.0 / 3.0}};
    auto ds = assemble_pairs(instances, drugs, cells);

    std::ostringstream out;
    write_assembled_csv(ds, out);
    std::istringstream in(out.str());
    auto back = read_assembled_csv(in, "roundtrip");

    ASSERT_EQ(back.rows(), ds.rows());
    ASSERT_EQ(back.width(), ds.width());
    EXPECT_TRUE((back.features.array() == ds.features.array()).all());
    EXPECT_TRUE((back.targets.array() == ds.targets.array()).all());
    for (std::size_t i = 0; i < ds.row_meta.size(); ++i) {
        EXPECT_EQ(back.row_meta[i].pair_id, ds.row_meta[i].pair_id);
        EXPECT_EQ(back.row_meta[i].mirrored, ds.row_meta[i].mirrored);
        EXPECT_EQ(back.row_meta[i].cell_line, ds.row_meta[i].cell_line);
    }
}

TEST(FormatDouble, RoundTripsExactly) {
    for (double v : {1.0 / 3.0, 0.1, -2.5e-17, 1e300, 0.0, -0.0, 123456.789012345678}) {
        EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
    }
}
