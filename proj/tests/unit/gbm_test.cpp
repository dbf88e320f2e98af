#include "synkit/gbm.hpp"
#include "synkit/errors.hpp"
#include "synkit/rng.hpp"

#include <gtest/gtest.h>

using namespace synkit;

TEST(Gbm, ZeroStagesPredictsMean) {
    Eigen::MatrixXd X(2, 1);
    X << 0, 1;
    Eigen::VectorXd y(2);
    y << 1, 3;
    GbmConfig cfg;
    cfg.n_estimators = 0;
    cfg.learning_rate = 0.1;
    auto model = fit_gbm(X, y, cfg);
    Eigen::MatrixXd probe(3, 1);
    probe << -5, 0.5, 7;
    Eigen::VectorXd pred = model.predict(probe);
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(pred[i], 2.0);
}

TEST(Gbm, OneFullRateStageFitsSeparablePointsExactly) {
    // Stage-update check on a 4-point dataset: residuals after the constant
    // stage are fit exactly by a depth-2 tree on distinct inputs at T = 1.
    Eigen::MatrixXd X(4, 1);
    X << 0, 1, 2, 3;
    Eigen::VectorXd y(4);
    y << 4, -2, 10, 0;
    GbmConfig cfg;
    cfg.n_estimators = 1;
    cfg.learning_rate = 1.0;
    cfg.tree = {2, 1};
    auto model = fit_gbm(X, y, cfg);
    Eigen::VectorXd pred = model.predict(X);
    // Manual stage update: base = mean(y); tree must reproduce y - base.
    double base = y.mean();
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(pred[i], y[i], 1e-12);
        EXPECT_NEAR(pred[i] - base, y[i] - base, 1e-12);
    }
    EXPECT_LT(model.training_mse_by_stage().back(), 1e-20);
}

TEST(Gbm, TrainingMseNonIncreasing) {
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 48;
        Eigen::MatrixXd X(n, 3);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < 3; ++j) X(i, j) = rng.next_symmetric(2.0);
            y[i] = 2.0 * X(i, 0) - X(i, 1) * X(i, 2) + rng.next_symmetric(0.5);
        }
        GbmConfig cfg;
        cfg.n_estimators = 60;
        cfg.learning_rate = 0.1;
        cfg.tree = {3, 1};
        auto model = fit_gbm(X, y, cfg);
        const auto& mse = model.training_mse_by_stage();
        ASSERT_EQ(mse.size(), 61u);
        for (std::size_t m = 1; m < mse.size(); ++m) {
            EXPECT_LE(mse[m], mse[m - 1]) << "stage " << m;
        }
    }
}

TEST(Gbm, StagePrefixMatchesRecordedMse) {
    Rng rng(23);
    const int n = 32;
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = rng.next_real();
        X(i, 1) = rng.next_real();
        y[i] = 3.0 * X(i, 0) + rng.next_symmetric(0.3);
    }
    GbmConfig cfg;
    cfg.n_estimators = 10;
    cfg.learning_rate = 0.3;
    cfg.tree = {2, 1};
    auto model = fit_gbm(X, y, cfg);
    for (int m = 0; m <= 10; ++m) {
        Eigen::VectorXd pred = model.predict_prefix(X, m);
        double mse = (pred - y).squaredNorm() / n;
        EXPECT_DOUBLE_EQ(mse, model.training_mse_by_stage()[static_cast<std::size_t>(m)]);
    }
}

TEST(Gbm, LearningRateDomain) {
    Eigen::MatrixXd X(2, 1);
    X << 0, 1;
    Eigen::VectorXd y(2);
    y << 1, 2;
    GbmConfig cfg;
    cfg.learning_rate = 0.0;
    EXPECT_THROW(fit_gbm(X, y, cfg), ArgumentError);
    cfg.learning_rate = 1.5;
    EXPECT_THROW(fit_gbm(X, y, cfg), ArgumentError);
}
