#include "synkit/fcnn.hpp"
#include "synkit/errors.hpp"
#include "synkit/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace synkit;

namespace {

double mlp_loss(Mlp& net, const Eigen::MatrixXd& batch, const Eigen::RowVectorXd& target) {
    Eigen::MatrixXd out = net.forward(batch, nullptr, nullptr);
    return (out.row(0) - target).squaredNorm() / static_cast<double>(target.size());
}

}  // namespace

TEST(Fcnn, DeterministicWithoutDropout) {
    Rng rng(2);
    const int n = 24, p = 3;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) X(i, j) = rng.next_symmetric(1.0);
        y[i] = X(i, 0) + rng.next_symmetric(0.1);
    }
    FcnnConfig cfg;
    cfg.hidden = {8, 4};
    cfg.learning_rate = 0.01;
    cfg.dropout = 0.0;
    cfg.epochs = 5;
    cfg.batch_size = 8;
    cfg.seed = 99;

    auto a = fit_fcnn(X, y, cfg);
    auto b = fit_fcnn(X, y, cfg);
    EXPECT_TRUE((a.net().parameter_vector().array() == b.net().parameter_vector().array()).all());
    EXPECT_TRUE((a.predict(X).array() == b.predict(X).array()).all());
}

TEST(Fcnn, DeterministicWithDropout) {
    Rng rng(4);
    const int n = 16, p = 2;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = rng.next_real();
        X(i, 1) = rng.next_real();
        y[i] = X(i, 0);
    }
    FcnnConfig cfg;
    cfg.hidden = {6, 3};
    cfg.dropout = 0.3;
    cfg.epochs = 3;
    cfg.batch_size = 4;
    cfg.seed = 7;
    auto a = fit_fcnn(X, y, cfg);
    auto b = fit_fcnn(X, y, cfg);
    EXPECT_TRUE((a.predict(X).array() == b.predict(X).array()).all());
}

TEST(Fcnn, GradientMatchesCentralFiniteDifferences) {
    // 3-5-4-1 network, random batch, every parameter at step 1e-5.
    Rng rng(11);
    Mlp net({3, 5, 4, 1}, rng);
    const int batch = 6;
    Eigen::MatrixXd input(3, batch);
    Eigen::RowVectorXd target(batch);
    for (int j = 0; j < batch; ++j) {
        for (int i = 0; i < 3; ++i) input(i, j) = rng.next_symmetric(1.0);
        target[j] = rng.next_symmetric(1.0);
    }

    // Generic parameter point, clear of rectifier kinks (see the dropout
    // variant below for why).
    {
        Eigen::VectorXd theta0 = net.parameter_vector();
        Rng jitter(5);
        for (Eigen::Index k = 0; k < theta0.size(); ++k) {
            theta0[k] += jitter.next_symmetric(0.2) + 0.02;
        }
        net.set_parameter_vector(theta0);
        Mlp::Trace probe;
        net.forward(input, &probe, nullptr);
        for (const auto& z : probe.pre) {
            ASSERT_GT(z.array().abs().minCoeff(), 1e-3);
        }
    }

    Mlp::Trace trace;
    Mlp::Gradients grads = net.zero_gradients();
    Eigen::MatrixXd out = net.forward(input, &trace, nullptr);
    Eigen::MatrixXd grad_out = (2.0 / batch) * (out.row(0) - target);
    net.backward(trace, grad_out, nullptr, grads);
    Eigen::VectorXd analytic = Mlp::flatten(grads);

    Eigen::VectorXd theta = net.parameter_vector();
    const double h = 1e-5;
    double max_rel = 0.0;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
        Eigen::VectorXd up = theta, down = theta;
        up[k] += h;
        down[k] -= h;
        net.set_parameter_vector(up);
        double lu = mlp_loss(net, input, target);
        net.set_parameter_vector(down);
        double ld = mlp_loss(net, input, target);
        net.set_parameter_vector(theta);
        double fd = (lu - ld) / (2.0 * h);
        double denom = std::max({std::abs(fd), std::abs(analytic[k]), 1e-8});
        max_rel = std::max(max_rel, std::abs(fd - analytic[k]) / denom);
    }
    EXPECT_LT(max_rel, 1e-4);
}

TEST(Fcnn, DropoutGradientMatchesFiniteDifferences) {
    // Same check with a fixed dropout mask applied.
    Rng rng(13);
    Mlp net({2, 4, 3, 1}, rng);
    const int batch = 5;
    Eigen::MatrixXd input(2, batch);
    Eigen::RowVectorXd target(batch);
    for (int j = 0; j < batch; ++j) {
        input(0, j) = rng.next_symmetric(1.0);
        input(1, j) = rng.next_symmetric(1.0);
        target[j] = rng.next_symmetric(1.0);
    }
    Rng mask_rng(21);
    auto masks = net.make_dropout_masks(batch, 0.4, mask_rng);

    // Move to a generic parameter point: zero-initialized biases plus a
    // fully dropped column make some pre-activations land exactly on the
    // rectifier kink, where one-sided differences disagree with the
    // subgradient by construction.
    {
        Eigen::VectorXd theta0 = net.parameter_vector();
        Rng jitter(3);
        for (Eigen::Index k = 0; k < theta0.size(); ++k) {
            theta0[k] += jitter.next_symmetric(0.2) + 0.01;
        }
        net.set_parameter_vector(theta0);
        Mlp::Trace probe;
        net.forward(input, &probe, &masks);
        for (const auto& z : probe.pre) {
            ASSERT_GT(z.array().abs().minCoeff(), 1e-3);  // clear of the kink
        }
    }

    auto loss_with_masks = [&]() {
        Eigen::MatrixXd out = net.forward(input, nullptr, &masks);
        return (out.row(0) - target).squaredNorm() / static_cast<double>(batch);
    };

    Mlp::Trace trace;
    Mlp::Gradients grads = net.zero_gradients();
    Eigen::MatrixXd out = net.forward(input, &trace, &masks);
    Eigen::MatrixXd grad_out = (2.0 / batch) * (out.row(0) - target);
    net.backward(trace, grad_out, &masks, grads);
    Eigen::VectorXd analytic = Mlp::flatten(grads);

    Eigen::VectorXd theta = net.parameter_vector();
    const double h = 1e-5;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
        Eigen::VectorXd up = theta, down = theta;
        up[k] += h;
        down[k] -= h;
        net.set_parameter_vector(up);
        double lu = loss_with_masks();
        net.set_parameter_vector(down);
        double ld = loss_with_masks();
        net.set_parameter_vector(theta);
        double fd = (lu - ld) / (2.0 * h);
        double denom = std::max({std::abs(fd), std::abs(analytic[k]), 1e-8});
        EXPECT_LT(std::abs(fd - analytic[k]) / denom, 1e-4) << "param " << k;
    }
}

TEST(Fcnn, LearnsLinearFunction) {
    // y = 2x on 64 points: small net, adequate epochs, training MSE < 1e-2.
    Rng rng(31);
    const int n = 64;
    Eigen::MatrixXd X(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 2.0 * rng.next_real() - 1.0;
        y[i] = 2.0 * X(i, 0);
    }
    FcnnConfig cfg;
    cfg.hidden = {16, 8};
    cfg.learning_rate = 0.02;
    cfg.epochs = 400;
    cfg.batch_size = 16;
    cfg.seed = 3;
    auto model = fit_fcnn(X, y, cfg);
    double train_mse = (model.predict(X) - y).squaredNorm() / n;
    EXPECT_LT(train_mse, 1e-2);
}

TEST(Fcnn, PredictionPureAndShapeChecked) {
    Eigen::MatrixXd X(8, 2);
    Eigen::VectorXd y(8);
    Rng rng(1);
    for (int i = 0; i < 8; ++i) {
        X(i, 0) = rng.next_real();
        X(i, 1) = rng.next_real();
        y[i] = X(i, 0);
    }
    FcnnConfig cfg;
    cfg.hidden = {4, 3};
    cfg.epochs = 2;
    cfg.batch_size = 4;
    auto model = fit_fcnn(X, y, cfg);
    EXPECT_EQ(model.predict(Eigen::MatrixXd(0, 2)).size(), 0);
    EXPECT_THROW(model.predict(Eigen::MatrixXd::Zero(3, 5)), ShapeError);
    EXPECT_TRUE((model.predict(X).array() == model.predict(X).array()).all());
}

TEST(Fcnn, ConfigValidation) {
    Eigen::MatrixXd X(4, 1);
    X << 1, 2, 3, 4;
    Eigen::VectorXd y(4);
    y << 1, 2, 3, 4;
    FcnnConfig cfg;
    cfg.hidden = {4};
    EXPECT_THROW(fit_fcnn(X, y, cfg), ArgumentError);
    cfg.hidden = {4, 2};
    cfg.dropout = 1.0;
    EXPECT_THROW(fit_fcnn(X, y, cfg), ArgumentError);
    cfg.dropout = 0.0;
    cfg.learning_rate = -1.0;
    EXPECT_THROW(fit_fcnn(X, y, cfg), ArgumentError);
}
