#include "synkit/elastic_net.hpp"

#include "synkit/errors.hpp"
#include "synkit/model_io.hpp"

#include <cmath>

namespace synkit {

double soft_threshold(double value, double threshold) {
    if (value > threshold) return value - threshold;
    if (value < -threshold) return value + threshold;
    return 0.0;
}

double elastic_net_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& beta, double intercept,
                             const ElasticNetConfig& cfg) {
    const double n = static_cast<double>(X.rows());
    Eigen::VectorXd r = y - X * beta;
    r.array() -= intercept;
    double fit = r.squaredNorm() / (2.0 * n);
    double l1 = beta.lpNorm<1>();
    double l2 = beta.squaredNorm();
    return fit + cfg.strength * (cfg.mixing * l1 + 0.5 * (1.0 - cfg.mixing) * l2);
}

LinearModel::LinearModel(Eigen::VectorXd beta, double intercept, ElasticNetConfig cfg)
    : beta_(std::move(beta)), intercept_(intercept), config_(cfg) {
    if (!beta_.allFinite() || !std::isfinite(intercept_)) {
        throw NumericError("linear model has non-finite coefficients");
    }
}

Eigen::VectorXd LinearModel::predict(const Eigen::MatrixXd& X) const {
    check_predict_input(*this, X);
    Eigen::VectorXd out = X * beta_;
    out.array() += intercept_;
    return out;
}

void LinearModel::save(std::ostream& out) const { save_linear_model(*this, out); }

LinearModel fit_elastic_net(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const ElasticNetConfig& cfg) {
    if (X.rows() == 0 || X.cols() == 0) {
        throw ShapeError("fit_elastic_net: empty design matrix");
    }
    if (X.rows() != y.size()) {
        throw ShapeError("fit_elastic_net: X has " + std::to_string(X.rows()) + " rows but y has " +
                         std::to_string(y.size()) + " entries");
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw NumericError("fit_elastic_net: non-finite input");
    }
    if (cfg.strength < 0.0 || cfg.mixing < 0.0 || cfg.mixing > 1.0 || cfg.tol <= 0.0 ||
        cfg.max_sweeps < 1) {
        throw ArgumentError("fit_elastic_net: config outside its domain");
    }

    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double l1_penalty = cfg.strength * cfg.mixing;
    const double l2_penalty = cfg.strength * (1.0 - cfg.mixing);

    // Per-coordinate column norms and curvature, fixed across sweeps.
    Eigen::VectorXd col_sq(p);
    Eigen::VectorXd curvature(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        col_sq[j] = inv_n * X.col(j).squaredNorm();
        curvature[j] = col_sq[j] + l2_penalty;
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double intercept = y.mean();
    Eigen::VectorXd residual = y;  // r = y - X beta - intercept
    residual.array() -= intercept;

    int sweeps = 0;
    for (; sweeps < cfg.max_sweeps; ++sweeps) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            double old = beta[j];
            // rho = (1/n) x_j . (r + x_j old) — gradient with coordinate j removed
            double rho = inv_n * X.col(j).dot(residual) + col_sq[j] * old;
            double updated = curvature[j] > 0.0 ? soft_threshold(rho, l1_penalty) / curvature[j]
                                                : 0.0;
            if (updated != old) {
                residual += X.col(j) * (old - updated);
                beta[j] = updated;
                max_change = std::max(max_change, std::abs(updated - old));
            }
        }
        // Intercept is unpenalized: optimal value is the residual mean shift.
        double shift = residual.mean();
        if (shift != 0.0) {
            intercept += shift;
            residual.array() -= shift;
            max_change = std::max(max_change, std::abs(shift));
        }
        if (max_change < cfg.tol) {
            ++sweeps;
            break;
        }
    }

    LinearModel model(std::move(beta), intercept, cfg);
    model.set_sweeps_used(sweeps);
    return model;
}

}  // namespace synkit
