#pragma once

#include "synkit/regressor.hpp"

#include <Eigen/Core>

namespace synkit {

struct ElasticNetConfig {
    double strength = 1.0;   // lambda, >= 0
    double mixing = 0.5;     // L1 fraction in [0, 1]
    double tol = 1e-8;       // convergence threshold on max coordinate change
    int max_sweeps = 1000;
};

// Linear model fit by cyclic coordinate descent on
//   (1/2n) |y - X beta - b|^2 + lambda (mixing |beta|_1 + (1-mixing)/2 |beta|_2^2)
// with an unpenalized intercept.
class LinearModel : public Regressor {
public:
    LinearModel() = default;
    LinearModel(Eigen::VectorXd beta, double intercept, ElasticNetConfig cfg);

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override;
    Eigen::Index input_width() const override { return beta_.size(); }
    std::string kind() const override { return "elastic_net"; }
    void save(std::ostream& out) const override;

    const Eigen::VectorXd& beta() const { return beta_; }
    double intercept() const { return intercept_; }
    const ElasticNetConfig& config() const { return config_; }
    int sweeps_used() const { return sweeps_used_; }
    void set_sweeps_used(int sweeps) { sweeps_used_ = sweeps; }

private:
    Eigen::VectorXd beta_;
    double intercept_ = 0.0;
    ElasticNetConfig config_;
    int sweeps_used_ = 0;
};

// Shrinkage operator solving the scalar L1 subproblem.
double soft_threshold(double value, double threshold);

// Objective value at (beta, intercept); exposed for convergence checks.
double elastic_net_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& beta, double intercept,
                             const ElasticNetConfig& cfg);

LinearModel fit_elastic_net(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const ElasticNetConfig& cfg);

}  // namespace synkit
