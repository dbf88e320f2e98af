#pragma once

#include "synkit/mlp.hpp"
#include "synkit/regressor.hpp"

#include <cstdint>
#include <vector>

namespace synkit {

struct FcnnConfig {
    std::vector<int> hidden = {64, 32};  // two hidden layer widths
    double learning_rate = 0.01;         // F
    double dropout = 0.0;                // D in [0, 1)
    int epochs = 10;                     // E
    int batch_size = 64;
    std::uint64_t seed = 0;
};

// Two-hidden-layer network trained with mini-batch SGD on mean squared
// error; inverted dropout on hidden activations during training only.
class FcnnModel : public Regressor {
public:
    FcnnModel() = default;
    FcnnModel(Mlp net, FcnnConfig cfg);

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override;
    Eigen::Index input_width() const override { return net_.input_dim(); }
    std::string kind() const override { return "fcnn"; }
    void save(std::ostream& out) const override;

    const Mlp& net() const { return net_; }
    Mlp& net() { return net_; }
    const FcnnConfig& config() const { return config_; }

private:
    Mlp net_;
    FcnnConfig config_;
};

void validate_fcnn_config(const FcnnConfig& cfg);

FcnnModel fit_fcnn(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const FcnnConfig& cfg);

}  // namespace synkit
