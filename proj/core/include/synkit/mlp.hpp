#pragma once

#include "synkit/rng.hpp"

#include <Eigen/Core>

#include <vector>

namespace synkit {

// Dense feedforward stack: rectifier activations on hidden layers, linear
// output. Inputs and activations are column-per-example matrices. Kept
// deliberately small; the FCNN learner and the GNN prediction head both sit
// on top of it.
class Mlp {
public:
    struct Gradients {
        std::vector<Eigen::MatrixXd> weights;
        std::vector<Eigen::VectorXd> biases;

        void setZero();
        void add_scaled(const Gradients& other, double factor);
    };

    // Activations recorded by a forward pass, needed for backward.
    struct Trace {
        std::vector<Eigen::MatrixXd> inputs;  // input to each layer
        std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
    };

    Mlp() = default;
    // dims = {in, hidden..., out}; fan-in-scaled uniform initialization.
    Mlp(const std::vector<int>& dims, Rng& rng);

    int input_dim() const { return dims_.empty() ? 0 : dims_.front(); }
    int output_dim() const { return dims_.empty() ? 0 : dims_.back(); }
    int hidden_layers() const { return static_cast<int>(weights_.size()) - 1; }
    const std::vector<int>& dims() const { return dims_; }

    // `dropout_masks`, when non-null, holds one mask per hidden layer with
    // inverted-dropout scaling already applied; entries multiply the hidden
    // activations elementwise (training only).
    Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Trace* trace,
                            const std::vector<Eigen::MatrixXd>* dropout_masks) const;

    // Backpropagates grad_out (dLoss/dOutput), accumulating parameter
    // gradients and returning dLoss/dInput.
    Eigen::MatrixXd backward(const Trace& trace, const Eigen::MatrixXd& grad_out,
                             const std::vector<Eigen::MatrixXd>* dropout_masks,
                             Gradients& grads) const;

    // Inverted-dropout masks for one batch (one per hidden layer).
    std::vector<Eigen::MatrixXd> make_dropout_masks(Eigen::Index batch, double rate,
                                                    Rng& rng) const;

    Gradients zero_gradients() const;
    void apply_sgd(const Gradients& grads, double learning_rate);

    // Flat parameter access, used by serialization and gradient checks.
    Eigen::VectorXd parameter_vector() const;
    void set_parameter_vector(const Eigen::VectorXd& flat);
    static Eigen::VectorXd flatten(const Gradients& grads);

    const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
    const std::vector<Eigen::VectorXd>& biases() const { return biases_; }
    void set_layers(std::vector<Eigen::MatrixXd> weights, std::vector<Eigen::VectorXd> biases);

private:
    std::vector<int> dims_;
    std::vector<Eigen::MatrixXd> weights_;  // layer l: dims[l+1] x dims[l]
    std::vector<Eigen::VectorXd> biases_;
};

}  // namespace synkit
