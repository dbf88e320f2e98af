#include "synkit/mlp.hpp"

#include "synkit/errors.hpp"

#include <cmath>

namespace synkit {

void Mlp::Gradients::setZero() {
    for (auto& w : weights) w.setZero();
    for (auto& b : biases) b.setZero();
}

void Mlp::Gradients::add_scaled(const Gradients& other, double factor) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        weights[l] += factor * other.weights[l];
        biases[l] += factor * other.biases[l];
    }
}

Mlp::Mlp(const std::vector<int>& dims, Rng& rng) : dims_(dims) {
    if (dims.size() < 2) throw ArgumentError("mlp: need at least input and output dims");
    for (int d : dims) {
        if (d < 1) throw ArgumentError("mlp: layer widths must be positive");
    }
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        int fan_in = dims[l];
        int fan_out = dims[l + 1];
        double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                w(i, j) = rng.next_symmetric(limit);
            }
        }
        weights_.push_back(std::move(w));
        biases_.push_back(Eigen::VectorXd::Zero(fan_out));
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Trace* trace,
                             const std::vector<Eigen::MatrixXd>* dropout_masks) const {
    if (input.rows() != input_dim()) {
        throw ShapeError("mlp forward: input has " + std::to_string(input.rows()) +
                         " rows, expected " + std::to_string(input_dim()));
    }
    if (trace) {
        trace->inputs.clear();
        trace->pre.clear();
    }
    Eigen::MatrixXd a = input;
    const std::size_t layers = weights_.size();
    for (std::size_t l = 0; l < layers; ++l) {
        if (trace) trace->inputs.push_back(a);
        Eigen::MatrixXd z = (weights_[l] * a).colwise() + biases_[l];
        if (trace) trace->pre.push_back(z);
        if (l + 1 < layers) {
            a = z.cwiseMax(0.0);
            if (dropout_masks) a = a.cwiseProduct((*dropout_masks)[l]);
        } else {
            a = std::move(z);  // linear output layer
        }
    }
    return a;
}

Eigen::MatrixXd Mlp::backward(const Trace& trace, const Eigen::MatrixXd& grad_out,
                              const std::vector<Eigen::MatrixXd>* dropout_masks,
                              Gradients& grads) const {
    const int layers = static_cast<int>(weights_.size());
    Eigen::MatrixXd grad = grad_out;
    for (int l = layers - 1; l >= 0; --l) {
        const std::size_t lu = static_cast<std::size_t>(l);
        Eigen::MatrixXd grad_z;
        if (l == layers - 1) {
            grad_z = std::move(grad);
        } else {
            // Undo dropout, then gate by the rectifier derivative.
            Eigen::MatrixXd g = dropout_masks ? grad.cwiseProduct((*dropout_masks)[lu]) : grad;
            grad_z = (trace.pre[lu].array() > 0.0).select(g, 0.0);
        }
        grads.weights[lu] += grad_z * trace.inputs[lu].transpose();
        grads.biases[lu] += grad_z.rowwise().sum();
        grad = weights_[lu].transpose() * grad_z;
    }
    return grad;
}

std::vector<Eigen::MatrixXd> Mlp::make_dropout_masks(Eigen::Index batch, double rate,
                                                     Rng& rng) const {
    std::vector<Eigen::MatrixXd> masks;
    const double keep = 1.0 - rate;
    for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
        Eigen::MatrixXd mask(weights_[l].rows(), batch);
        for (Eigen::Index j = 0; j < mask.cols(); ++j) {
            for (Eigen::Index i = 0; i < mask.rows(); ++i) {
                mask(i, j) = rng.next_real() < keep ? 1.0 / keep : 0.0;
            }
        }
        masks.push_back(std::move(mask));
    }
    return masks;
}

Mlp::Gradients Mlp::zero_gradients() const {
    Gradients g;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        g.weights.push_back(Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
        g.biases.push_back(Eigen::VectorXd::Zero(biases_[l].size()));
    }
    return g;
}

void Mlp::apply_sgd(const Gradients& grads, double learning_rate) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        weights_[l] -= learning_rate * grads.weights[l];
        biases_[l] -= learning_rate * grads.biases[l];
    }
}

Eigen::VectorXd Mlp::parameter_vector() const {
    Eigen::Index total = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        total += weights_[l].size() + biases_[l].size();
    }
    Eigen::VectorXd flat(total);
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) {
            for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) flat[at++] = weights_[l](i, j);
        }
        for (Eigen::Index i = 0; i < biases_[l].size(); ++i) flat[at++] = biases_[l][i];
    }
    return flat;
}

void Mlp::set_parameter_vector(const Eigen::VectorXd& flat) {
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) {
            for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) weights_[l](i, j) = flat[at++];
        }
        for (Eigen::Index i = 0; i < biases_[l].size(); ++i) biases_[l][i] = flat[at++];
    }
    if (at != flat.size()) throw ShapeError("mlp: parameter vector length mismatch");
}

Eigen::VectorXd Mlp::flatten(const Gradients& grads) {
    Eigen::Index total = 0;
    for (std::size_t l = 0; l < grads.weights.size(); ++l) {
        total += grads.weights[l].size() + grads.biases[l].size();
    }
    Eigen::VectorXd flat(total);
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < grads.weights.size(); ++l) {
        for (Eigen::Index j = 0; j < grads.weights[l].cols(); ++j) {
            for (Eigen::Index i = 0; i < grads.weights[l].rows(); ++i) {
                flat[at++] = grads.weights[l](i, j);
            }
        }
        for (Eigen::Index i = 0; i < grads.biases[l].size(); ++i) flat[at++] = grads.biases[l][i];
    }
    return flat;
}

void Mlp::set_layers(std::vector<Eigen::MatrixXd> weights, std::vector<Eigen::VectorXd> biases) {
    if (weights.size() != biases.size() || weights.empty()) {
        throw ShapeError("mlp: inconsistent layer stacks");
    }
    dims_.clear();
    dims_.push_back(static_cast<int>(weights.front().cols()));
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].rows() != biases[l].size()) {
            throw ShapeError("mlp: weight/bias shape mismatch at layer " + std::to_string(l));
        }
        if (l > 0 && weights[l].cols() != weights[l - 1].rows()) {
            throw ShapeError("mlp: layer widths do not chain at layer " + std::to_string(l));
        }
        dims_.push_back(static_cast<int>(weights[l].rows()));
    }
    weights_ = std::move(weights);
    biases_ = std::move(biases);
}

}  // namespace synkit
