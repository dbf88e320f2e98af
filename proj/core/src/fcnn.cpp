#include "synkit/fcnn.hpp"

#include "synkit/errors.hpp"
#include "synkit/model_io.hpp"

#include <cmath>

namespace synkit {

FcnnModel::FcnnModel(Mlp net, FcnnConfig cfg) : net_(std::move(net)), config_(std::move(cfg)) {}

Eigen::VectorXd FcnnModel::predict(const Eigen::MatrixXd& X) const {
    check_predict_input(*this, X);
    if (X.rows() == 0) return Eigen::VectorXd(0);
    Eigen::MatrixXd out = net_.forward(X.transpose(), nullptr, nullptr);
    return out.row(0).transpose();
}

void FcnnModel::save(std::ostream& out) const { save_fcnn(*this, out); }

void validate_fcnn_config(const FcnnConfig& cfg) {
    if (cfg.hidden.size() != 2) {
        throw ArgumentError("fcnn: exactly two hidden layer widths required");
    }
    for (int h : cfg.hidden) {
        if (h < 1) throw ArgumentError("fcnn: hidden widths must be positive");
    }
    if (cfg.learning_rate <= 0.0) throw ArgumentError("fcnn: learning_rate must be positive");
    if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) {
        throw ArgumentError("fcnn: dropout must lie in [0, 1)");
    }
    if (cfg.epochs < 1) throw ArgumentError("fcnn: epochs must be positive");
    if (cfg.batch_size < 1) throw ArgumentError("fcnn: batch_size must be positive");
}

FcnnModel fit_fcnn(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const FcnnConfig& cfg) {
    validate_fcnn_config(cfg);
    if (X.rows() == 0 || X.cols() == 0) throw ShapeError("fit_fcnn: empty design matrix");
    if (X.rows() != y.size()) {
        throw ShapeError("fit_fcnn: X has " + std::to_string(X.rows()) + " rows but y has " +
                         std::to_string(y.size()) + " entries");
    }
    if (!X.allFinite() || !y.allFinite()) throw NumericError("fit_fcnn: non-finite input");

    Rng rng(cfg.seed);
    Mlp net({static_cast<int>(X.cols()), cfg.hidden[0], cfg.hidden[1], 1}, rng);
    // Start at the mean prediction: the output bias absorbs the target
    // offset instead of the first epochs chasing it through the weights.
    {
        auto weights = net.weights();
        auto biases = net.biases();
        biases.back()[0] = y.mean();
        net.set_layers(std::move(weights), std::move(biases));
    }

    const Eigen::Index n = X.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

    Mlp::Gradients grads = net.zero_gradients();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
            const Eigen::Index b = std::min<Eigen::Index>(cfg.batch_size, n - start);
            Eigen::MatrixXd batch(X.cols(), b);
            Eigen::RowVectorXd target(b);
            for (Eigen::Index k = 0; k < b; ++k) {
                batch.col(k) = X.row(order[static_cast<std::size_t>(start + k)]).transpose();
                target[k] = y[order[static_cast<std::size_t>(start + k)]];
            }

            std::vector<Eigen::MatrixXd> masks;
            const std::vector<Eigen::MatrixXd>* mask_ptr = nullptr;
            if (cfg.dropout > 0.0) {
                masks = net.make_dropout_masks(b, cfg.dropout, rng);
                mask_ptr = &masks;
            }

            Mlp::Trace trace;
            Eigen::MatrixXd out = net.forward(batch, &trace, mask_ptr);
            Eigen::RowVectorXd diff = out.row(0) - target;
            double loss = diff.squaredNorm() / static_cast<double>(b);
            if (!std::isfinite(loss)) {
                throw DivergenceError("fit_fcnn: non-finite training loss", epoch);
            }

            Eigen::MatrixXd grad_out = (2.0 / static_cast<double>(b)) * diff;
            grads.setZero();
            net.backward(trace, grad_out, mask_ptr, grads);
            net.apply_sgd(grads, cfg.learning_rate);
        }
    }
    return FcnnModel(std::move(net), cfg);
}

}  // namespace synkit
