#include "synkit/ensemble.hpp"

#include "synkit/dataio.hpp"
#include "synkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace synkit {

namespace {

double mean_squared_error(const Eigen::VectorXd& pred, const Eigen::VectorXd& y) {
    return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

long grid_points(double step) {
    if (step <= 0.0 || step > 1.0) throw ArgumentError("grid step must lie in (0, 1]");
    double count = 1.0 / step;
    long rounded = std::lround(count);
    if (std::abs(count - static_cast<double>(rounded)) > 1e-9) {
        throw ArgumentError("grid step must divide 1 evenly");
    }
    return rounded;
}

}  // namespace

void validate_simplex_weights(const Eigen::VectorXd& weights, double tolerance) {
    if ((weights.array() < 0.0).any()) {
        throw InvariantError("ensemble weights must be non-negative");
    }
    double sum = weights.sum();
    if (std::abs(sum - 1.0) > tolerance) {
        throw InvariantError("ensemble weights sum to " + format_double(sum) + ", expected 1");
    }
}

Eigen::VectorXd weighted_predict(const std::vector<BaseLearnerEntry>& entries,
                                 const Eigen::VectorXd& weights) {
    if (entries.empty()) throw ArgumentError("weighted_predict: no entries");
    if (static_cast<Eigen::Index>(entries.size()) != weights.size()) {
        throw ShapeError("weighted_predict: " + std::to_string(entries.size()) +
                         " entries but " + std::to_string(weights.size()) + " weights");
    }
    validate_simplex_weights(weights);

    const Eigen::Index n = entries.front().val_predictions.size();
    for (const auto& e : entries) {
        if (e.val_predictions.size() != n) {
            throw ShapeError("weighted_predict: entry '" + e.id +
                             "' prediction length does not align");
        }
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        out += weights[static_cast<Eigen::Index>(i)] * entries[i].val_predictions;
    }
    return out;
}

MixResult search_mixing_weight(const Eigen::VectorXd& current, const Eigen::VectorXd& candidate,
                               const Eigen::VectorXd& y, double step) {
    if (current.size() != candidate.size() || current.size() != y.size()) {
        throw ShapeError("search_mixing_weight: vector lengths do not align");
    }
    if (y.size() == 0) throw ArgumentError("search_mixing_weight: empty vectors");
    const long points = grid_points(step);

    MixResult best;
    best.gamma = 0.0;
    best.mse = mean_squared_error(current, y);
    // Blend as current + gamma * (candidate - current): identical candidates
    // then reproduce `current` bit-exactly at every gamma, so the gamma = 0
    // tie-break is honored.
    Eigen::VectorXd direction = candidate - current;
    for (long k = 1; k <= points; ++k) {
        double gamma = static_cast<double>(k) * step;
        Eigen::VectorXd blend = current + gamma * direction;
        double mse = mean_squared_error(blend, y);
        if (mse < best.mse) {
            best.gamma = gamma;
            best.mse = mse;
        }
    }
    return best;
}

EnsembleModel greedy_forward_ensemble(const std::vector<BaseLearnerEntry>& entries,
                                      const Eigen::VectorXd& y, double step, double rel_tol) {
    if (entries.empty()) throw ArgumentError("greedy_forward_ensemble: no entries");
    grid_points(step);  // validates step
    const Eigen::Index n = y.size();
    for (const auto& e : entries) {
        if (e.val_predictions.size() != n) {
            throw ShapeError("greedy_forward_ensemble: entry '" + e.id +
                             "' prediction length does not align with targets");
        }
    }
    std::set<std::string> ids;
    for (const auto& e : entries) {
        if (!ids.insert(e.id).second) {
            throw ArgumentError("greedy_forward_ensemble: duplicate entry id '" + e.id + "'");
        }
    }

    // Best first (ascending MSE); id breaks exact ties so the order is total.
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> entry_mse(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entry_mse[i] = mean_squared_error(entries[i].val_predictions, y);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (entry_mse[a] != entry_mse[b]) return entry_mse[a] < entry_mse[b];
        return entries[a].id < entries[b].id;
    });

    EnsembleModel model;
    model.member_ids.push_back(entries[order[0]].id);
    std::vector<double> weights = {1.0};
    Eigen::VectorXd blend = entries[order[0]].val_predictions;
    double blend_mse = entry_mse[order[0]];

    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto& candidate = entries[order[k]];
        MixResult mix = search_mixing_weight(blend, candidate.val_predictions, y, step);
        bool improved = blend_mse > 0.0 && (blend_mse - mix.mse) / blend_mse >= rel_tol;
        if (mix.gamma <= 0.0 || !improved) break;

        for (double& w : weights) w *= 1.0 - mix.gamma;
        weights.push_back(mix.gamma);
        model.member_ids.push_back(candidate.id);
        blend += mix.gamma * (candidate.val_predictions - blend);
        blend_mse = mix.mse;
    }

    Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(weights.data(),
                                                    static_cast<Eigen::Index>(weights.size()));
    w /= w.sum();
    model.weights = w;
    validate_simplex_weights(model.weights);
    return model;
}

EnsembleModel joint_grid_ensemble(const std::vector<BaseLearnerEntry>& entries,
                                  const Eigen::VectorXd& y, double step) {
    if (entries.empty() || entries.size() > 3) {
        throw ArgumentError("joint_grid_ensemble: supports 1 to 3 members");
    }
    if (step < 0.05) {
        throw ArgumentError("joint_grid_ensemble: step must be >= 0.05");
    }
    const long points = grid_points(step);

    EnsembleModel best;
    double best_mse = std::numeric_limits<double>::infinity();
    const std::size_t m = entries.size();

    std::vector<long> idx(m, 0);
    // Enumerate lattice points of the simplex: weights summing to `points`.
    std::function<void(std::size_t, long)> walk = [&](std::size_t at, long remaining) {
        if (at + 1 == m) {
            idx[at] = remaining;
            Eigen::VectorXd w(static_cast<Eigen::Index>(m));
            for (std::size_t i = 0; i < m; ++i) {
                w[static_cast<Eigen::Index>(i)] =
                    static_cast<double>(idx[i]) / static_cast<double>(points);
            }
            Eigen::VectorXd blend = weighted_predict(entries, w);
            double mse = mean_squared_error(blend, y);
            if (mse < best_mse) {
                best_mse = mse;
                best.weights = w;
            }
            return;
        }
        for (long v = 0; v <= remaining; ++v) {
            idx[at] = v;
            walk(at + 1, remaining - v);
        }
    };
    walk(0, points);

    for (const auto& e : entries) best.member_ids.push_back(e.id);
    return best;
}

// --- file formats -----------------------------------------------------------

void write_prediction_csv(const Eigen::VectorXd& predictions, std::ostream& out) {
    out << "row_id,prediction\n";
    for (Eigen::Index i = 0; i < predictions.size(); ++i) {
        out << i << ',' << format_double(predictions[i]) << "\n";
    }
}

void write_prediction_csv(const Eigen::VectorXd& predictions, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open file for writing: " + path);
    write_prediction_csv(predictions, out);
}

namespace {

Eigen::VectorXd read_two_column_csv(std::istream& in, const std::string& origin,
                                    const std::string& header) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(origin + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) {
        throw FormatError(origin + ": bad header, expected `" + header + "`");
    }
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw FormatError(origin + ":" + std::to_string(line_no) + ": expected 2 fields");
        }
        std::string id = line.substr(0, comma);
        std::string value = line.substr(comma + 1);
        char* end = nullptr;
        long row = std::strtol(id.c_str(), &end, 10);
        if (end != id.c_str() + id.size() || row != static_cast<long>(values.size())) {
            throw FormatError(origin + ":" + std::to_string(line_no) +
                              ": row ids must count up from 0");
        }
        end = nullptr;
        double v = std::strtod(value.c_str(), &end);
        if (end != value.c_str() + value.size() || !std::isfinite(v)) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": bad value '" + value +
                             "'");
        }
        values.push_back(v);
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

Eigen::VectorXd read_prediction_csv(std::istream& in, const std::string& origin) {
    return read_two_column_csv(in, origin, "row_id,prediction");
}

Eigen::VectorXd read_prediction_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open file: " + path);
    return read_prediction_csv(in, path);
}

void write_target_csv(const Eigen::VectorXd& targets, std::ostream& out) {
    out << "row_id,target\n";
    for (Eigen::Index i = 0; i < targets.size(); ++i) {
        out << i << ',' << format_double(targets[i]) << "\n";
    }
}

Eigen::VectorXd read_target_csv(std::istream& in, const std::string& origin) {
    return read_two_column_csv(in, origin, "row_id,target");
}

Eigen::VectorXd read_target_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open file: " + path);
    return read_target_csv(in, path);
}

void write_ensemble_description(const EnsembleModel& model, std::ostream& out,
                                double validation_mse) {
    for (std::size_t i = 0; i < model.member_ids.size(); ++i) {
        out << model.member_ids[i] << ' '
            << format_double(model.weights[static_cast<Eigen::Index>(i)]) << "\n";
    }
    out << "# validation_mse " << format_double(validation_mse) << "\n";
}

EnsembleModel read_ensemble_description(std::istream& in, const std::string& origin) {
    EnsembleModel model;
    std::vector<double> weights;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string id;
        double w;
        if (!(ls >> id >> w)) {
            throw FormatError(origin + ":" + std::to_string(line_no) +
                              ": expected `member_id weight`");
        }
        model.member_ids.push_back(id);
        weights.push_back(w);
    }
    if (weights.empty()) throw FormatError(origin + ": no members");
    model.weights = Eigen::Map<Eigen::VectorXd>(weights.data(),
                                                static_cast<Eigen::Index>(weights.size()));
    validate_simplex_weights(model.weights);
    return model;
}

}  // namespace synkit
