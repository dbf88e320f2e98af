#pragma once

#include <iosfwd>
#include <memory>
#include <string>

namespace synkit {

class Regressor;
class LinearModel;
class DecisionTree;
class RandomForestModel;
class GbmModel;
class FcnnModel;
class GnnModel;

// Versioned textual model format. Doubles are written with 17 significant
// digits, so save -> load -> save reproduces the file byte for byte and the
// reloaded model predicts bit-identically.

void save_linear_model(const LinearModel& model, std::ostream& out);
void save_decision_tree(const DecisionTree& model, std::ostream& out);
void save_random_forest(const RandomForestModel& model, std::ostream& out);
void save_gbm(const GbmModel& model, std::ostream& out);
void save_fcnn(const FcnnModel& model, std::ostream& out);
void save_gnn(const GnnModel& model, std::ostream& out);

// Loads any tabular model (elastic net, tree, forest, gbm, fcnn).
std::unique_ptr<Regressor> load_regressor(std::istream& in);
std::unique_ptr<Regressor> load_regressor_file(const std::string& path);

GnnModel load_gnn(std::istream& in);
GnnModel load_gnn_file(const std::string& path);

// Peeks the `kind` field of a serialized model file.
std::string peek_model_kind(const std::string& path);

void save_model_file(const Regressor& model, const std::string& path);
void save_gnn_file(const GnnModel& model, const std::string& path);

}  // namespace synkit
