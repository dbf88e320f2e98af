#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>

namespace synkit {

// Uniform fit/predict surface over the tabular learners. Fitted models are
// immutable; predict is a pure function and safe to call concurrently.
class Regressor {
public:
    virtual ~Regressor() = default;

    // One finite prediction per input row. Throws ShapeError when the input
    // width differs from the training width.
    virtual Eigen::VectorXd predict(const Eigen::MatrixXd& X) const = 0;

    virtual Eigen::Index input_width() const = 0;
    virtual std::string kind() const = 0;

    // Versioned textual serialization; see model_io.hpp. Round-trips are
    // bit-exact.
    virtual void save(std::ostream& out) const = 0;
};

void check_predict_input(const Regressor& model, const Eigen::MatrixXd& X);

}  // namespace synkit
