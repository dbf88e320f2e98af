#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace synkit {

// Deterministic SVG overlaying target and estimate series for `n` seed-
// sampled rows, with legend and axis labels. Identical inputs and seed
// render byte-identical output.
std::string render_target_estimate_svg(const Eigen::VectorXd& targets,
                                       const Eigen::VectorXd& estimates, int n,
                                       std::uint64_t seed);

}  // namespace synkit
