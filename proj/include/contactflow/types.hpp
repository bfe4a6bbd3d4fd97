#pragma once

#include <Eigen/Dense>

namespace contactflow {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Coordinates of a point of the contact manifold, ordered as the chart's
/// coordinate names.
using ContactState = Vector;

}  // namespace contactflow
