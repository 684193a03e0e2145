#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skillmeta/mars.hpp"

namespace skillmeta {

/// Partial dependence of a fitted model on one or two features: model
/// predictions with the feature(s) pinned to grid values, averaged over
/// every background row.
struct PdpGrid {
    std::vector<std::string> features;            // 1 or 2 names
    std::vector<std::vector<double>> grid_values; // one tuple per grid point
    std::vector<double> averaged_predictions;     // aligned with grid_values
    std::size_t n_background = 0;
};

/// Predicts a batch of rows under the given column naming.
using RowPredictor =
    std::function<Eigen::VectorXd(const Eigen::MatrixXd&, const std::vector<std::string>&)>;

/// Computes the partial dependence grid. The default grid for a numeric
/// feature is 50 evenly spaced points from min to max augmented with the
/// supplied breakpoints (a MARS model's knots on that feature); dummy
/// features use {0, 1}.
PdpGrid partial_dependence(const RowPredictor& model, const Eigen::MatrixXd& rows,
                           const std::vector<std::string>& column_names,
                           const std::vector<bool>& is_dummy,
                           const std::vector<std::string>& features,
                           const std::vector<std::vector<double>>& explicit_grids = {},
                           const std::vector<double>& feature_breakpoints = {});

/// Convenience wrapper for a MARS model fit on the same design.
PdpGrid partial_dependence(const MarsModel& model, const DesignMatrix& matrix,
                           const std::vector<std::string>& features,
                           const std::vector<std::vector<double>>& explicit_grids = {});

/// Long-format delimited text: one row per grid tuple, predictions last.
std::string format_pdp(const PdpGrid& grid, char delim = ',');

}  // namespace skillmeta
