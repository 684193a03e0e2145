#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skillmeta/design.hpp"

namespace skillmeta {

/// Ordinary least squares fit with classical (homoskedastic) inference.
/// When an intercept is present it is the last entry, named "Constant".
struct OlsFit {
    std::vector<std::string> coefficient_names;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd standard_errors;
    Eigen::VectorXd t_stats;
    Eigen::VectorXd p_values;  // two-sided, t distribution with n-p dof
    double r_squared = 0;
    double adj_r_squared = 0;
    double sigma2 = 0;  // RSS / (n - p)
    std::size_t n = 0;
    std::size_t dof = 0;
    Eigen::VectorXd residuals;
    std::vector<DesignMatrix::DroppedColumn> dropped_columns;
};

/// Fits y on the design columns (plus intercept when the matrix has one)
/// via Householder QR. Degenerate columns are dropped first and recorded.
/// Throws when n <= p after dropping.
OlsFit ols_fit(const DesignMatrix& matrix);

/// Significance stars at the 0.1 / 0.05 / 0.01 thresholds: "", "*", "**", "***".
const char* significance_stars(double p_value);

struct HorizonFits {
    OlsFit intra_hour;
    OlsFit intra_day;
    OlsFit day_ahead;
};

/// Partitions by horizon class, encodes each partition independently
/// (degenerate columns may differ), and fits each. Throws if a partition
/// is empty.
HorizonFits run_horizon_regressions(const Dataset& dataset);

}  // namespace skillmeta
