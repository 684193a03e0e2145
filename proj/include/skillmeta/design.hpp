#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skillmeta/dataset.hpp"

namespace skillmeta {

/// Numeric regression design built from a Dataset. Numeric factors pass
/// through unscaled; each categorical level except its baseline owns one
/// 0/1 indicator column. The intercept is implicit (see has_intercept),
/// X holds slope columns only.
struct DesignMatrix {
    std::vector<std::string> column_names;  // alphabetical, matching report order
    std::vector<bool> is_dummy;             // true for 0/1 indicator columns
    Eigen::MatrixXd X;                      // n x p
    Eigen::VectorXd y;                      // skill score, percent
    bool has_intercept = true;
    std::map<std::string, std::string> baselines;

    struct DroppedColumn {
        std::string name;
        std::string reason;
    };
    std::vector<DroppedColumn> dropped_columns;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }
    std::size_t column_index(const std::string& name) const;  // throws if absent
};

/// Baselines: climate zone C, model class TS, reference CP, type PV.
DesignMatrix build_design_matrix(const Dataset& dataset, bool include_intercept = true);

/// Removes zero-variance columns and columns collinear with earlier ones
/// (residual norm after projection on prior kept columns below 1e-8 of the
/// column's own norm). Removal reasons are recorded. Idempotent.
DesignMatrix drop_degenerate_columns(const DesignMatrix& matrix);

/// Delimited-text export (response column last) for external verification.
void write_design_matrix(const std::string& path, const DesignMatrix& matrix, char delim = ',');

}  // namespace skillmeta
