#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skillmeta/design.hpp"

namespace skillmeta {

enum class FactorKind { HingePlus, HingeMinus, Indicator };

/// One multiplicand of a basis term: a hinge max(x-t,0) / max(t-x,0) on a
/// numeric variable, or the raw value of a 0/1 indicator column.
struct BasisFactor {
    FactorKind kind = FactorKind::HingePlus;
    std::string variable;
    double knot = 0;  // meaningless for Indicator
};

/// Product of up to max_degree factors on distinct variables, with its
/// least-squares weight.
struct BasisTerm {
    std::vector<BasisFactor> factors;
    double coefficient = 0;

    int degree() const { return static_cast<int>(factors.size()); }
};

struct MarsConfig {
    int max_degree = 2;        // 1 or 2
    int max_terms = 34;        // cap on basis terms (intercept excluded)
    double min_rsq_gain = 0.001;
    double gcv_penalty_per_knot = -1;  // auto: 3 for interaction models, 2 for additive
    int cv_folds = 10;
    std::uint64_t rng_seed = 20220101;

    double knot_penalty() const {
        if (gcv_penalty_per_knot >= 0) return gcv_penalty_per_knot;
        return max_degree > 1 ? 3.0 : 2.0;
    }
};

/// Piecewise-linear regression model: intercept + sum of weighted hinge
/// products. Immutable once fit.
struct MarsModel {
    double intercept = 0;
    std::vector<BasisTerm> terms;
    double rsq = 0;
    double grsq = 0;  // 1 - gcv / gcv of the intercept-only model
    double gcv = 0;
    double rss = 0;
    double tss = 0;
    std::size_t n_train = 0;
    MarsConfig config;
    std::vector<std::string> variable_names;  // columns the model was fit against

    std::size_t knot_count() const;  // distinct (variable, knot) pairs
};

/// Evaluates one term on a named row. Throws for unknown variables.
double eval_term(const BasisTerm& term, const Eigen::RowVectorXd& row,
                 const std::vector<std::string>& names);

/// Greedy forward pass. Starting from the intercept, each step tries every
/// retained parent term x eligible variable x candidate knot (every unique
/// observed value), adding the reflected hinge pair (single indicator for
/// dummy columns) with the largest RSS reduction, refitting after each
/// addition. Stops at max_terms or when the best R^2 gain drops below
/// min_rsq_gain. A zero-variance response yields the intercept-only model.
MarsModel forward_pass(const DesignMatrix& matrix, const MarsConfig& config);

/// Backward elimination: repeatedly deletes the term whose removal raises
/// RSS least, refitting at each size, and returns the visited subset with
/// the smallest GCV = (RSS/n) / (1 - C/n)^2 where C = #coefficients +
/// knot_penalty * #knots.
MarsModel backward_prune(const MarsModel& model, const DesignMatrix& matrix);

/// forward_pass followed by backward_prune.
MarsModel fit_mars(const DesignMatrix& matrix, const MarsConfig& config);

Eigen::VectorXd predict(const MarsModel& model, const Eigen::MatrixXd& rows,
                        const std::vector<std::string>& names);
Eigen::VectorXd predict(const MarsModel& model, const DesignMatrix& matrix);

struct CvEntry {
    MarsConfig config;
    double mean_rmse = 0;
    std::vector<double> fold_rmse;
};

struct CvResult {
    MarsConfig best;
    std::vector<CvEntry> table;
};

/// K-fold grid search with deterministic seeded fold assignment (folds and
/// seed come from the first grid entry). Ties break toward fewer terms,
/// then lower degree.
CvResult cross_validate(const DesignMatrix& matrix, const std::vector<MarsConfig>& grid);

/// The default tuning grid: max_terms 2..100 step 10, degree 1 and 2.
std::vector<MarsConfig> default_cv_grid(const MarsConfig& base);

/// Term in display form, e.g. "h(345-Horizon)*h(15-ResMin)" or "CZN".
std::string format_term(const BasisTerm& term);

/// Structured-text model listing: intercept, one term per line with its
/// weight in scientific notation, fit statistics, and the configuration.
std::string format_model(const MarsModel& model);

}  // namespace skillmeta
