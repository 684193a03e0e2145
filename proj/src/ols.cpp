#include "skillmeta/ols.hpp"

#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

namespace skillmeta {

OlsFit ols_fit(const DesignMatrix& matrix) {
    const DesignMatrix m = drop_degenerate_columns(matrix);
    const Eigen::Index n = m.n();
    const Eigen::Index p_slopes = m.p();
    const Eigen::Index p = p_slopes + (m.has_intercept ? 1 : 0);
    if (n <= p)
        throw std::runtime_error(
            fmt::format("underdetermined regression: n = {} <= p = {}", n, p));

    Eigen::MatrixXd X(n, p);
    X.leftCols(p_slopes) = m.X;
    if (m.has_intercept) X.col(p_slopes).setOnes();

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::VectorXd beta = qr.solve(m.y);
    const Eigen::VectorXd resid = m.y - X * beta;
    const double rss = resid.squaredNorm();

    OlsFit fit;
    fit.coefficient_names = m.column_names;
    if (m.has_intercept) fit.coefficient_names.push_back("Constant");
    fit.coefficients = beta;
    fit.residuals = resid;
    fit.n = static_cast<std::size_t>(n);
    fit.dof = static_cast<std::size_t>(n - p);
    fit.dropped_columns = m.dropped_columns;
    fit.sigma2 = rss / static_cast<double>(n - p);

    const double tss = m.has_intercept
                           ? (m.y.array() - m.y.mean()).matrix().squaredNorm()
                           : m.y.squaredNorm();
    fit.r_squared = tss > 0 ? 1.0 - rss / tss : 0.0;
    fit.adj_r_squared =
        tss > 0 ? 1.0 - (rss / static_cast<double>(n - p)) / (tss / static_cast<double>(n - 1))
                : 0.0;

    // classical covariance: sigma^2 (X'X)^-1 via the triangular factor
    const Eigen::MatrixXd R =
        qr.matrixQR().topRows(p).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::VectorXd diag_xtx_inv = (Rinv.array() * Rinv.array()).rowwise().sum();

    fit.standard_errors = (fit.sigma2 * diag_xtx_inv.array()).sqrt();
    fit.t_stats.resize(p);
    fit.p_values.resize(p);
    const boost::math::students_t_distribution<double> tdist(static_cast<double>(fit.dof));
    for (Eigen::Index j = 0; j < p; ++j) {
        const double se = fit.standard_errors(j);
        if (se > 0) {
            fit.t_stats(j) = beta(j) / se;
            fit.p_values(j) = 2.0 * boost::math::cdf(tdist, -std::abs(fit.t_stats(j)));
        } else {
            // exact fit: a zero standard error makes any nonzero coefficient certain
            fit.t_stats(j) = beta(j) == 0 ? 0.0 : std::numeric_limits<double>::infinity();
            fit.p_values(j) = beta(j) == 0 ? 1.0 : 0.0;
        }
    }
    return fit;
}

const char* significance_stars(double p_value) {
    if (p_value < 0.01) return "***";
    if (p_value < 0.05) return "**";
    if (p_value < 0.1) return "*";
    return "";
}

HorizonFits run_horizon_regressions(const Dataset& dataset) {
    const HorizonPartitions parts = partition_by_horizon(dataset);
    auto fit_one = [](const Dataset& part, const char* label) {
        if (part.records.empty())
            throw std::runtime_error(fmt::format("empty {} partition", label));
        return ols_fit(build_design_matrix(part));
    };
    HorizonFits fits;
    fits.intra_hour = fit_one(parts.intra_hour, "intra-hour");
    fits.intra_day = fit_one(parts.intra_day, "intra-day");
    fits.day_ahead = fit_one(parts.day_ahead, "day-ahead");
    return fits;
}

}  // namespace skillmeta
