#include "skillmeta/pdp.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace skillmeta {

namespace {

std::vector<double> default_grid(const Eigen::MatrixXd& rows, Eigen::Index col, bool dummy,
                                 const std::vector<double>& breakpoints) {
    if (dummy) return {0.0, 1.0};
    const double lo = rows.col(col).minCoeff();
    const double hi = rows.col(col).maxCoeff();
    std::set<double> pts;
    const int k = 50;
    for (int i = 0; i < k; ++i)
        pts.insert(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1));
    for (double b : breakpoints)
        if (b >= lo && b <= hi) pts.insert(b);
    return {pts.begin(), pts.end()};
}

}  // namespace

PdpGrid partial_dependence(const RowPredictor& model, const Eigen::MatrixXd& rows,
                           const std::vector<std::string>& column_names,
                           const std::vector<bool>& is_dummy,
                           const std::vector<std::string>& features,
                           const std::vector<std::vector<double>>& explicit_grids,
                           const std::vector<double>& feature_breakpoints) {
    if (features.empty() || features.size() > 2)
        throw std::invalid_argument("partial dependence supports one or two features");
    if (rows.rows() == 0) throw std::invalid_argument("empty background data");

    std::vector<Eigen::Index> cols;
    for (const auto& f : features) {
        auto it = std::find(column_names.begin(), column_names.end(), f);
        if (it == column_names.end())
            throw std::invalid_argument(fmt::format("unknown feature: {}", f));
        cols.push_back(static_cast<Eigen::Index>(it - column_names.begin()));
    }

    std::vector<std::vector<double>> grids;
    for (std::size_t k = 0; k < features.size(); ++k) {
        if (k < explicit_grids.size() && !explicit_grids[k].empty()) {
            grids.push_back(explicit_grids[k]);
        } else {
            const bool dummy = is_dummy[static_cast<std::size_t>(cols[k])];
            grids.push_back(default_grid(rows, cols[k], dummy,
                                         k == 0 ? feature_breakpoints
                                                : std::vector<double>{}));
        }
    }

    PdpGrid out;
    out.features = features;
    out.n_background = static_cast<std::size_t>(rows.rows());

    std::vector<std::vector<double>> tuples;
    if (features.size() == 1) {
        for (double v : grids[0]) tuples.push_back({v});
    } else {
        for (double a : grids[0])
            for (double b : grids[1]) tuples.push_back({a, b});
    }

    Eigen::MatrixXd work = rows;
    for (const auto& tuple : tuples) {
        for (std::size_t k = 0; k < cols.size(); ++k) work.col(cols[k]).setConstant(tuple[k]);
        const Eigen::VectorXd pred = model(work, column_names);
        out.grid_values.push_back(tuple);
        out.averaged_predictions.push_back(pred.mean());
    }
    return out;
}

PdpGrid partial_dependence(const MarsModel& model, const DesignMatrix& matrix,
                           const std::vector<std::string>& features,
                           const std::vector<std::vector<double>>& explicit_grids) {
    // knots on the leading feature keep the piecewise-linear breakpoints visible
    std::vector<double> breakpoints;
    for (const auto& term : model.terms)
        for (const auto& f : term.factors)
            if (f.kind != FactorKind::Indicator && f.variable == features.front())
                breakpoints.push_back(f.knot);

    RowPredictor predictor = [&model](const Eigen::MatrixXd& rows,
                                      const std::vector<std::string>& names) {
        return predict(model, rows, names);
    };
    return partial_dependence(predictor, matrix.X, matrix.column_names, matrix.is_dummy,
                              features, explicit_grids, breakpoints);
}

std::string format_pdp(const PdpGrid& grid, char delim) {
    std::string out;
    for (std::size_t k = 0; k < grid.features.size(); ++k)
        out += fmt::format("{}{}", grid.features[k], delim);
    out += "prediction\n";
    for (std::size_t i = 0; i < grid.grid_values.size(); ++i) {
        for (double v : grid.grid_values[i]) out += fmt::format("{}{}", v, delim);
        out += fmt::format("{}\n", grid.averaged_predictions[i]);
    }
    return out;
}

}  // namespace skillmeta
