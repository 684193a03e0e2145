#pragma once

#include <string>
#include <vector>

#include "skillmeta/dataset.hpp"
#include "skillmeta/ols.hpp"
#include "skillmeta/pdp.hpp"

namespace skillmeta {

/// Regression block in journal layout: one `name  coefficient*** (SE)` row
/// per regressor (stars at the 0.1 / 0.05 / 0.01 thresholds), blank cells
/// for columns dropped as degenerate, and an n / R^2 / adjusted R^2 footer.
std::string format_regression_table(const OlsFit& fit, const std::string& title = "");

std::string format_summary_header();

/// One summary row: n, mean, sd, median, trimmed mean, mad, min, max,
/// range, skew, kurtosis, se at two decimals.
std::string format_summary_row(const std::string& variable, const SummaryStats& stats);

/// Minimal static SVG rendering of a 1-feature partial dependence curve.
std::string render_pdp_line_svg(const PdpGrid& grid);

/// Minimal SVG heatmap of a 2-feature partial dependence grid.
std::string render_pdp_heatmap_svg(const PdpGrid& grid);

}  // namespace skillmeta
