#include "skillmeta/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace skillmeta {

namespace {

// Three decimals, widened for magnitudes below 0.001 so small values keep
// a significant digit (an SE of 0.0005 renders as 0.0005, not 0.001).
std::string round3(double v) {
    int digits = 3;
    const double mag = std::abs(v);
    if (v != 0 && mag < 1e-3)
        digits = std::min(9, static_cast<int>(std::ceil(-std::log10(mag))));
    return fmt::format("{:.{}f}", v, digits);
}

std::string svg_header(int width, int height) {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
        "viewBox=\"0 0 {} {}\">\n<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        width, height, width, height, width, height);
}

}  // namespace

std::string format_regression_table(const OlsFit& fit, const std::string& title) {
    std::string out;
    if (!title.empty()) out += fmt::format("{}\n", title);
    out += fmt::format("{:<22} {}\n", "", "Dependent variable: SS");

    // kept and dropped slope names interleave in canonical (alphabetical) order
    std::vector<std::pair<std::string, int>> rows;  // name, index into fit (-1 = dropped)
    const std::size_t n_slopes =
        fit.coefficient_names.size() - (fit.coefficient_names.back() == "Constant" ? 1 : 0);
    for (std::size_t j = 0; j < n_slopes; ++j)
        rows.push_back({fit.coefficient_names[j], static_cast<int>(j)});
    for (const auto& d : fit.dropped_columns) rows.push_back({d.name, -1});
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    for (const auto& [name, idx] : rows) {
        if (idx < 0) {
            out += fmt::format("{:<22}\n", name);
        } else {
            out += fmt::format("{:<22} {}{} ({})\n", name, round3(fit.coefficients(idx)),
                               significance_stars(fit.p_values(idx)),
                               round3(fit.standard_errors(idx)));
        }
    }
    if (fit.coefficient_names.back() == "Constant") {
        const auto j = static_cast<Eigen::Index>(fit.coefficient_names.size()) - 1;
        out += fmt::format("{:<22} {}{} ({})\n", "Constant", round3(fit.coefficients(j)),
                           significance_stars(fit.p_values(j)), round3(fit.standard_errors(j)));
    }
    out += fmt::format("{:<22} {}\n", "Observations", fit.n);
    out += fmt::format("{:<22} {:.3f}\n", "R2", fit.r_squared);
    out += fmt::format("{:<22} {:.3f}\n", "Adjusted R2", fit.adj_r_squared);
    out += "Note: *: p<0.1, **: p<0.05, ***: p<0.01\n";
    return out;
}

std::string format_summary_header() {
    return fmt::format("{:<12} {:>5} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>6} {:>9} {:>6}\n",
                       "Variable", "N", "Mean", "SD", "Median", "Trim", "MAD", "Min", "Max",
                       "Range", "Skew", "Kurtosis", "SE");
}

std::string format_summary_row(const std::string& variable, const SummaryStats& s) {
    return fmt::format(
        "{:<12} {:>5} {:>9.2f} {:>9.2f} {:>9.2f} {:>9.2f} {:>9.2f} {:>9.2f} {:>9.2f} {:>9.2f} "
        "{:>6.2f} {:>9.2f} {:>6.2f}\n",
        variable, s.n, s.mean, s.sd, s.median, s.trimmed_mean, s.mad, s.min, s.max, s.range,
        s.skew, s.kurtosis, s.se);
}

std::string render_pdp_line_svg(const PdpGrid& grid) {
    const int w = 640, h = 420, margin = 50;
    double xmin = grid.grid_values.front()[0], xmax = xmin;
    double ymin = grid.averaged_predictions.front(), ymax = ymin;
    for (std::size_t i = 0; i < grid.grid_values.size(); ++i) {
        xmin = std::min(xmin, grid.grid_values[i][0]);
        xmax = std::max(xmax, grid.grid_values[i][0]);
        ymin = std::min(ymin, grid.averaged_predictions[i]);
        ymax = std::max(ymax, grid.averaged_predictions[i]);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;

    auto sx = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
    auto sy = [&](double y) { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); };

    std::string svg = svg_header(w, h);
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\" stroke=\"black\"/>\n",
        margin, h - margin, w - margin, margin);
    svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < grid.grid_values.size(); ++i)
        svg += fmt::format("{:.2f},{:.2f} ", sx(grid.grid_values[i][0]),
                           sy(grid.averaged_predictions[i]));
    svg += "\"/>\n";
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        w / 2, h - 12, grid.features[0]);
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\">[{:.4g}, {:.4g}]</text>\n", margin, margin - 8,
        ymin, ymax);
    svg += "</svg>\n";
    return svg;
}

std::string render_pdp_heatmap_svg(const PdpGrid& grid) {
    std::vector<double> xs, ys;
    for (const auto& t : grid.grid_values) {
        if (std::find(xs.begin(), xs.end(), t[0]) == xs.end()) xs.push_back(t[0]);
        if (std::find(ys.begin(), ys.end(), t[1]) == ys.end()) ys.push_back(t[1]);
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());

    double vmin = grid.averaged_predictions.front(), vmax = vmin;
    for (double v : grid.averaged_predictions) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (vmax == vmin) vmax = vmin + 1;

    const int margin = 50;
    const int cell = std::max(3, static_cast<int>(520 / std::max(xs.size(), ys.size())));
    const int w = margin * 2 + cell * static_cast<int>(xs.size());
    const int h = margin * 2 + cell * static_cast<int>(ys.size());

    auto xi = [&](double x) {
        return std::find(xs.begin(), xs.end(), x) - xs.begin();
    };
    auto yi = [&](double y) {
        return std::find(ys.begin(), ys.end(), y) - ys.begin();
    };

    std::string svg = svg_header(w, h);
    for (std::size_t i = 0; i < grid.grid_values.size(); ++i) {
        const auto cx = xi(grid.grid_values[i][0]);
        const auto cy = yi(grid.grid_values[i][1]);
        const double u = (grid.averaged_predictions[i] - vmin) / (vmax - vmin);
        const int r = static_cast<int>(255 * u);
        const int b = static_cast<int>(255 * (1 - u));
        svg += fmt::format(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({},60,{})\"/>\n",
            margin + cell * static_cast<int>(cx),
            h - margin - cell * (static_cast<int>(cy) + 1), cell, cell, r, b);
    }
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n", w / 2,
        h - 12, grid.features[0]);
    svg += fmt::format(
        "<text x=\"14\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        h / 2, h / 2, grid.features[1]);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">[{:.4g}, {:.4g}]</text>\n",
                       margin, margin - 8, vmin, vmax);
    svg += "</svg>\n";
    return svg;
}

}  // namespace skillmeta
