#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "skillmeta/csv.hpp"
#include "skillmeta/dataset.hpp"
#include "skillmeta/design.hpp"
#include "skillmeta/manifest.hpp"
#include "skillmeta/mars.hpp"
#include "skillmeta/ols.hpp"
#include "skillmeta/pdp.hpp"
#include "skillmeta/report.hpp"
#include "skillmeta/skill.hpp"

namespace sm = skillmeta;

namespace {

struct CommonOpts {
    std::string input;
    std::string out;
    char delim = ',';
    int precision = 4;
    std::uint64_t seed = 20220101;
    std::vector<std::string> column_map_entries;
};

sm::ColumnMap parse_column_map(const std::vector<std::string>& entries) {
    sm::ColumnMap map;
    for (const auto& e : entries) {
        const auto pos = e.find('=');
        if (pos == std::string::npos)
            throw CLI::ValidationError("--map", "expected CANONICAL=HEADER, got '" + e + "'");
        map[e.substr(0, pos)] = e.substr(pos + 1);
    }
    return map;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class ManifestScope {
public:
    ManifestScope(std::string subcommand, std::uint64_t seed)
        : start_(std::chrono::steady_clock::now()) {
        manifest_.subcommand = std::move(subcommand);
        manifest_.seed = seed;
        manifest_.created_utc = utc_now();
    }
    void input(const std::string& path) { manifest_.inputs.push_back(path); }
    void output(const std::string& path) { manifest_.outputs.push_back(path); }
    void config(const std::string& key, const std::string& value) { manifest_.config[key] = value; }

    ~ManifestScope() {
        if (manifest_.outputs.empty() || std::uncaught_exceptions() > 0) return;
        manifest_.duration_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        try {
            sm::write_manifest(manifest_, manifest_.outputs.front());
        } catch (...) {
        }
    }

private:
    sm::RunManifest manifest_;
    std::chrono::steady_clock::time_point start_;
};

sm::Dataset load_or_die(const CommonOpts& opts, bool print_warnings = true) {
    const auto result =
        sm::load_database(opts.input, parse_column_map(opts.column_map_entries), opts.delim);
    if (print_warnings) {
        for (const auto& r : result.report.rejected) fmt::print(stderr, "rejected: {}\n", r);
        if (!result.report.warnings.empty())
            fmt::print(stderr, "({} range warnings)\n", result.report.warnings.size());
    }
    return result.dataset;
}

sm::Dataset select_partition(const sm::Dataset& data, const std::string& partition) {
    if (partition == "all") return data;
    const auto parts = sm::partition_by_horizon(data);
    if (partition == "intra-hour") return parts.intra_hour;
    if (partition == "intra-day") return parts.intra_day;
    if (partition == "day-ahead") return parts.day_ahead;
    throw CLI::ValidationError("--partition", "unknown partition " + partition);
}

sm::SolarSeries load_series(const std::string& path, char delim) {
    const sm::CsvTable table = sm::read_delimited(path, delim);
    sm::SolarSeries series;
    // columns: timestamp, value[, clear_sky]; a non-numeric first data cell
    // would have been consumed as the header already
    if (table.header.size() < 2)
        throw std::runtime_error(fmt::format("{}: expected timestamp,value[,clear_sky]", path));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (row.size() < table.header.size())
            throw std::runtime_error(fmt::format("{}: short row at line {}", path, i + 2));
        series.values.push_back(std::stod(row[1]));
        if (table.header.size() >= 3) series.clear_sky.push_back(std::stod(row[2]));
    }
    if (series.values.empty()) throw std::runtime_error(fmt::format("{}: no data rows", path));
    return series;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"solar forecast skill scores and meta-regression over the skill-score database"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input)
            cmd->add_option("--input", opts.input, "database file")->required();
        cmd->add_option("--out", opts.out, "output file path");
        cmd->add_option("--delim", opts.delim, "field delimiter");
        cmd->add_option("--precision", opts.precision, "significant digits for printed numbers");
        cmd->add_option("--seed", opts.seed, "seed for any randomized step");
        cmd->add_option("--map", opts.column_map_entries,
                        "column mapping CANONICAL=HEADER (repeatable)");
    };

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate a database file and emit a normalized copy");
    add_common(ingest);

    // summary
    auto* summary = app.add_subcommand("summary", "descriptive statistics of one or all variables");
    std::string var = "SS";
    bool all_vars = false;
    add_common(summary);
    summary->add_option("--var", var, "variable name");
    summary->add_flag("--all", all_vars, "summarize every numeric and dummy variable");

    // ols
    auto* ols_cmd = app.add_subcommand("ols", "linear regression per horizon class");
    std::string partition = "all";
    add_common(ols_cmd);
    ols_cmd->add_option("--partition", partition,
                        "intra-hour | intra-day | day-ahead | all (all = the three fits)");

    // mars
    auto* mars_cmd = app.add_subcommand("mars", "fit the hinge-regression model");
    sm::MarsConfig mars_cfg;
    add_common(mars_cmd);
    mars_cmd->add_option("--max-degree", mars_cfg.max_degree, "interaction degree cap (1 or 2)");
    mars_cmd->add_option("--max-terms", mars_cfg.max_terms, "forward-pass term cap");
    mars_cmd->add_option("--min-gain", mars_cfg.min_rsq_gain, "minimum R2 gain per step");
    mars_cmd->add_option("--penalty", mars_cfg.gcv_penalty_per_knot,
                         "GCV penalty per knot (default 3 for degree 2, else 2)");

    // pdp
    auto* pdp_cmd = app.add_subcommand("pdp", "partial dependence of a fitted model");
    std::vector<std::string> features;
    std::string pdp_model = "mars";
    add_common(pdp_cmd);
    pdp_cmd->add_option("--feature", features, "feature name (repeat for a 2-feature grid)")
        ->required()
        ->expected(1, 2);
    pdp_cmd->add_option("--model", pdp_model, "mars | ols");
    pdp_cmd->add_option("--max-degree", mars_cfg.max_degree, "interaction degree cap");
    pdp_cmd->add_option("--max-terms", mars_cfg.max_terms, "forward-pass term cap");

    // cv
    auto* cv_cmd = app.add_subcommand("cv", "cross-validated grid search over max_terms and degree");
    add_common(cv_cmd);
    cv_cmd->add_option("--cv-folds", mars_cfg.cv_folds, "number of folds");

    // ss
    auto* ss_cmd = app.add_subcommand("ss", "skill score of a forecast series against a reference");
    std::string series_path, forecast_path, reference = "persistence";
    std::size_t h = 1;
    std::optional<double> alpha;
    double alpha_raw = -1;
    ss_cmd->set_help_flag("--help", "print help");  // frees -h for the horizon flag
    ss_cmd->add_option("--series", series_path, "actuals: timestamp,value[,clear_sky]")->required();
    ss_cmd->add_option("--forecast", forecast_path, "forecast series: timestamp,value")->required();
    ss_cmd->add_option("--reference", reference, "persistence | sp | cp | climatology");
    ss_cmd->add_option("--h,-h", h, "forecast horizon in steps");
    ss_cmd->add_option("--alpha", alpha_raw, "CP mixing weight (default: optimized on the series)");
    ss_cmd->add_option("--out", opts.out, "output file path");
    ss_cmd->add_option("--delim", opts.delim, "field delimiter");
    ss_cmd->add_option("--precision", opts.precision, "significant digits for printed numbers");

    CLI11_PARSE(app, argc, argv);

    mars_cfg.rng_seed = opts.seed;

    if (*ingest) {
        ManifestScope manifest("ingest", opts.seed);
        manifest.input(opts.input);
        const auto result =
            sm::load_database(opts.input, parse_column_map(opts.column_map_entries), opts.delim);
        for (const auto& r : result.report.rejected) fmt::print(stderr, "rejected: {}\n", r);
        for (const auto& w : result.report.warnings) fmt::print(stderr, "warning: {}\n", w);
        fmt::print("rows: {}\nrejected: {}\nwarnings: {}\n", result.dataset.row_count(),
                   result.report.rejected.size(), result.report.warnings.size());
        if (!opts.out.empty()) {
            sm::write_database(opts.out, result.dataset, opts.delim);
            manifest.output(opts.out);
        }
        return 0;
    }

    if (*summary) {
        ManifestScope manifest("summary", opts.seed);
        manifest.input(opts.input);
        const auto data = load_or_die(opts);
        std::string text = sm::format_summary_header();
        if (all_vars) {
            for (const auto& name : sm::summarizable_variables())
                text += sm::format_summary_row(name, sm::summarize(data, name));
        } else {
            text += sm::format_summary_row(var, sm::summarize(data, var));
        }
        fmt::print("{}", text);
        if (!opts.out.empty()) {
            sm::write_text_atomic(opts.out, text);
            manifest.output(opts.out);
            manifest.config("var", all_vars ? "all" : var);
        }
        return 0;
    }

    if (*ols_cmd) {
        ManifestScope manifest("ols", opts.seed);
        manifest.input(opts.input);
        manifest.config("partition", partition);
        const auto data = load_or_die(opts);
        std::string text;
        if (partition == "all") {
            const auto fits = sm::run_horizon_regressions(data);
            text += sm::format_regression_table(fits.intra_hour, "(1) intra-hour");
            text += "\n";
            text += sm::format_regression_table(fits.intra_day, "(2) intra-day");
            text += "\n";
            text += sm::format_regression_table(fits.day_ahead, "(3) day-ahead");
        } else {
            const auto part = select_partition(data, partition);
            if (part.records.empty()) throw std::runtime_error("empty partition: " + partition);
            text = sm::format_regression_table(sm::ols_fit(sm::build_design_matrix(part)),
                                               "(" + partition + ")");
        }
        fmt::print("{}", text);
        if (!opts.out.empty()) {
            sm::write_text_atomic(opts.out, text);
            manifest.output(opts.out);
        }
        return 0;
    }

    if (*mars_cmd) {
        ManifestScope manifest("mars", opts.seed);
        manifest.input(opts.input);
        manifest.config("max_degree", std::to_string(mars_cfg.max_degree));
        manifest.config("max_terms", std::to_string(mars_cfg.max_terms));
        const auto data = load_or_die(opts);
        const auto matrix = sm::build_design_matrix(data);
        const auto model = sm::fit_mars(matrix, mars_cfg);
        const std::string text = sm::format_model(model);
        fmt::print("{}", text);
        if (!opts.out.empty()) {
            sm::write_text_atomic(opts.out, text);
            manifest.output(opts.out);
        }
        return 0;
    }

    if (*pdp_cmd) {
        ManifestScope manifest("pdp", opts.seed);
        manifest.input(opts.input);
        manifest.config("model", pdp_model);
        for (const auto& f : features) manifest.config("feature", f);
        const auto data = load_or_die(opts);
        const auto matrix = sm::build_design_matrix(data);

        sm::PdpGrid grid;
        if (pdp_model == "mars") {
            const auto model = sm::fit_mars(matrix, mars_cfg);
            grid = sm::partial_dependence(model, matrix, features);
        } else if (pdp_model == "ols") {
            const auto fit = sm::ols_fit(matrix);
            const auto kept = sm::drop_degenerate_columns(matrix);
            sm::RowPredictor predictor = [&fit, &kept](const Eigen::MatrixXd& rows,
                                                       const std::vector<std::string>& names) {
                Eigen::VectorXd out = Eigen::VectorXd::Constant(
                    rows.rows(), fit.coefficient_names.back() == "Constant"
                                     ? fit.coefficients(fit.coefficients.size() - 1)
                                     : 0.0);
                for (std::size_t j = 0; j + 1 < fit.coefficient_names.size(); ++j) {
                    const auto it =
                        std::find(names.begin(), names.end(), fit.coefficient_names[j]);
                    if (it == names.end())
                        throw std::runtime_error("missing regressor " + fit.coefficient_names[j]);
                    out += fit.coefficients(static_cast<Eigen::Index>(j)) *
                           rows.col(it - names.begin());
                }
                return out;
            };
            grid = sm::partial_dependence(predictor, matrix.X, matrix.column_names,
                                          matrix.is_dummy, features);
            (void)kept;
        } else {
            throw CLI::ValidationError("--model", "expected mars or ols");
        }

        const std::string text = sm::format_pdp(grid, opts.delim);
        if (!opts.out.empty()) {
            sm::write_text_atomic(opts.out, text);
            manifest.output(opts.out);
            const std::string svg = features.size() == 1 ? sm::render_pdp_line_svg(grid)
                                                         : sm::render_pdp_heatmap_svg(grid);
            sm::write_text_atomic(opts.out + ".svg", svg);
            manifest.output(opts.out + ".svg");
        } else {
            fmt::print("{}", text);
        }
        return 0;
    }

    if (*cv_cmd) {
        ManifestScope manifest("cv", opts.seed);
        manifest.input(opts.input);
        manifest.config("cv_folds", std::to_string(mars_cfg.cv_folds));
        const auto data = load_or_die(opts);
        const auto matrix = sm::build_design_matrix(data);
        const auto result = sm::cross_validate(matrix, sm::default_cv_grid(mars_cfg));
        std::string text = fmt::format("{:<10} {:<10} {:<12}\n", "degree", "max_terms", "cv_rmse");
        for (const auto& e : result.table)
            text += fmt::format("{:<10} {:<10} {:<12.{}g}\n", e.config.max_degree,
                                e.config.max_terms, e.mean_rmse, opts.precision);
        text += fmt::format("best: degree={} max_terms={}\n", result.best.max_degree,
                            result.best.max_terms);
        fmt::print("{}", text);
        if (!opts.out.empty()) {
            sm::write_text_atomic(opts.out, text);
            manifest.output(opts.out);
        }
        return 0;
    }

    if (*ss_cmd) {
        ManifestScope manifest("ss", opts.seed);
        manifest.input(series_path);
        manifest.input(forecast_path);
        manifest.config("reference", reference);
        manifest.config("h", std::to_string(h));
        if (ss_cmd->count("--alpha")) alpha = alpha_raw;

        const auto series = load_series(series_path, opts.delim);
        const auto forecast_series = load_series(forecast_path, opts.delim);

        sm::ReferenceKind kind;
        if (reference == "persistence") kind = sm::ReferenceKind::Persistence;
        else if (reference == "sp") kind = sm::ReferenceKind::SP;
        else if (reference == "cp") kind = sm::ReferenceKind::CP;
        else if (reference == "climatology") kind = sm::ReferenceKind::Climatology;
        else throw CLI::ValidationError("--reference", "expected persistence, sp, cp, or climatology");

        const auto result = sm::score_forecast(series, forecast_series.values, kind, h, alpha);
        std::string text;
        text += fmt::format("reference: {}\n", sm::to_string(result.reference_kind));
        text += fmt::format("h_steps: {}\n", result.horizon_steps);
        if (result.alpha) text += fmt::format("alpha: {:.6f}\n", *result.alpha);
        text += fmt::format("scored_points: {}\n", result.scored_points);
        if (result.excluded_points)
            text += fmt::format("excluded_points: {}\n", result.excluded_points);
        text += fmt::format("rmse_forecast: {:.{}g}\n", result.rmse_forecast, opts.precision);
        text += fmt::format("rmse_reference: {:.{}g}\n", result.rmse_reference, opts.precision);
        text += fmt::format("skill_score_pct: {:.{}g}\n", result.ss_pct, opts.precision);
        fmt::print("{}", text);
        if (!opts.out.empty()) {
            sm::write_text_atomic(opts.out, text);
            manifest.output(opts.out);
        }
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
}
