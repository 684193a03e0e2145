// Acceptance suite: exercises every headline requirement against the bundled
// reference database and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "skillmeta/dataset.hpp"
#include "skillmeta/design.hpp"
#include "skillmeta/mars.hpp"
#include "skillmeta/ols.hpp"
#include "skillmeta/pdp.hpp"
#include "skillmeta/skill.hpp"

using namespace skillmeta;
namespace fs = std::filesystem;

namespace {

struct Args {
    std::string data;
    std::string cli;
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// printed summary table: variable -> n, mean, sd, median, min, max, range, se
struct SummaryRow {
    double mean, sd, median, min, max, range, se;
};
const std::map<std::string, SummaryRow> kSummaryTable = {
    {"Horizon", {497.95, 823.80, 120, 0.17, 4320.00, 4319.83, 12.03}},
    {"InputHist", {0.91, 0.29, 1, 0.00, 1.00, 1.00, 0.00}},
    {"InputMete", {0.53, 0.50, 1, 0.00, 1.00, 1.00, 0.01}},
    {"InputNWP", {0.19, 0.39, 0.00, 0.00, 1.00, 1.00, 0.01}},
    {"InputST", {0.23, 0.42, 0, 0.00, 1.00, 1.00, 0.01}},
    {"ResMin", {52.39, 50.63, 60, 0.02, 360.00, 359.98, 0.74}},
    {"SS", {23.90, 21.09, 21.45, -94.61, 96.10, 190.71, 0.31}},
    {"TestLength", {303.51, 195.55, 350, 1.00, 1460.00, 1459.00, 2.86}},
    {"TrainLength", {798.22, 1114.54, 396, 0.00, 7305.00, 7305.00, 16.28}},
    {"Year", {2018.19, 2.25, 2018, 2006.00, 2022.00, 16.00, 0.03}},
};

// published regression table: coefficient and star level per partition
// (stars: 3 = p<0.01, 2 = p<0.05, 1 = p<0.1, 0 = none; absent = blank cell)
struct Printed {
    double coef;
    int stars;
};
using PrintedColumn = std::map<std::string, Printed>;

const PrintedColumn kIntraHour = {
    {"CZA", {5.013, 3}}, {"CZB", {3.783, 3}}, {"CZD", {7.984, 3}},
    {"CZE", {-19.940, 3}}, {"CZN", {0.322, 0}}, {"Horizon", {0.334, 3}},
    {"InputHist", {5.672, 2}}, {"InputMete", {-0.441, 0}}, {"InputNWP", {-9.037, 3}},
    {"InputST", {3.598, 2}}, {"ModClassEns", {0.088, 0}}, {"ModClassEns_Hyb", {12.837, 3}},
    {"ModClassHybrid", {8.605, 3}}, {"ModClassImageBased", {1.164, 0}},
    {"ModClassML", {-3.134, 1}}, {"ModClassNWP", {-13.938, 0}}, {"ModClassReg", {-11.048, 3}},
    {"ReferencePersistence", {15.936, 3}}, {"ReferenceSP", {10.731, 3}},
    {"ResMin", {0.020, 0}}, {"TestLength", {-0.011, 3}}, {"TrainLength", {-0.001, 3}},
    {"TypeSources", {2.177, 0}}, {"Year", {1.795, 3}}, {"Constant", {-3637.375, 3}},
};
const PrintedColumn kIntraDay = {
    {"CZA", {6.553, 3}}, {"CZB", {2.058, 2}}, {"CZD", {-2.599, 0}},
    {"CZN", {7.339, 3}}, {"Horizon", {0.060, 3}}, {"InputHist", {8.194, 3}},
    {"InputMete", {9.084, 3}}, {"InputNWP", {-2.284, 1}}, {"InputST", {3.941, 3}},
    {"ModClassEns", {-6.951, 3}}, {"ModClassEns_Hyb", {21.213, 3}},
    {"ModClassHybrid", {-19.317, 3}}, {"ModClassImageBased", {10.292, 3}},
    {"ModClassML", {-0.117, 0}}, {"ModClassNWP", {-17.391, 2}}, {"ModClassReg", {-5.267, 3}},
    {"ReferencePersistence", {51.517, 3}}, {"ReferenceSP", {27.267, 3}},
    {"ResMin", {0.056, 3}}, {"TestLength", {-0.008, 3}}, {"TrainLength", {0.002, 3}},
    {"TypeSources", {-17.178, 3}}, {"Year", {1.493, 3}}, {"Constant", {-3031.775, 3}},
};
const PrintedColumn kDayAhead = {
    {"CZA", {5.988, 2}}, {"CZB", {2.722, 1}}, {"CZD", {1.638, 0}},
    {"CZE", {-8.358, 2}}, {"CZN", {7.052, 1}}, {"Horizon", {-0.004, 3}},
    {"InputHist", {-6.426, 3}}, {"InputMete", {5.055, 3}}, {"InputNWP", {11.575, 3}},
    {"InputST", {-5.511, 3}}, {"ModClassEns", {8.327, 3}}, {"ModClassEns_Hyb", {7.034, 3}},
    {"ModClassHybrid", {-11.311, 3}}, {"ModClassImageBased", {-0.212, 0}},
    {"ModClassML", {-1.195, 0}}, {"ModClassNWP", {-14.262, 3}}, {"ModClassReg", {-0.555, 0}},
    {"ReferencePersistence", {10.677, 3}}, {"ReferenceSP", {9.026, 3}},
    {"ResMin", {0.009, 0}}, {"TestLength", {0.018, 3}}, {"TrainLength", {0.004, 3}},
    {"TypeSources", {5.055, 3}}, {"Year", {1.160, 3}}, {"Constant", {-2322.335, 3}},
};

int star_level(double p) {
    if (p < 0.01) return 3;
    if (p < 0.05) return 2;
    if (p < 0.1) return 1;
    return 0;
}

const Dataset& database(const Args& args) {
    static Dataset cached;
    if (cached.records.empty()) cached = load_database(args.data).dataset;
    return cached;
}

// ---------------------------------------------------------------------------
// criterion 1: ingestion speed and the printed summary cells
// ---------------------------------------------------------------------------
void criterion_ingestion(const Args& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = load_database(args.data);
    const double elapsed = seconds_since(t0);
    expect(elapsed < 5.0, fmt::format("load took {:.2f}s", elapsed));
    expect(result.dataset.row_count() == 4687,
           fmt::format("row count {}", result.dataset.row_count()));

    for (const auto& [name, row] : kSummaryTable) {
        const auto s = summarize(result.dataset, name);
        const double tol = 0.005 + 1e-9;
        expect(s.n == 4687, name + " n");
        expect(std::abs(s.mean - row.mean) <= tol,
               fmt::format("{} mean {:.4f} vs {}", name, s.mean, row.mean));
        expect(std::abs(s.sd - row.sd) <= tol,
               fmt::format("{} sd {:.4f} vs {}", name, s.sd, row.sd));
        expect(std::abs(s.median - row.median) <= tol,
               fmt::format("{} median {} vs {}", name, s.median, row.median));
        expect(std::abs(s.min - row.min) <= tol,
               fmt::format("{} min {} vs {}", name, s.min, row.min));
        expect(std::abs(s.max - row.max) <= tol,
               fmt::format("{} max {} vs {}", name, s.max, row.max));
        expect(std::abs(s.range - row.range) <= tol,
               fmt::format("{} range {} vs {}", name, s.range, row.range));
        expect(std::abs(s.se - row.se) <= tol,
               fmt::format("{} se {:.4f} vs {}", name, s.se, row.se));
    }
}

// ---------------------------------------------------------------------------
// criterion 2: horizon partition sizes
// ---------------------------------------------------------------------------
void criterion_partition(const Args& args) {
    const auto parts = partition_by_horizon(database(args));
    expect(parts.intra_hour.row_count() == 2116,
           fmt::format("intra-hour {}", parts.intra_hour.row_count()));
    expect(parts.intra_day.row_count() == 1555,
           fmt::format("intra-day {}", parts.intra_day.row_count()));
    expect(parts.day_ahead.row_count() == 1016,
           fmt::format("day-ahead {}", parts.day_ahead.row_count()));
    expect(parts.intra_hour.row_count() + parts.intra_day.row_count() +
                   parts.day_ahead.row_count() == 4687, "sum");
}

// ---------------------------------------------------------------------------
// criterion 3: the three published regressions
// ---------------------------------------------------------------------------
void criterion_ols(const Args& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto fits = run_horizon_regressions(database(args));
    const double elapsed = seconds_since(t0);
    expect(elapsed < 10.0, fmt::format("regressions took {:.2f}s", elapsed));

    struct Case {
        const OlsFit* fit;
        const PrintedColumn* printed;
        double horizon_coef, r2;
        const char* label;
    };
    const Case cases[] = {
        {&fits.intra_hour, &kIntraHour, 0.334, 0.213, "intra-hour"},
        {&fits.intra_day, &kIntraDay, 0.060, 0.513, "intra-day"},
        {&fits.day_ahead, &kDayAhead, -0.004, 0.456, "day-ahead"},
    };

    std::size_t agree = 0, total = 0;
    for (const auto& c : cases) {
        std::map<std::string, std::size_t> index;
        for (std::size_t j = 0; j < c.fit->coefficient_names.size(); ++j)
            index[c.fit->coefficient_names[j]] = j;

        const double h = c.fit->coefficients(static_cast<Eigen::Index>(index.at("Horizon")));
        expect(std::abs(h - c.horizon_coef) <= 0.005,
               fmt::format("{} Horizon {:.4f} vs {}", c.label, h, c.horizon_coef));
        expect(std::abs(c.fit->r_squared - c.r2) <= 0.01,
               fmt::format("{} R2 {:.4f} vs {}", c.label, c.fit->r_squared, c.r2));

        for (const auto& [name, printed] : *c.printed) {
            ++total;
            auto it = index.find(name);
            if (it == index.end()) continue;  // printed but dropped here: disagree
            const auto j = static_cast<Eigen::Index>(it->second);
            const bool sign_ok = printed.coef == 0 ||
                                 (c.fit->coefficients(j) > 0) == (printed.coef > 0);
            const bool stars_ok = star_level(c.fit->p_values(j)) == printed.stars;
            if (sign_ok && stars_ok) ++agree;
        }
        // the blank intra-day CZE cell must correspond to a dropped column
        if (c.printed == &kIntraDay) {
            ++total;
            bool cze_dropped = false;
            for (const auto& d : c.fit->dropped_columns)
                if (d.name == "CZE") cze_dropped = true;
            expect(index.find("CZE") == index.end(), "intra-day CZE should be dropped");
            if (cze_dropped) ++agree;
        }
    }
    const double share = static_cast<double>(agree) / static_cast<double>(total);
    expect(share >= 0.90, fmt::format("sign+star agreement {}/{} = {:.3f}", agree, total, share));

    const double h_se =
        fits.intra_hour.standard_errors(static_cast<Eigen::Index>(5));  // Horizon column
    expect(h_se > 0.02 && h_se < 0.09, fmt::format("intra-hour Horizon SE {:.4f}", h_se));
}

// ---------------------------------------------------------------------------
// criterion 4: the interaction-spline fit on the full database
// ---------------------------------------------------------------------------
void criterion_mars_fit(const Args& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto matrix = build_design_matrix(database(args));
    MarsConfig cfg;  // defaults: degree 2, 34 terms
    const auto model = fit_mars(matrix, cfg);
    const double elapsed = seconds_since(t0);
    expect(elapsed < 300.0, fmt::format("fit took {:.1f}s", elapsed));

    expect(model.grsq >= 0.40, fmt::format("grsq {:.4f}", model.grsq));
    expect(model.rsq >= 0.42, fmt::format("rsq {:.4f}", model.rsq));

    auto mentions_horizon = [](const BasisTerm& t) {
        for (const auto& f : t.factors)
            if (f.variable == "Horizon") return true;
        return false;
    };
    int horizon_terms = 0, interactions = 0, horizon_interactions = 0;
    for (const auto& t : model.terms) {
        if (mentions_horizon(t)) ++horizon_terms;
        if (t.degree() >= 2) {
            ++interactions;
            if (mentions_horizon(t)) ++horizon_interactions;
        }
    }
    expect(horizon_terms > 0, "Horizon not selected");
    expect(interactions > 0, "no interaction terms");
    expect(horizon_interactions * 3 >= interactions,
           fmt::format("{}/{} interactions involve Horizon", horizon_interactions, interactions));
}

// ---------------------------------------------------------------------------
// criterion 5: spline-recovery oracle and exhaustive-pruning oracle
// ---------------------------------------------------------------------------
DesignMatrix synthetic_matrix(const std::vector<Eigen::VectorXd>& xs, const Eigen::VectorXd& y) {
    DesignMatrix m;
    m.y = y;
    m.X.resize(y.size(), static_cast<Eigen::Index>(xs.size()));
    for (std::size_t j = 0; j < xs.size(); ++j) {
        m.X.col(static_cast<Eigen::Index>(j)) = xs[j];
        m.column_names.push_back("x" + std::to_string(j + 1));
        m.is_dummy.push_back(false);
    }
    return m;
}

void check_knot_recovery(const MarsModel& model, const std::string& var, double knot,
                         double spacing) {
    double best = 1e300;
    for (const auto& t : model.terms)
        for (const auto& f : t.factors)
            if (f.variable == var && f.kind != FactorKind::Indicator)
                best = std::min(best, std::abs(f.knot - knot));
    expect(best <= spacing + 1e-12,
           fmt::format("knot {} on {} missed by {}", knot, var, best));
}

void criterion_mars_oracle(const Args&) {
    const int n = 201;
    const double spacing = 10.0 / (n - 1);
    // every variable covers the whole lattice (shuffled), so the candidate
    // knots near the planted ones are exactly one grid step apart
    std::vector<Eigen::VectorXd> xs(3, Eigen::VectorXd(n));
    std::mt19937 rng(99);
    for (int v = 0; v < 3; ++v) {
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        if (v > 0) std::shuffle(idx.begin(), idx.end(), rng);
        for (int i = 0; i < n; ++i) xs[v](i) = -5 + spacing * idx[i];
    }

    auto hp = [](double x, double t) { return std::max(x - t, 0.0); };
    auto hm = [](double x, double t) { return std::max(t - x, 0.0); };

    // additive: three planted hinges, noise free
    Eigen::VectorXd y1(n);
    for (int i = 0; i < n; ++i)
        y1(i) = 2 * hp(xs[0](i), 1.0) - 1.5 * hm(xs[1](i), -2.0) + 0.8 * hp(xs[2](i), 3.0);
    MarsConfig cfg;
    cfg.max_degree = 1;
    cfg.max_terms = 12;
    cfg.min_rsq_gain = 1e-6;
    auto m1 = fit_mars(synthetic_matrix(xs, y1), cfg);
    expect(m1.rsq >= 0.999, fmt::format("additive rsq {:.5f}", m1.rsq));
    check_knot_recovery(m1, "x1", 1.0, spacing);
    check_knot_recovery(m1, "x2", -2.0, spacing);
    check_knot_recovery(m1, "x3", 3.0, spacing);

    // with one degree-2 interaction
    Eigen::VectorXd y2(n);
    for (int i = 0; i < n; ++i)
        y2(i) = 2 * hp(xs[0](i), 1.0) + hp(xs[1](i), 0.0) * hm(xs[2](i), 2.0);
    MarsConfig cfg2 = cfg;
    cfg2.max_degree = 2;
    auto m2 = fit_mars(synthetic_matrix(xs, y2), cfg2);
    expect(m2.rsq >= 0.999, fmt::format("interaction rsq {:.5f}", m2.rsq));
    check_knot_recovery(m2, "x1", 1.0, spacing);
    check_knot_recovery(m2, "x2", 0.0, spacing);
    check_knot_recovery(m2, "x3", 2.0, spacing);

    // pruning equals exhaustive GCV minimization on a small instance
    std::normal_distribution<double> gauss;
    Eigen::VectorXd y3(n);
    for (int i = 0; i < n; ++i)
        y3(i) = 2 * hp(xs[0](i), 1.0) - hm(xs[1](i), 0.0) + 0.05 * gauss(rng);
    MarsConfig cfg3;
    cfg3.max_degree = 1;
    cfg3.max_terms = 10;
    cfg3.min_rsq_gain = 1e-5;
    const auto mat3 = synthetic_matrix(xs, y3);
    const auto unpruned = forward_pass(mat3, cfg3);
    expect(unpruned.terms.size() >= 3 && unpruned.terms.size() <= 10,
           fmt::format("{} forward terms", unpruned.terms.size()));
    const auto pruned = backward_prune(unpruned, mat3);

    const std::size_t M = unpruned.terms.size();
    double best_gcv = 1e300;
    std::size_t best_size = 0;
    const double penalty = cfg3.knot_penalty();
    for (std::size_t mask = 0; mask < (1u << M); ++mask) {
        std::vector<BasisTerm> subset;
        for (std::size_t k = 0; k < M; ++k)
            if (mask & (1u << k)) subset.push_back(unpruned.terms[k]);
        // independent GCV: plain normal-equations refit of the subset
        Eigen::MatrixXd B(n, static_cast<Eigen::Index>(subset.size()) + 1);
        B.col(0).setOnes();
        for (std::size_t k = 0; k < subset.size(); ++k)
            for (int i = 0; i < n; ++i)
                B(i, static_cast<Eigen::Index>(k) + 1) =
                    eval_term(subset[k], mat3.X.row(i), mat3.column_names);
        const Eigen::VectorXd beta = (B.transpose() * B).ldlt().solve(B.transpose() * y3);
        const double rss = (y3 - B * beta).squaredNorm();
        std::set<std::pair<std::string, double>> knots;
        for (const auto& t : subset)
            for (const auto& f : t.factors) knots.insert({f.variable, f.knot});
        const double c = 1.0 + static_cast<double>(subset.size()) +
                         penalty * static_cast<double>(knots.size());
        if (c >= n) continue;
        const double gcv = (rss / n) / std::pow(1.0 - c / n, 2);
        if (gcv < best_gcv - 1e-12 ||
            (std::abs(gcv - best_gcv) <= 1e-12 && subset.size() < best_size)) {
            best_gcv = gcv;
            best_size = subset.size();
        }
    }
    expect(std::abs(pruned.gcv - best_gcv) <= 1e-9 * std::max(best_gcv, 1.0),
           fmt::format("prune gcv {} vs exhaustive {}", pruned.gcv, best_gcv));
    expect(pruned.terms.size() == best_size,
           fmt::format("prune size {} vs exhaustive {}", pruned.terms.size(), best_size));
}

// ---------------------------------------------------------------------------
// criterion 6: partial dependence correctness
// ---------------------------------------------------------------------------
void criterion_pdp(const Args& args) {
    const auto matrix = build_design_matrix(database(args));
    const auto kept = drop_degenerate_columns(matrix);
    const auto fit = ols_fit(matrix);

    RowPredictor linear = [&](const Eigen::MatrixXd& rows, const std::vector<std::string>& names) {
        Eigen::VectorXd out = Eigen::VectorXd::Constant(
            rows.rows(), fit.coefficients(fit.coefficients.size() - 1));
        for (std::size_t j = 0; j + 1 < fit.coefficient_names.size(); ++j) {
            const auto it = std::find(names.begin(), names.end(), fit.coefficient_names[j]);
            expect(it != names.end(), "missing regressor " + fit.coefficient_names[j]);
            out += fit.coefficients(static_cast<Eigen::Index>(j)) * rows.col(it - names.begin());
        }
        return out;
    };

    for (std::size_t j = 0; j + 1 < fit.coefficient_names.size(); ++j) {
        const std::string& name = fit.coefficient_names[j];
        const auto grid = partial_dependence(linear, kept.X, kept.column_names, kept.is_dummy,
                                             {name});
        const double slope = fit.coefficients(static_cast<Eigen::Index>(j));
        for (std::size_t i = 1; i < grid.grid_values.size(); ++i) {
            const double dx = grid.grid_values[i][0] - grid.grid_values[i - 1][0];
            const double dy = grid.averaged_predictions[i] - grid.averaged_predictions[i - 1];
            expect(std::abs(dy / dx - slope) <= 1e-9 * std::max(1.0, std::abs(slope)) + 1e-9,
                   fmt::format("{} pdp slope {} vs coef {}", name, dy / dx, slope));
        }
    }

    // shape of the spline fit's horizon profile
    MarsConfig cfg;
    const auto model = fit_mars(matrix, cfg);
    const auto grid = partial_dependence(model, matrix, {"Horizon"});
    for (std::size_t i = 1; i < grid.grid_values.size(); ++i) {
        const double x0 = grid.grid_values[i - 1][0];
        const double x1 = grid.grid_values[i][0];
        const double dy = grid.averaged_predictions[i] - grid.averaged_predictions[i - 1];
        if (x1 <= 300.0)
            expect(dy > 0, fmt::format("pdp not rising on [{}, {}]", x0, x1));
        if (x0 >= 400.0 && x1 <= 1440.0)
            expect(dy < 0, fmt::format("pdp not falling on [{}, {}]", x0, x1));
    }
}

// ---------------------------------------------------------------------------
// criterion 7: skill metrics against a direct-formula oracle
// ---------------------------------------------------------------------------
void criterion_skill(const Args&) {
    std::mt19937 rng(20220101);
    std::uniform_real_distribution<double> u01(0, 1);
    std::uniform_int_distribution<int> len_dist(50, 500);
    const std::size_t horizons[] = {1, 2, 4};

    for (int trial = 0; trial < 100; ++trial) {
        const int n = len_dist(rng);
        const std::size_t h = horizons[trial % 3];
        SolarSeries s;
        s.step_minutes = 15;
        for (int i = 0; i < n; ++i) {
            const double ics = 2.0 + std::fabs(std::sin(0.11 * i)) * 6.0 + u01(rng);
            s.clear_sky.push_back(ics);
            s.values.push_back(ics * (0.2 + 0.75 * u01(rng)));
        }
        std::vector<double> forecast;
        for (int i = 0; i < n; ++i)
            forecast.push_back(std::max(0.0, s.values[static_cast<std::size_t>(i)] +
                                                 0.4 * (u01(rng) - 0.5)));

        // direct-formula oracles
        std::vector<double> oracle_p, oracle_sp, oracle_cp;
        double mean = 0;
        for (double v : s.values) mean += v;
        mean /= n;
        const double alpha = 0.37;
        for (std::size_t i = h; i < s.values.size(); ++i) {
            oracle_p.push_back(s.values[i - h]);
            const double sp = s.values[i - h] * s.clear_sky[i] / s.clear_sky[i - h];
            oracle_sp.push_back(sp);
            oracle_cp.push_back(alpha * sp + (1 - alpha) * mean);
        }

        const auto p = persistence_forecast(s, h);
        const auto sp = smart_persistence_forecast(s, h);
        const auto cp = cp_forecast(s, h, alpha);
        const auto clim = climatology_forecast(s);
        expect(p.first_forecast_index == h, "persistence start");
        for (std::size_t k = 0; k < oracle_p.size(); ++k) {
            expect(std::abs(p.values[k] - oracle_p[k]) <= 1e-12, "persistence oracle");
            expect(std::abs(sp.values[k] - oracle_sp[k]) <= 1e-12, "sp oracle");
            expect(std::abs(cp.values[k] - oracle_cp[k]) <= 1e-12, "cp oracle");
        }
        for (double v : clim.values) expect(std::abs(v - mean) <= 1e-12, "climatology oracle");

        // skill scores against the oracle arithmetic
        const auto scored = score_forecast(s, forecast, ReferenceKind::SP, h);
        double a_f = 0, a_r = 0;
        for (std::size_t k = 0; k < oracle_sp.size(); ++k) {
            const double df = s.values[k + h] - forecast[k + h];
            const double dr = s.values[k + h] - oracle_sp[k];
            a_f += df * df;
            a_r += dr * dr;
        }
        a_f = std::sqrt(a_f / static_cast<double>(oracle_sp.size()));
        a_r = std::sqrt(a_r / static_cast<double>(oracle_sp.size()));
        expect(std::abs(scored.rmse_forecast - a_f) <= 1e-12, "A_f oracle");
        expect(std::abs(scored.rmse_reference - a_r) <= 1e-12, "A_r oracle");
        expect(std::abs(scored.ss_pct - 100.0 * (1.0 - a_f / a_r)) <= 1e-10, "SS oracle");

        // exact identities
        SolarSeries flat = s;
        flat.clear_sky.assign(s.values.size(), 7.5);
        const auto p2 = persistence_forecast(flat, h);
        const auto sp2 = smart_persistence_forecast(flat, h);
        for (std::size_t k = 0; k < p2.values.size(); ++k)
            expect(sp2.values[k] == p2.values[k], "SP == persistence under constant clear-sky");

        const auto cp1 = cp_forecast(s, h, 1.0);
        const auto cp0 = cp_forecast(s, h, 0.0);
        for (std::size_t k = 0; k < cp1.values.size(); ++k) {
            expect(cp1.values[k] == sp.values[k], "CP(1) == SP");
            expect(cp0.values[k] == clim.values[k + h], "CP(0) == climatology");
        }

        const auto perfect = score_forecast(s, s.values, ReferenceKind::Persistence, h);
        expect(perfect.ss_pct == 100.0, "perfect forecast SS");
        std::vector<double> ref_as_forecast(s.values.size(), 0.0);
        for (std::size_t i = h; i < s.values.size(); ++i) ref_as_forecast[i] = s.values[i - h];
        const auto zero = score_forecast(s, ref_as_forecast, ReferenceKind::Persistence, h);
        expect(zero.ss_pct == 0.0, "reference-as-forecast SS");

        // the optimized mix never loses to either endpoint
        const double a_star = optimize_alpha(s, h);
        auto window_rmse = [&](const std::vector<double>& ref, std::size_t first) {
            double acc = 0;
            std::size_t cnt = 0;
            for (std::size_t k = 0; k < ref.size(); ++k) {
                const double d = s.values[k + first] - ref[k];
                acc += d * d;
                ++cnt;
            }
            return std::sqrt(acc / static_cast<double>(cnt));
        };
        const auto cps = cp_forecast(s, h, a_star);
        std::vector<double> clim_win(clim.values.begin() + static_cast<long>(h),
                                     clim.values.end());
        expect(window_rmse(cps.values, h) <= window_rmse(sp.values, h) + 1e-9,
               "optimized cp vs sp");
        expect(window_rmse(cps.values, h) <= window_rmse(clim_win, h) + 1e-9,
               "optimized cp vs climatology");
    }
}

// ---------------------------------------------------------------------------
// criterion 8: tuning-grid search
// ---------------------------------------------------------------------------
void criterion_cv(const Args& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto matrix = build_design_matrix(database(args));
    MarsConfig base;
    const auto result = cross_validate(matrix, default_cv_grid(base));
    const double elapsed = seconds_since(t0);
    expect(elapsed < 600.0, fmt::format("grid took {:.1f}s", elapsed));
    expect(result.table.size() == 20, "grid size");

    // synthetic selection checks
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    const int n = 400;
    std::vector<Eigen::VectorXd> xs(2, Eigen::VectorXd(n));
    for (int i = 0; i < n; ++i) {
        xs[0](i) = 3 * g(rng);
        xs[1](i) = 3 * g(rng);
    }
    auto hp = [](double x, double t) { return std::max(x - t, 0.0); };

    Eigen::VectorXd y_add(n), y_int(n);
    for (int i = 0; i < n; ++i) {
        y_add(i) = 2 * hp(xs[0](i), 0.5) + 1.5 * hp(xs[1](i), -0.5) + 0.5 * g(rng);
        y_int(i) = 3 * hp(xs[0](i), 0.0) * hp(xs[1](i), 0.0) + 0.5 * g(rng);
    }
    MarsConfig small;
    small.cv_folds = 5;
    std::vector<MarsConfig> grid;
    for (int degree : {1, 2})
        for (int k : {6, 12}) {
            MarsConfig c = small;
            c.max_degree = degree;
            c.max_terms = k;
            grid.push_back(c);
        }
    const auto r_add = cross_validate(synthetic_matrix(xs, y_add), grid);
    expect(r_add.best.max_degree == 1,
           fmt::format("additive data picked degree {}", r_add.best.max_degree));
    const auto r_int = cross_validate(synthetic_matrix(xs, y_int), grid);
    expect(r_int.best.max_degree == 2,
           fmt::format("interaction data picked degree {}", r_int.best.max_degree));
}

// ---------------------------------------------------------------------------
// criterion 9: byte-identical reruns of the command line
// ---------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism(const Args& args) {
    expect(!args.cli.empty() && fs::exists(args.cli), "cli binary not found: " + args.cli);
    const fs::path dir = fs::temp_directory_path() / "skillmeta_accept";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const fs::path series = dir / "series.csv";
    {
        std::ofstream out(series);
        out << "t,value,clear_sky\n";
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(0.2, 1.0);
        for (int i = 0; i < 96; ++i) {
            const double ics = 3.0 + 2.0 * std::fabs(std::sin(0.2 * i));
            out << i << "," << ics * u(rng) << "," << ics << "\n";
        }
    }
    const fs::path forecast = dir / "forecast.csv";
    {
        std::ofstream out(forecast);
        out << "t,value\n";
        std::mt19937 rng(6);
        std::uniform_real_distribution<double> u(0.2, 1.0);
        for (int i = 0; i < 96; ++i)
            out << i << "," << 2.5 * u(rng) + 1.0 << "\n";
    }

    const std::vector<std::pair<std::string, std::string>> runs = {
        {"summary", fmt::format("summary --input {} --all", args.data)},
        {"ols", fmt::format("ols --input {} --partition all", args.data)},
        {"mars", fmt::format("mars --input {} --max-terms 16", args.data)},
        {"pdp", fmt::format("pdp --input {} --feature Horizon --max-terms 16", args.data)},
        {"ss", fmt::format("ss --series {} --forecast {} --reference cp --h 2",
                           series.string(), forecast.string())},
    };
    for (const auto& [name, cmd] : runs) {
        const fs::path out1 = dir / (name + ".1.out");
        const fs::path out2 = dir / (name + ".2.out");
        for (const fs::path& out : {out1, out2}) {
            const std::string full = fmt::format("{} {} --out {} > /dev/null 2>&1",
                                                 args.cli, cmd, out.string());
            const int rc = std::system(full.c_str());
            expect(rc == 0, fmt::format("{} exited with {}", name, rc));
        }
        expect(slurp(out1) == slurp(out2), name + " outputs differ between runs");
        if (name == "pdp")
            expect(slurp(out1.string() + ".svg") == slurp(out2.string() + ".svg"),
                   "pdp svg differs between runs");
    }
    fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
    Args args;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        if (key == "--data") args.data = argv[i + 1];
        else if (key == "--cli") args.cli = argv[i + 1];
    }
    if (args.data.empty()) {
        fmt::print(stderr, "usage: acceptance --data DB.csv [--cli skillmeta]\n");
        return 2;
    }

    using Criterion = std::pair<const char*, std::function<void(const Args&)>>;
    const std::vector<Criterion> criteria = {
        {"1 database ingestion and summary table", criterion_ingestion},
        {"2 horizon partition sizes", criterion_partition},
        {"3 published regressions", criterion_ols},
        {"4 interaction-spline fit quality", criterion_mars_fit},
        {"5 spline recovery and pruning oracle", criterion_mars_oracle},
        {"6 partial dependence correctness", criterion_pdp},
        {"7 skill metrics oracle", criterion_skill},
        {"8 tuning-grid search", criterion_cv},
        {"9 deterministic outputs", criterion_determinism},
    };

    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(args);
            fmt::print("PASS  {}  ({:.2f}s)\n", name, seconds_since(t0));
        } catch (const std::exception& e) {
            ++failures;
            fmt::print("FAIL  {}  ({})\n", name, e.what());
        }
    }
    return failures == 0 ? 0 : 1;
}
