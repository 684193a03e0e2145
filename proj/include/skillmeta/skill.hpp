#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace skillmeta {

/// Uniformly sampled solar power or irradiance series. An aligned clear-sky
/// series enables the smart-persistence and combined references. The warmup
/// prefix holds values preceding index 0 so lagged references can score the
/// full series; without it, the first h points are excluded from scoring.
struct SolarSeries {
    std::vector<double> values;             // x_i >= 0
    double step_minutes = 1.0;
    std::vector<double> clear_sky;          // optional, same length, > 0 where used
    std::vector<double> warmup_values;      // optional prefix x_{-k..-1}
    std::vector<double> warmup_clear_sky;   // required with warmup when clear_sky is used

    bool has_clear_sky() const { return !clear_sky.empty(); }
};

enum class ReferenceKind { Persistence, SP, CP, Climatology };

const char* to_string(ReferenceKind k);

struct SkillScoreResult {
    double rmse_forecast = 0;   // A_f
    double rmse_reference = 0;  // A_r
    double ss_pct = 0;          // 100 * (1 - A_f / A_r)
    ReferenceKind reference_kind = ReferenceKind::Persistence;
    std::size_t horizon_steps = 1;
    std::optional<double> alpha;      // CP mixing weight
    std::size_t scored_points = 0;
    std::size_t excluded_points = 0;  // zero clear-sky (night) indices skipped
};

double rmse(const std::vector<double>& actual, const std::vector<double>& forecast);

/// y_i = x_{i-h}. Forecasts are produced for every index with an available
/// lag; indices before that are absent from the returned vector, whose
/// first element corresponds to series index `first_forecast_index`.
struct ReferenceForecast {
    std::vector<double> values;
    std::size_t first_forecast_index = 0;
    std::vector<std::size_t> excluded;  // indices skipped (zero clear-sky)
};

ReferenceForecast persistence_forecast(const SolarSeries& series, std::size_t h);

/// y_i = x_{i-h} * ics_i / ics_{i-h}; indices where either clear-sky value
/// is zero are excluded and reported.
ReferenceForecast smart_persistence_forecast(const SolarSeries& series, std::size_t h);

/// Constant forecast at the sample mean of the series.
ReferenceForecast climatology_forecast(const SolarSeries& series);

/// Convex combination alpha * SP + (1 - alpha) * climatology, 0 <= alpha <= 1.
ReferenceForecast cp_forecast(const SolarSeries& series, std::size_t h, double alpha);

/// RMSE-minimizing CP weight on the training series, by golden-section
/// search on (0, 1); the objective is quadratic in alpha, hence unimodal.
double optimize_alpha(const SolarSeries& train, std::size_t h);

/// 100 * (1 - a_f / a_r). Throws when a_r is zero (perfect reference).
double skill_score(double a_f, double a_r);

/// Scores a forecast of `series` against the chosen reference model. The
/// forecast vector is aligned with the series (one value per index); only
/// indices scoreable by the reference enter both RMSE computations.
SkillScoreResult score_forecast(const SolarSeries& series, const std::vector<double>& forecast,
                                ReferenceKind reference, std::size_t h,
                                std::optional<double> alpha = std::nullopt);

}  // namespace skillmeta
