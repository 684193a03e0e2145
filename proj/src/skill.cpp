#include "skillmeta/skill.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace skillmeta {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Value at series index i - h, reading the warmup prefix for negative indices.
double lagged(const std::vector<double>& values, const std::vector<double>& warmup,
              std::size_t i, std::size_t h) {
    if (i >= h) return values[i - h];
    const std::size_t back = h - i;  // 1-based distance into the warmup
    return warmup[warmup.size() - back];
}

void check_series(const SolarSeries& s) {
    if (s.values.empty()) throw std::invalid_argument("empty series");
    if (s.step_minutes <= 0) throw std::invalid_argument("step_minutes must be positive");
    if (s.has_clear_sky() && s.clear_sky.size() != s.values.size())
        throw std::invalid_argument("clear-sky series length mismatch");
    for (double v : s.values)
        if (v < 0) throw std::invalid_argument("negative power/irradiance value");
    for (double v : s.clear_sky)
        if (v < 0) throw std::invalid_argument("negative clear-sky value");
}

std::size_t first_index(const SolarSeries& s, std::size_t h) {
    if (h == 0) throw std::invalid_argument("horizon must be at least one step");
    if (s.warmup_values.size() >= h) return 0;
    if (!s.warmup_values.empty())
        throw std::invalid_argument(
            fmt::format("warmup holds {} values but horizon needs {}", s.warmup_values.size(), h));
    if (s.values.size() <= h)
        throw std::invalid_argument(
            fmt::format("series of length {} too short for horizon {}", s.values.size(), h));
    return h;
}

}  // namespace

const char* to_string(ReferenceKind k) {
    switch (k) {
        case ReferenceKind::Persistence: return "Persistence";
        case ReferenceKind::SP: return "SP";
        case ReferenceKind::CP: return "CP";
        case ReferenceKind::Climatology: return "Climatology";
    }
    return "?";
}

double rmse(const std::vector<double>& actual, const std::vector<double>& forecast) {
    if (actual.size() != forecast.size())
        throw std::invalid_argument(fmt::format("length mismatch: {} vs {}", actual.size(),
                                                forecast.size()));
    if (actual.empty()) throw std::invalid_argument("empty vectors");
    double ss = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = actual[i] - forecast[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(actual.size()));
}

ReferenceForecast persistence_forecast(const SolarSeries& series, std::size_t h) {
    check_series(series);
    ReferenceForecast out;
    out.first_forecast_index = first_index(series, h);
    out.values.reserve(series.values.size() - out.first_forecast_index);
    for (std::size_t i = out.first_forecast_index; i < series.values.size(); ++i)
        out.values.push_back(lagged(series.values, series.warmup_values, i, h));
    return out;
}

ReferenceForecast smart_persistence_forecast(const SolarSeries& series, std::size_t h) {
    check_series(series);
    if (!series.has_clear_sky())
        throw std::invalid_argument("smart persistence needs a clear-sky series");
    const std::size_t first = first_index(series, h);
    if (first == 0 && series.warmup_clear_sky.size() < h)
        throw std::invalid_argument("warmup clear-sky values required for lagged clear-sky ratio");

    ReferenceForecast out;
    out.first_forecast_index = first;
    for (std::size_t i = first; i < series.values.size(); ++i) {
        const double ics_now = series.clear_sky[i];
        const double ics_lag = lagged(series.clear_sky, series.warmup_clear_sky, i, h);
        if (ics_now <= 0 || ics_lag <= 0) {
            out.values.push_back(kNan);
            out.excluded.push_back(i);
            continue;
        }
        const double x_lag = lagged(series.values, series.warmup_values, i, h);
        // ratio first, so a constant clear-sky reduces to plain persistence exactly
        out.values.push_back(x_lag * (ics_now / ics_lag));
    }
    return out;
}

ReferenceForecast climatology_forecast(const SolarSeries& series) {
    check_series(series);
    double sum = 0;
    for (double v : series.values) sum += v;
    const double mean = sum / static_cast<double>(series.values.size());
    ReferenceForecast out;
    out.first_forecast_index = 0;
    out.values.assign(series.values.size(), mean);
    return out;
}

ReferenceForecast cp_forecast(const SolarSeries& series, std::size_t h, double alpha) {
    if (alpha < 0 || alpha > 1)
        throw std::invalid_argument(fmt::format("alpha {} outside [0, 1]", alpha));
    const ReferenceForecast sp = smart_persistence_forecast(series, h);
    const ReferenceForecast clim = climatology_forecast(series);
    ReferenceForecast out;
    out.first_forecast_index = sp.first_forecast_index;
    out.excluded = sp.excluded;
    out.values.reserve(sp.values.size());
    for (std::size_t k = 0; k < sp.values.size(); ++k) {
        const double c = clim.values[k + sp.first_forecast_index];
        out.values.push_back(std::isnan(sp.values[k]) ? kNan
                                                      : alpha * sp.values[k] + (1 - alpha) * c);
    }
    return out;
}

double optimize_alpha(const SolarSeries& train, std::size_t h) {
    const ReferenceForecast sp = smart_persistence_forecast(train, h);
    const ReferenceForecast clim = climatology_forecast(train);

    auto objective = [&](double alpha) {
        double ss = 0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < sp.values.size(); ++k) {
            if (std::isnan(sp.values[k])) continue;
            const std::size_t i = k + sp.first_forecast_index;
            const double y = alpha * sp.values[k] + (1 - alpha) * clim.values[i];
            const double d = train.values[i] - y;
            ss += d * d;
            ++count;
        }
        if (count == 0) throw std::invalid_argument("no scoreable points for alpha search");
        return ss / static_cast<double>(count);
    };

    // golden-section search; the objective is quadratic in alpha
    constexpr double kInvPhi = 0.6180339887498949;
    constexpr double kTol = 1e-6;
    double a = 0.0, b = 1.0;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > kTol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = objective(d);
        }
    }
    const double alpha = 0.5 * (a + b);
    return std::min(std::max(alpha, 1e-6), 1.0 - 1e-6);
}

double skill_score(double a_f, double a_r) {
    if (a_f < 0) throw std::invalid_argument("forecast accuracy must be non-negative");
    if (a_r <= 0) throw std::invalid_argument("skill score undefined: reference RMSE is zero");
    return 100.0 * (1.0 - a_f / a_r);
}

SkillScoreResult score_forecast(const SolarSeries& series, const std::vector<double>& forecast,
                                ReferenceKind reference, std::size_t h,
                                std::optional<double> alpha) {
    if (forecast.size() != series.values.size())
        throw std::invalid_argument(fmt::format("forecast length {} does not match series length {}",
                                                forecast.size(), series.values.size()));

    ReferenceForecast ref;
    SkillScoreResult result;
    result.reference_kind = reference;
    result.horizon_steps = h;
    switch (reference) {
        case ReferenceKind::Persistence: ref = persistence_forecast(series, h); break;
        case ReferenceKind::SP: ref = smart_persistence_forecast(series, h); break;
        case ReferenceKind::Climatology: ref = climatology_forecast(series); break;
        case ReferenceKind::CP: {
            const double a = alpha ? *alpha : optimize_alpha(series, h);
            result.alpha = a;
            ref = cp_forecast(series, h, a);
            break;
        }
    }

    std::vector<double> actual_pts, forecast_pts, reference_pts;
    for (std::size_t k = 0; k < ref.values.size(); ++k) {
        if (std::isnan(ref.values[k])) continue;
        const std::size_t i = k + ref.first_forecast_index;
        actual_pts.push_back(series.values[i]);
        forecast_pts.push_back(forecast[i]);
        reference_pts.push_back(ref.values[k]);
    }
    if (actual_pts.empty()) throw std::invalid_argument("no scoreable points");

    result.scored_points = actual_pts.size();
    result.excluded_points = ref.excluded.size();
    result.rmse_forecast = rmse(actual_pts, forecast_pts);
    result.rmse_reference = rmse(actual_pts, reference_pts);
    result.ss_pct = skill_score(result.rmse_forecast, result.rmse_reference);
    return result;
}

}  // namespace skillmeta
