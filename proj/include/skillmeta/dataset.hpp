#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace skillmeta {

// First-level Koeppen-Geiger climate zone; N marks missing information.
enum class ClimateZone { A, B, C, D, E, N };

enum class ModelClass { TS, Regression, NWP, ML, ImageBased, Ensemble, Hybrid, EnsembleHybrid };

enum class ReferenceModel { Persistence, SP, CP };

enum class ForecastType { PV, Sources };

const char* to_string(ClimateZone z);
const char* to_string(ModelClass m);
const char* to_string(ReferenceModel r);
const char* to_string(ForecastType t);

/// One extracted study result: the reported skill score plus the ten
/// explanatory factors recorded alongside it.
struct ObservationRecord {
    double skill_score_pct = 0;   // dependent variable, percent
    double horizon_min = 0;       // forecast horizon [minutes]
    double res_min = 0;           // forecast resolution (time-step length) [minutes]
    double test_length_days = 0;  // out-of-sample test set length [days]
    double train_length_days = 0; // training set length [days]
    int year = 0;                 // publication year
    ClimateZone climate_zone = ClimateZone::N;
    ModelClass model_class = ModelClass::TS;
    ReferenceModel reference_model = ReferenceModel::CP;
    ForecastType forecast_type = ForecastType::PV;
    bool input_hist = false;
    bool input_mete = false;
    bool input_nwp = false;
    bool input_st = false;
};

/// Immutable after construction; safe to share across threads for reads.
struct Dataset {
    std::vector<ObservationRecord> records;
    std::string source_path;

    std::size_t row_count() const { return records.size(); }
};

/// Maps canonical column names (CZ, Horizon, InputHist, ..., Year) to the
/// actual header names of a particular file. Identity for absent keys.
using ColumnMap = std::map<std::string, std::string>;

struct LoadReport {
    std::vector<std::string> warnings;          // soft violations, row kept
    std::vector<std::string> rejected;          // hard violations, row dropped
    std::size_t rows_seen = 0;
};

struct LoadResult {
    Dataset dataset;
    LoadReport report;
};

/// Loads the skill-score database from delimited text. Rows with hard
/// violations (unparseable numerics, unknown enumeration levels, dummies
/// outside {0,1}) are rejected with a line-numbered diagnostic; values
/// outside the documented observed ranges only produce warnings.
///
/// Throws on: missing file, missing required column, zero valid rows.
LoadResult load_database(const std::string& path, const ColumnMap& column_map = {},
                         char delim = ',');

/// Canonical column names expected in the header (before remapping).
const std::vector<std::string>& database_columns();

void write_database(const std::string& path, const Dataset& dataset, char delim = ',');

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0;
    double sd = 0;           // n-1 denominator
    double median = 0;
    double trimmed_mean = 0; // 10% symmetric trim
    double mad = 0;          // scaled by 1.4826
    double min = 0;
    double max = 0;
    double range = 0;
    double skew = 0;         // m3 / m2^1.5
    double kurtosis = 0;     // m4 / m2^2 - 3
    double se = 0;           // sd / sqrt(n)
};

/// Descriptive statistics of one numeric or dummy variable.
/// Throws for unknown or categorical columns.
SummaryStats summarize(const Dataset& dataset, const std::string& variable);

/// Names accepted by summarize(), in report order.
const std::vector<std::string>& summarizable_variables();

enum class HorizonClass { IntraHour, IntraDay, DayAhead };

/// intra-hour: <= 60 min, intra-day: (60, 360], day-ahead: > 360.
HorizonClass horizon_class(double horizon_min);

struct HorizonPartitions {
    Dataset intra_hour;
    Dataset intra_day;
    Dataset day_ahead;
};

/// Splits by forecast-horizon class; the three parts are disjoint and
/// exhaustive, preserving input order.
HorizonPartitions partition_by_horizon(const Dataset& dataset);

}  // namespace skillmeta
