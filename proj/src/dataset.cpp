#include "skillmeta/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <fmt/format.h>

#include "skillmeta/csv.hpp"

namespace skillmeta {

namespace {

const std::vector<std::string> kColumns = {
    "CZ",       "Horizon",   "InputHist",  "InputMete",   "InputNWP", "InputST", "ModClass",
    "Reference", "ResMin",   "SS",         "TestLength",  "TrainLength", "Type", "Year"};

const std::vector<std::string> kSummarizable = {
    "Horizon", "InputHist", "InputMete", "InputNWP", "InputST",
    "ResMin",  "SS",        "TestLength", "TrainLength", "Year"};

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_dummy(const std::string& s, bool& out) {
    double v = 0;
    if (!parse_double(s, v)) return false;
    if (v == 0.0) { out = false; return true; }
    if (v == 1.0) { out = true; return true; }
    return false;
}

bool parse_climate_zone(const std::string& s, ClimateZone& out) {
    if (s == "A") out = ClimateZone::A;
    else if (s == "B") out = ClimateZone::B;
    else if (s == "C") out = ClimateZone::C;
    else if (s == "D") out = ClimateZone::D;
    else if (s == "E") out = ClimateZone::E;
    else if (s == "N" || s == "NA") out = ClimateZone::N;  // both spellings occur
    else return false;
    return true;
}

bool parse_model_class(const std::string& s, ModelClass& out) {
    if (s == "TS") out = ModelClass::TS;
    else if (s == "Regression" || s == "Reg") out = ModelClass::Regression;
    else if (s == "NWP") out = ModelClass::NWP;
    else if (s == "ML") out = ModelClass::ML;
    else if (s == "ImageBased") out = ModelClass::ImageBased;
    else if (s == "Ensemble" || s == "Ens") out = ModelClass::Ensemble;
    else if (s == "Hybrid") out = ModelClass::Hybrid;
    else if (s == "EnsembleHybrid" || s == "Ens_Hyb" || s == "EnsHyb") out = ModelClass::EnsembleHybrid;
    else return false;
    return true;
}

bool parse_reference(const std::string& s, ReferenceModel& out) {
    if (s == "Persistence" || s == "P") out = ReferenceModel::Persistence;
    else if (s == "SP") out = ReferenceModel::SP;
    else if (s == "CP") out = ReferenceModel::CP;
    else return false;
    return true;
}

bool parse_type(const std::string& s, ForecastType& out) {
    if (s == "PV") out = ForecastType::PV;
    else if (s == "Sources") out = ForecastType::Sources;
    else return false;
    return true;
}

double get(const ObservationRecord& r, const std::string& variable) {
    if (variable == "SS") return r.skill_score_pct;
    if (variable == "Horizon") return r.horizon_min;
    if (variable == "ResMin") return r.res_min;
    if (variable == "TestLength") return r.test_length_days;
    if (variable == "TrainLength") return r.train_length_days;
    if (variable == "Year") return static_cast<double>(r.year);
    if (variable == "InputHist") return r.input_hist ? 1.0 : 0.0;
    if (variable == "InputMete") return r.input_mete ? 1.0 : 0.0;
    if (variable == "InputNWP") return r.input_nwp ? 1.0 : 0.0;
    if (variable == "InputST") return r.input_st ? 1.0 : 0.0;
    if (variable == "CZ" || variable == "ModClass" || variable == "Reference" || variable == "Type")
        throw std::invalid_argument(fmt::format("categorical column cannot be summarized: {}", variable));
    throw std::invalid_argument(fmt::format("unknown column: {}", variable));
}

double median_of_sorted(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// %g-style shortest representation that still round-trips.
std::string format_value(double v) {
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15)
        return fmt::format("{}", static_cast<long long>(v));
    std::string s = fmt::format("{}", v);
    return s;
}

}  // namespace

const char* to_string(ClimateZone z) {
    switch (z) {
        case ClimateZone::A: return "A";
        case ClimateZone::B: return "B";
        case ClimateZone::C: return "C";
        case ClimateZone::D: return "D";
        case ClimateZone::E: return "E";
        case ClimateZone::N: return "N";
    }
    return "?";
}

const char* to_string(ModelClass m) {
    switch (m) {
        case ModelClass::TS: return "TS";
        case ModelClass::Regression: return "Regression";
        case ModelClass::NWP: return "NWP";
        case ModelClass::ML: return "ML";
        case ModelClass::ImageBased: return "ImageBased";
        case ModelClass::Ensemble: return "Ensemble";
        case ModelClass::Hybrid: return "Hybrid";
        case ModelClass::EnsembleHybrid: return "EnsembleHybrid";
    }
    return "?";
}

const char* to_string(ReferenceModel r) {
    switch (r) {
        case ReferenceModel::Persistence: return "Persistence";
        case ReferenceModel::SP: return "SP";
        case ReferenceModel::CP: return "CP";
    }
    return "?";
}

const char* to_string(ForecastType t) {
    switch (t) {
        case ForecastType::PV: return "PV";
        case ForecastType::Sources: return "Sources";
    }
    return "?";
}

const std::vector<std::string>& database_columns() { return kColumns; }

const std::vector<std::string>& summarizable_variables() { return kSummarizable; }

LoadResult load_database(const std::string& path, const ColumnMap& column_map, char delim) {
    if (!std::filesystem::exists(path))
        throw std::runtime_error(fmt::format("database file not found: {}", path));

    const CsvTable table = read_delimited(path, delim);

    std::map<std::string, std::size_t> col;
    for (const auto& name : kColumns) {
        auto it = column_map.find(name);
        const std::string& header = it == column_map.end() ? name : it->second;
        auto idx = table.find_column(header);
        if (!idx)
            throw std::runtime_error(fmt::format("missing required column '{}' in {}", header, path));
        col[name] = *idx;
    }

    LoadResult result;
    result.dataset.source_path = path;
    result.dataset.records.reserve(table.rows.size());
    auto& warnings = result.report.warnings;

    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = i + 2;  // 1-based, after the header
        if (row.size() < table.header.size()) {
            result.report.rejected.push_back(fmt::format("line {}: expected {} cells, got {}", line,
                                                         table.header.size(), row.size()));
            continue;
        }
        auto cell = [&](const std::string& name) -> const std::string& { return row[col.at(name)]; };

        ObservationRecord rec;
        std::string bad;

        double year_raw = 0;
        if (!parse_double(cell("SS"), rec.skill_score_pct)) bad = "SS";
        else if (!parse_double(cell("Horizon"), rec.horizon_min)) bad = "Horizon";
        else if (!parse_double(cell("ResMin"), rec.res_min)) bad = "ResMin";
        else if (!parse_double(cell("TestLength"), rec.test_length_days)) bad = "TestLength";
        else if (!parse_double(cell("TrainLength"), rec.train_length_days)) bad = "TrainLength";
        else if (!parse_double(cell("Year"), year_raw) || year_raw != std::floor(year_raw)) bad = "Year";
        else if (!parse_climate_zone(cell("CZ"), rec.climate_zone)) bad = "CZ";
        else if (!parse_model_class(cell("ModClass"), rec.model_class)) bad = "ModClass";
        else if (!parse_reference(cell("Reference"), rec.reference_model)) bad = "Reference";
        else if (!parse_type(cell("Type"), rec.forecast_type)) bad = "Type";
        else if (!parse_dummy(cell("InputHist"), rec.input_hist)) bad = "InputHist";
        else if (!parse_dummy(cell("InputMete"), rec.input_mete)) bad = "InputMete";
        else if (!parse_dummy(cell("InputNWP"), rec.input_nwp)) bad = "InputNWP";
        else if (!parse_dummy(cell("InputST"), rec.input_st)) bad = "InputST";

        if (bad.empty()) {
            rec.year = static_cast<int>(year_raw);
            // hard domain violations
            if (rec.horizon_min <= 0) bad = "Horizon";
            else if (rec.res_min <= 0) bad = "ResMin";
            else if (rec.test_length_days < 1) bad = "TestLength";
            else if (rec.train_length_days < 0) bad = "TrainLength";
            else if (rec.skill_score_pct > 100) bad = "SS";
        }

        if (!bad.empty()) {
            result.report.rejected.push_back(
                fmt::format("line {}: invalid value '{}' in column {}", line, cell(bad), bad));
            continue;
        }

        // soft range checks against the documented observed ranges
        auto warn_range = [&](const char* name, double v, double lo, double hi) {
            if (v < lo || v > hi)
                warnings.push_back(fmt::format("line {}: {} {} outside observed range [{}, {}]",
                                               line, name, format_value(v), format_value(lo),
                                               format_value(hi)));
        };
        warn_range("SS", rec.skill_score_pct, -94.61, 96.10);
        warn_range("Horizon", rec.horizon_min, 0.17, 4320);
        warn_range("ResMin", rec.res_min, 0.02, 360);
        warn_range("TestLength", rec.test_length_days, 1, 1460);
        warn_range("TrainLength", rec.train_length_days, 0, 7305);
        warn_range("Year", rec.year, 2006, 2022);

        result.dataset.records.push_back(rec);
    }
    result.report.rows_seen = table.rows.size();

    if (result.dataset.records.empty())
        throw std::runtime_error(fmt::format("no valid rows in {}", path));
    return result;
}

void write_database(const std::string& path, const Dataset& dataset, char delim) {
    CsvTable table;
    table.header = kColumns;
    table.rows.reserve(dataset.records.size());
    for (const auto& r : dataset.records) {
        std::vector<std::string> row;
        row.reserve(kColumns.size());
        for (const auto& name : kColumns) {
            if (name == "CZ") row.push_back(to_string(r.climate_zone));
            else if (name == "ModClass") row.push_back(to_string(r.model_class));
            else if (name == "Reference") row.push_back(to_string(r.reference_model));
            else if (name == "Type") row.push_back(to_string(r.forecast_type));
            else row.push_back(format_value(get(r, name)));
        }
        table.rows.push_back(std::move(row));
    }
    write_text_atomic(path, format_delimited(table, delim));
}

SummaryStats summarize(const Dataset& dataset, const std::string& variable) {
    if (dataset.records.empty()) throw std::invalid_argument("empty dataset");

    std::vector<double> values;
    values.reserve(dataset.records.size());
    for (const auto& r : dataset.records) values.push_back(get(r, variable));
    std::sort(values.begin(), values.end());

    const std::size_t n = values.size();
    SummaryStats s;
    s.n = n;
    s.min = values.front();
    s.max = values.back();
    s.range = s.max - s.min;
    s.median = median_of_sorted(values);

    double sum = 0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);

    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double nn = static_cast<double>(n);
    s.sd = n > 1 ? std::sqrt(m2 / (nn - 1)) : 0.0;
    s.se = s.sd / std::sqrt(nn);
    m2 /= nn;
    m3 /= nn;
    m4 /= nn;
    s.skew = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;

    const std::size_t trim = static_cast<std::size_t>(std::floor(0.1 * nn));
    double tsum = 0;
    for (std::size_t i = trim; i < n - trim; ++i) tsum += values[i];
    s.trimmed_mean = tsum / static_cast<double>(n - 2 * trim);

    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(values[i] - s.median);
    std::sort(dev.begin(), dev.end());
    s.mad = 1.4826 * median_of_sorted(dev);

    return s;
}

HorizonClass horizon_class(double horizon_min) {
    if (horizon_min <= 60) return HorizonClass::IntraHour;
    if (horizon_min <= 360) return HorizonClass::IntraDay;
    return HorizonClass::DayAhead;
}

HorizonPartitions partition_by_horizon(const Dataset& dataset) {
    HorizonPartitions parts;
    parts.intra_hour.source_path = dataset.source_path;
    parts.intra_day.source_path = dataset.source_path;
    parts.day_ahead.source_path = dataset.source_path;
    for (const auto& r : dataset.records) {
        switch (horizon_class(r.horizon_min)) {
            case HorizonClass::IntraHour: parts.intra_hour.records.push_back(r); break;
            case HorizonClass::IntraDay: parts.intra_day.records.push_back(r); break;
            case HorizonClass::DayAhead: parts.day_ahead.records.push_back(r); break;
        }
    }
    return parts;
}

}  // namespace skillmeta
