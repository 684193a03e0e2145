#include "skillmeta/design.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "skillmeta/csv.hpp"

namespace skillmeta {

namespace {

// Table-layout display labels for the non-baseline model classes.
const char* model_class_label(ModelClass m) {
    switch (m) {
        case ModelClass::Ensemble: return "Ens";
        case ModelClass::EnsembleHybrid: return "Ens_Hyb";
        case ModelClass::Hybrid: return "Hybrid";
        case ModelClass::ImageBased: return "ImageBased";
        case ModelClass::ML: return "ML";
        case ModelClass::NWP: return "NWP";
        case ModelClass::Regression: return "Reg";
        case ModelClass::TS: return "TS";
    }
    return "?";
}

}  // namespace

std::size_t DesignMatrix::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < column_names.size(); ++i)
        if (column_names[i] == name) return i;
    throw std::invalid_argument(fmt::format("no such design column: {}", name));
}

DesignMatrix build_design_matrix(const Dataset& dataset, bool include_intercept) {
    if (dataset.records.empty()) throw std::invalid_argument("empty dataset");

    const std::vector<ClimateZone> cz_levels = {ClimateZone::A, ClimateZone::B, ClimateZone::D,
                                                ClimateZone::E, ClimateZone::N};
    const std::vector<ModelClass> mc_levels = {
        ModelClass::Ensemble, ModelClass::EnsembleHybrid, ModelClass::Hybrid,
        ModelClass::ImageBased, ModelClass::ML, ModelClass::NWP, ModelClass::Regression};
    const std::vector<ReferenceModel> ref_levels = {ReferenceModel::Persistence, ReferenceModel::SP};

    DesignMatrix m;
    m.has_intercept = include_intercept;
    m.baselines = {{"CZ", "C"}, {"ModClass", "TS"}, {"Reference", "CP"}, {"Type", "PV"}};

    // Alphabetical column order, matching the regression-table layout.
    for (auto z : cz_levels) {
        m.column_names.push_back(fmt::format("CZ{}", to_string(z)));
        m.is_dummy.push_back(true);
    }
    m.column_names.push_back("Horizon");
    m.is_dummy.push_back(false);
    for (const char* name : {"InputHist", "InputMete", "InputNWP", "InputST"}) {
        m.column_names.push_back(name);
        m.is_dummy.push_back(true);
    }
    for (auto c : mc_levels) {
        m.column_names.push_back(fmt::format("ModClass{}", model_class_label(c)));
        m.is_dummy.push_back(true);
    }
    for (auto r : ref_levels) {
        m.column_names.push_back(fmt::format("Reference{}", to_string(r)));
        m.is_dummy.push_back(true);
    }
    for (const char* name : {"ResMin", "TestLength", "TrainLength"}) {
        m.column_names.push_back(name);
        m.is_dummy.push_back(false);
    }
    m.column_names.push_back("TypeSources");
    m.is_dummy.push_back(true);
    m.column_names.push_back("Year");
    m.is_dummy.push_back(false);

    const Eigen::Index n = static_cast<Eigen::Index>(dataset.records.size());
    const Eigen::Index p = static_cast<Eigen::Index>(m.column_names.size());
    m.X.setZero(n, p);
    m.y.resize(n);

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = dataset.records[static_cast<std::size_t>(i)];
        Eigen::Index j = 0;
        for (auto z : cz_levels) m.X(i, j++) = r.climate_zone == z ? 1.0 : 0.0;
        m.X(i, j++) = r.horizon_min;
        m.X(i, j++) = r.input_hist ? 1.0 : 0.0;
        m.X(i, j++) = r.input_mete ? 1.0 : 0.0;
        m.X(i, j++) = r.input_nwp ? 1.0 : 0.0;
        m.X(i, j++) = r.input_st ? 1.0 : 0.0;
        for (auto c : mc_levels) m.X(i, j++) = r.model_class == c ? 1.0 : 0.0;
        for (auto ref : ref_levels) m.X(i, j++) = r.reference_model == ref ? 1.0 : 0.0;
        m.X(i, j++) = r.res_min;
        m.X(i, j++) = r.test_length_days;
        m.X(i, j++) = r.train_length_days;
        m.X(i, j++) = r.forecast_type == ForecastType::Sources ? 1.0 : 0.0;
        m.X(i, j++) = static_cast<double>(r.year);
        m.y(i) = r.skill_score_pct;
    }
    return m;
}

DesignMatrix drop_degenerate_columns(const DesignMatrix& matrix) {
    const Eigen::Index n = matrix.n();
    const Eigen::Index p = matrix.p();
    constexpr double kRelTol = 1e-8;

    // Orthonormal basis of the kept columns (plus the intercept when present),
    // built in column order so the rule is deterministic and order-stable.
    std::vector<Eigen::VectorXd> basis;
    if (matrix.has_intercept)
        basis.push_back(Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));

    std::vector<Eigen::Index> keep;
    std::vector<DesignMatrix::DroppedColumn> dropped = matrix.dropped_columns;

    for (Eigen::Index j = 0; j < p; ++j) {
        const Eigen::VectorXd col = matrix.X.col(j);
        const double norm = col.norm();
        const double mean = col.mean();
        const bool constant = (col.array() - mean).abs().maxCoeff() == 0.0;
        if (constant) {
            dropped.push_back({matrix.column_names[static_cast<std::size_t>(j)], "zero variance"});
            continue;
        }
        Eigen::VectorXd r = col;
        for (const auto& q : basis) r -= q.dot(r) * q;
        // second pass guards against cancellation in near-collinear cases
        for (const auto& q : basis) r -= q.dot(r) * q;
        const double rnorm = r.norm();
        if (rnorm <= kRelTol * norm) {
            dropped.push_back({matrix.column_names[static_cast<std::size_t>(j)], "collinear"});
            continue;
        }
        basis.push_back(r / rnorm);
        keep.push_back(j);
    }

    if (keep.empty() && p > 0)
        throw std::runtime_error("all design columns are degenerate");

    DesignMatrix out;
    out.has_intercept = matrix.has_intercept;
    out.baselines = matrix.baselines;
    out.dropped_columns = std::move(dropped);
    out.y = matrix.y;
    out.X.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.X.col(static_cast<Eigen::Index>(k)) = matrix.X.col(keep[k]);
        out.column_names.push_back(matrix.column_names[static_cast<std::size_t>(keep[k])]);
        out.is_dummy.push_back(matrix.is_dummy[static_cast<std::size_t>(keep[k])]);
    }
    return out;
}

void write_design_matrix(const std::string& path, const DesignMatrix& matrix, char delim) {
    CsvTable table;
    table.header = matrix.column_names;
    table.header.push_back("SS");
    table.rows.reserve(static_cast<std::size_t>(matrix.n()));
    for (Eigen::Index i = 0; i < matrix.n(); ++i) {
        std::vector<std::string> row;
        row.reserve(table.header.size());
        for (Eigen::Index j = 0; j < matrix.p(); ++j) row.push_back(fmt::format("{}", matrix.X(i, j)));
        row.push_back(fmt::format("{}", matrix.y(i)));
        table.rows.push_back(std::move(row));
    }
    write_text_atomic(path, format_delimited(table, delim));
}

}  // namespace skillmeta
