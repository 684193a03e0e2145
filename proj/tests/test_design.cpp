#include <doctest.h>

#include "skillmeta/design.hpp"
#include "testutil.hpp"

using namespace skillmeta;

namespace {

ObservationRecord base_record() {
    ObservationRecord r;
    r.horizon_min = 30;
    r.res_min = 15;
    r.test_length_days = 100;
    r.train_length_days = 200;
    r.year = 2019;
    r.climate_zone = ClimateZone::C;
    r.model_class = ModelClass::TS;
    r.reference_model = ReferenceModel::CP;
    r.forecast_type = ForecastType::PV;
    return r;
}

}  // namespace

TEST_CASE("design matrix has the 24 slope columns in table order") {
    auto data = testutil::synthetic_dataset(50);
    const auto m = build_design_matrix(data);
    REQUIRE(m.p() == 24);
    const std::vector<std::string> expected = {
        "CZA", "CZB", "CZD", "CZE", "CZN", "Horizon", "InputHist", "InputMete", "InputNWP",
        "InputST", "ModClassEns", "ModClassEns_Hyb", "ModClassHybrid", "ModClassImageBased",
        "ModClassML", "ModClassNWP", "ModClassReg", "ReferencePersistence", "ReferenceSP",
        "ResMin", "TestLength", "TrainLength", "TypeSources", "Year"};
    CHECK(m.column_names == expected);
    CHECK(m.baselines.at("CZ") == "C");
    CHECK(m.baselines.at("ModClass") == "TS");
    CHECK(m.baselines.at("Reference") == "CP");
    CHECK(m.baselines.at("Type") == "PV");
}

TEST_CASE("baseline levels produce all-zero indicator blocks") {
    Dataset data;
    data.records.push_back(base_record());
    auto r2 = base_record();
    r2.reference_model = ReferenceModel::Persistence;
    r2.climate_zone = ClimateZone::D;
    data.records.push_back(r2);

    const auto m = build_design_matrix(data);
    for (const char* col : {"CZA", "CZB", "CZD", "CZE", "CZN"})
        CHECK(m.X(0, static_cast<Eigen::Index>(m.column_index(col))) == 0);
    CHECK(m.X(1, static_cast<Eigen::Index>(m.column_index("CZD"))) == 1);
    CHECK(m.X(1, static_cast<Eigen::Index>(m.column_index("ReferencePersistence"))) == 1);
    CHECK(m.X(1, static_cast<Eigen::Index>(m.column_index("ReferenceSP"))) == 0);
    CHECK(m.X(0, static_cast<Eigen::Index>(m.column_index("ReferencePersistence"))) == 0);
}

TEST_CASE("indicator family sums are 0 or 1 per record") {
    auto data = testutil::synthetic_dataset(200);
    const auto m = build_design_matrix(data);
    auto family_sum = [&](Eigen::Index row, const std::vector<const char*>& cols) {
        double s = 0;
        for (auto c : cols) s += m.X(row, static_cast<Eigen::Index>(m.column_index(c)));
        return s;
    };
    for (Eigen::Index i = 0; i < m.n(); ++i) {
        const double cz = family_sum(i, {"CZA", "CZB", "CZD", "CZE", "CZN"});
        CHECK((cz == 0 || cz == 1));
        const double mc = family_sum(i, {"ModClassEns", "ModClassEns_Hyb", "ModClassHybrid",
                                         "ModClassImageBased", "ModClassML", "ModClassNWP",
                                         "ModClassReg"});
        CHECK((mc == 0 || mc == 1));
        const double ref = family_sum(i, {"ReferencePersistence", "ReferenceSP"});
        CHECK((ref == 0 || ref == 1));
    }
}

TEST_CASE("re-encoding is deterministic") {
    auto data = testutil::synthetic_dataset(100);
    const auto a = build_design_matrix(data);
    const auto b = build_design_matrix(data);
    CHECK(a.X == b.X);
    CHECK(a.y == b.y);
    CHECK(a.column_names == b.column_names);
}

TEST_CASE("drop_degenerate_columns removes zero-variance and collinear columns") {
    auto data = testutil::synthetic_dataset(60);
    auto m = build_design_matrix(data);

    // zero column
    m.column_names.push_back("AllZero");
    m.is_dummy.push_back(true);
    m.X.conservativeResize(Eigen::NoChange, m.p() + 1);
    m.X.col(m.p() - 1).setZero();

    // duplicate of Horizon
    m.column_names.push_back("HorizonCopy");
    m.is_dummy.push_back(false);
    m.X.conservativeResize(Eigen::NoChange, m.p() + 1);
    m.X.col(m.p() - 1) = m.X.col(static_cast<Eigen::Index>(m.column_index("Horizon")));

    const auto dropped = drop_degenerate_columns(m);
    REQUIRE(dropped.dropped_columns.size() == 2);
    CHECK(dropped.dropped_columns[0].name == "AllZero");
    CHECK(dropped.dropped_columns[0].reason == "zero variance");
    CHECK(dropped.dropped_columns[1].name == "HorizonCopy");
    CHECK(dropped.dropped_columns[1].reason == "collinear");
    CHECK(dropped.p() == m.p() - 2);
}

TEST_CASE("drop_degenerate_columns is idempotent") {
    auto data = testutil::synthetic_dataset(60);
    // make one climate zone empty so a real drop occurs
    for (auto& r : data.records)
        if (r.climate_zone == ClimateZone::E) r.climate_zone = ClimateZone::C;
    const auto once = drop_degenerate_columns(build_design_matrix(data));
    const auto twice = drop_degenerate_columns(once);
    CHECK(once.column_names == twice.column_names);
    CHECK(once.X == twice.X);
    CHECK(once.dropped_columns.size() == twice.dropped_columns.size());
}

TEST_CASE("a partition without a level drops that indicator column") {
    auto data = testutil::synthetic_dataset(80);
    for (auto& r : data.records)
        if (r.climate_zone == ClimateZone::E) r.climate_zone = ClimateZone::A;
    const auto m = drop_degenerate_columns(build_design_matrix(data));
    bool cze_dropped = false;
    for (const auto& d : m.dropped_columns)
        if (d.name == "CZE" && d.reason == "zero variance") cze_dropped = true;
    CHECK(cze_dropped);
    CHECK_THROWS(m.column_index("CZE"));
}

TEST_CASE("all-degenerate matrix is an error") {
    Dataset data;
    for (int i = 0; i < 5; ++i) data.records.push_back(base_record());
    auto m = build_design_matrix(data);  // every column constant across identical records
    CHECK_THROWS(drop_degenerate_columns(m));
}
