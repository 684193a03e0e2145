#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <unistd.h>

#include "skillmeta/dataset.hpp"

namespace testutil {

/// Unique scratch file removed on destruction.
class TempFile {
public:
    explicit TempFile(const std::string& stem) {
        static std::atomic<int> counter{0};
        path_ = (std::filesystem::temp_directory_path() /
                 (stem + "." + std::to_string(::getpid()) + "." +
                  std::to_string(counter++) + ".tmp"))
                    .string();
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
        std::filesystem::remove(path_ + ".manifest.json", ec);
    }
    const std::string& path() const { return path_; }

    void write(const std::string& content) const {
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }

private:
    std::string path_;
};

inline std::string db_header() {
    return "CZ,Horizon,InputHist,InputMete,InputNWP,InputST,ModClass,Reference,ResMin,SS,"
           "TestLength,TrainLength,Type,Year\n";
}

inline std::string db_row(const skillmeta::ObservationRecord& r) {
    std::string s;
    s += skillmeta::to_string(r.climate_zone);
    s += "," + std::to_string(r.horizon_min);
    s += std::string(",") + (r.input_hist ? "1" : "0");
    s += std::string(",") + (r.input_mete ? "1" : "0");
    s += std::string(",") + (r.input_nwp ? "1" : "0");
    s += std::string(",") + (r.input_st ? "1" : "0");
    s += std::string(",") + skillmeta::to_string(r.model_class);
    s += std::string(",") + skillmeta::to_string(r.reference_model);
    s += "," + std::to_string(r.res_min);
    s += "," + std::to_string(r.skill_score_pct);
    s += "," + std::to_string(r.test_length_days);
    s += "," + std::to_string(r.train_length_days);
    s += std::string(",") + skillmeta::to_string(r.forecast_type);
    s += "," + std::to_string(r.year);
    s += "\n";
    return s;
}

/// Deterministic spread of records across enum levels and value ranges.
inline skillmeta::Dataset synthetic_dataset(std::size_t n, unsigned seed = 7) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0, 1);
    skillmeta::Dataset data;
    data.source_path = "synthetic";
    const skillmeta::ClimateZone zones[] = {skillmeta::ClimateZone::A, skillmeta::ClimateZone::B,
                                            skillmeta::ClimateZone::C, skillmeta::ClimateZone::D,
                                            skillmeta::ClimateZone::E, skillmeta::ClimateZone::N};
    const skillmeta::ModelClass classes[] = {
        skillmeta::ModelClass::TS,        skillmeta::ModelClass::Regression,
        skillmeta::ModelClass::NWP,       skillmeta::ModelClass::ML,
        skillmeta::ModelClass::ImageBased, skillmeta::ModelClass::Ensemble,
        skillmeta::ModelClass::Hybrid,    skillmeta::ModelClass::EnsembleHybrid};
    const skillmeta::ReferenceModel refs[] = {skillmeta::ReferenceModel::Persistence,
                                              skillmeta::ReferenceModel::SP,
                                              skillmeta::ReferenceModel::CP};
    for (std::size_t i = 0; i < n; ++i) {
        skillmeta::ObservationRecord r;
        r.climate_zone = zones[static_cast<std::size_t>(6 * u01(rng)) % 6];
        r.model_class = classes[static_cast<std::size_t>(8 * u01(rng)) % 8];
        r.reference_model = refs[static_cast<std::size_t>(3 * u01(rng)) % 3];
        r.forecast_type = u01(rng) < 0.2 ? skillmeta::ForecastType::Sources
                                         : skillmeta::ForecastType::PV;
        const double which = u01(rng);
        if (which < 0.4) r.horizon_min = 1 + 59 * u01(rng);
        else if (which < 0.75) r.horizon_min = 61 + 299 * u01(rng);
        else r.horizon_min = 361 + 1079 * u01(rng);
        r.res_min = 1 + 59 * u01(rng);
        r.test_length_days = 1 + 400 * u01(rng);
        r.train_length_days = 700 * u01(rng);
        r.year = 2006 + static_cast<int>(17 * u01(rng)) % 17;
        r.input_hist = u01(rng) < 0.9;
        r.input_mete = u01(rng) < 0.5;
        r.input_nwp = u01(rng) < 0.2;
        r.input_st = u01(rng) < 0.25;
        r.skill_score_pct = 40 * u01(rng) - 5 + 0.01 * r.horizon_min;
        data.records.push_back(r);
    }
    return data;
}

}  // namespace testutil
