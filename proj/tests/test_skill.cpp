#include <doctest.h>

#include <cmath>
#include <random>

#include "skillmeta/skill.hpp"

using namespace skillmeta;

namespace {

SolarSeries series_of(std::vector<double> values, std::vector<double> clear_sky = {},
                      std::vector<double> warmup = {}, std::vector<double> warmup_ics = {}) {
    SolarSeries s;
    s.values = std::move(values);
    s.clear_sky = std::move(clear_sky);
    s.warmup_values = std::move(warmup);
    s.warmup_clear_sky = std::move(warmup_ics);
    return s;
}

}  // namespace

TEST_CASE("rmse basics") {
    CHECK(rmse({1, 2, 3}, {1, 2, 3}) == 0);
    CHECK(rmse({0, 0}, {3, 4}) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
    CHECK(rmse({1}, {2}) == 1);
    CHECK_THROWS(rmse({1, 2}, {1}));
    CHECK_THROWS(rmse({}, {}));
}

TEST_CASE("persistence forecast with and without warmup") {
    auto c = persistence_forecast(series_of({5, 5, 5}, {}, {5}), 1);
    CHECK(c.first_forecast_index == 0);
    CHECK(c.values == std::vector<double>{5, 5, 5});

    auto a = persistence_forecast(series_of({1, 2, 3}, {}, {0}), 1);
    CHECK(a.values == std::vector<double>{0, 1, 2});

    auto b = persistence_forecast(series_of({1, 2, 3, 4}, {}, {9, 8}), 2);
    CHECK(b.values == std::vector<double>{9, 8, 1, 2});

    auto d = persistence_forecast(series_of({1, 2, 3}), 1);
    CHECK(d.first_forecast_index == 1);
    CHECK(d.values == std::vector<double>{1, 2});

    CHECK_THROWS(persistence_forecast(series_of({1, 2}), 2));
    CHECK_THROWS(persistence_forecast(series_of({1, 2, 3}, {}, {7}), 2));  // short warmup
}

TEST_CASE("smart persistence: clear-sky ratio correction") {
    // x = 0.5 * ics everywhere -> constant clearness -> forecasts equal actuals
    SolarSeries s = series_of({10, 5, 8, 12}, {20, 10, 16, 24});
    auto f = smart_persistence_forecast(s, 1);
    CHECK(f.first_forecast_index == 1);
    for (std::size_t k = 0; k < f.values.size(); ++k)
        CHECK(f.values[k] == doctest::Approx(s.values[k + 1]).epsilon(1e-15));

    // direct arithmetic: x [10, 8], ics [20, 16] -> forecast at index 1 is 10*16/20 = 8
    auto g = smart_persistence_forecast(series_of({10, 8}, {20, 16}), 1);
    CHECK(g.values.size() == 1);
    CHECK(g.values[0] == doctest::Approx(8.0).epsilon(1e-15));

    // constant clear-sky equals plain persistence
    auto h1 = smart_persistence_forecast(series_of({3, 1, 4, 1, 5}, {7, 7, 7, 7, 7}), 1);
    auto h2 = persistence_forecast(series_of({3, 1, 4, 1, 5}), 1);
    for (std::size_t k = 0; k < h1.values.size(); ++k) CHECK(h1.values[k] == h2.values[k]);

    CHECK_THROWS(smart_persistence_forecast(series_of({1, 2, 3}), 1));  // no clear sky
}

TEST_CASE("smart persistence excludes zero clear-sky points with a count") {
    SolarSeries s = series_of({5, 4, 3, 2}, {10, 0, 10, 10});
    auto f = smart_persistence_forecast(s, 1);
    REQUIRE(f.values.size() == 3);
    CHECK(f.excluded == std::vector<std::size_t>{1, 2});  // ics_now = 0, then ics_lag = 0
    CHECK(std::isnan(f.values[0]));
    CHECK(std::isnan(f.values[1]));
    CHECK(f.values[2] == doctest::Approx(3.0));
}

TEST_CASE("climatology forecast is the sample mean") {
    auto f = climatology_forecast(series_of({1, 2, 3}));
    CHECK(f.values == std::vector<double>{2, 2, 2});
    auto g = climatology_forecast(series_of({0, 10}));
    CHECK(g.values == std::vector<double>{5, 5});
    CHECK(rmse({0, 10}, g.values) == doctest::Approx(5.0));
}

TEST_CASE("cp forecast endpoints and midpoint") {
    SolarSeries s = series_of({10, 5, 8, 12, 6}, {20, 10, 16, 24, 12});
    const auto sp = smart_persistence_forecast(s, 1);
    const auto clim = climatology_forecast(s);
    const auto cp1 = cp_forecast(s, 1, 1.0);
    const auto cp0 = cp_forecast(s, 1, 0.0);
    const auto cph = cp_forecast(s, 1, 0.5);
    for (std::size_t k = 0; k < cp1.values.size(); ++k) {
        CHECK(cp1.values[k] == sp.values[k]);
        CHECK(cp0.values[k] == clim.values[k + 1]);
        CHECK(cph.values[k] ==
              doctest::Approx(0.5 * sp.values[k] + 0.5 * clim.values[k + 1]).epsilon(1e-15));
    }
    CHECK_THROWS(cp_forecast(s, 1, 1.5));
    CHECK_THROWS(cp_forecast(s, 1, -0.1));

    // SP value 8, mean 2, alpha 0.5 -> 5
    CHECK(0.5 * 8 + 0.5 * 2 == 5);
}

TEST_CASE("optimize_alpha hits the boundaries on degenerate series") {
    // constant clearness: SP alone is exact
    std::vector<double> ics, x;
    for (int i = 0; i < 40; ++i) {
        ics.push_back(10 + (i % 7));
        x.push_back(0.5 * ics.back());
    }
    const double a1 = optimize_alpha(series_of(x, ics), 1);
    CHECK(a1 == doctest::Approx(1.0).epsilon(1e-4));

    // actuals constant at the mean with wild clearness: climatology alone is exact
    std::vector<double> x2, ics2;
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(1, 9);
    for (int i = 0; i < 40; ++i) {
        x2.push_back(4.0);
        ics2.push_back(u(rng));
    }
    const double a0 = optimize_alpha(series_of(x2, ics2), 1);
    CHECK(a0 == doctest::Approx(0.0).epsilon(1e-4).scale(1));
}

TEST_CASE("optimize_alpha matches a dense grid-search oracle within 1e-3") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x, ics;
        for (int i = 0; i < 120; ++i) {
            ics.push_back(5 + 3 * std::sin(i * 0.3) + u(rng));
            x.push_back(ics.back() * (0.3 + 0.5 * u(rng)));
        }
        SolarSeries s = series_of(x, ics);
        const double found = optimize_alpha(s, 1);

        double best_alpha = 0, best = std::numeric_limits<double>::infinity();
        const auto sp = smart_persistence_forecast(s, 1);
        const auto clim = climatology_forecast(s);
        for (int k = 0; k <= 10000; ++k) {
            const double alpha = k / 10000.0;
            double ss = 0;
            for (std::size_t j = 0; j < sp.values.size(); ++j) {
                const double y = alpha * sp.values[j] + (1 - alpha) * clim.values[j + 1];
                const double d = s.values[j + 1] - y;
                ss += d * d;
            }
            if (ss < best) {
                best = ss;
                best_alpha = alpha;
            }
        }
        CHECK(std::abs(found - best_alpha) < 1e-3);
    }
}

TEST_CASE("skill score arithmetic") {
    CHECK(skill_score(0, 2) == 100);
    CHECK(skill_score(2, 2) == 0);
    CHECK(skill_score(3, 2) == -50);
    CHECK_THROWS(skill_score(1, 0));
}

TEST_CASE("cp rmse-squared is convex in alpha") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x, ics;
        for (int i = 0; i < 60; ++i) {
            ics.push_back(4 + u(rng));
            x.push_back(ics.back() * u(rng));
        }
        SolarSeries s = series_of(x, ics);
        auto mse = [&](double alpha) {
            const auto cp = cp_forecast(s, 1, alpha);
            double ss = 0;
            for (std::size_t k = 0; k < cp.values.size(); ++k) {
                const double d = s.values[k + 1] - cp.values[k];
                ss += d * d;
            }
            return ss / static_cast<double>(cp.values.size());
        };
        std::uniform_real_distribution<double> ua(0.05, 0.95);
        for (int k = 0; k < 10; ++k) {
            const double a = ua(rng);
            const double eps = 0.02;
            const double second_diff = mse(a - eps) - 2 * mse(a) + mse(a + eps);
            CHECK(second_diff > -1e-9);
        }
    }
}

TEST_CASE("skill score is scale invariant") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    std::vector<double> x, ics, fc;
    for (int i = 0; i < 50; ++i) {
        ics.push_back(6 + u(rng));
        x.push_back(ics.back() * u(rng));
        fc.push_back(x.back() + 0.3 * (u(rng) - 0.6));
    }
    for (ReferenceKind kind :
         {ReferenceKind::Persistence, ReferenceKind::SP, ReferenceKind::Climatology}) {
        const auto base = score_forecast(series_of(x, ics), fc, kind, 2);
        std::vector<double> x2 = x, ics2 = ics, fc2 = fc;
        const double c = 3.7;
        for (auto& v : x2) v *= c;
        for (auto& v : ics2) v *= c;
        for (auto& v : fc2) v *= c;
        const auto scaled = score_forecast(series_of(x2, ics2), fc2, kind, 2);
        CHECK(scaled.ss_pct == doctest::Approx(base.ss_pct).epsilon(1e-12));
    }
}

TEST_CASE("optimized-alpha cp is at least as good as sp and climatology") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x, ics;
        const int n = 30 + static_cast<int>(u(rng) * 100);
        for (int i = 0; i < n; ++i) {
            ics.push_back(3 + 2 * std::cos(i * 0.2) + u(rng));
            x.push_back(std::max(0.0, ics.back() * (0.2 + 0.6 * u(rng))));
        }
        SolarSeries s = series_of(x, ics);
        const std::size_t h = 1 + trial % 3;
        const double alpha = optimize_alpha(s, h);

        auto ref_rmse = [&](const ReferenceForecast& f) {
            std::vector<double> a, b;
            for (std::size_t k = 0; k < f.values.size(); ++k) {
                if (std::isnan(f.values[k])) continue;
                a.push_back(s.values[k + f.first_forecast_index]);
                b.push_back(f.values[k]);
            }
            return rmse(a, b);
        };
        // climatology restricted to the SP-scoreable window for a fair floor
        const auto sp = smart_persistence_forecast(s, h);
        const auto clim = climatology_forecast(s);
        ReferenceForecast clim_win;
        clim_win.first_forecast_index = sp.first_forecast_index;
        clim_win.values.assign(clim.values.begin() + static_cast<long>(sp.first_forecast_index),
                               clim.values.end());
        const double cp_rmse = ref_rmse(cp_forecast(s, h, alpha));
        CHECK(cp_rmse <= ref_rmse(sp) + 1e-9);
        CHECK(cp_rmse <= ref_rmse(clim_win) + 1e-9);
    }
}

TEST_CASE("negative series values are rejected") {
    CHECK_THROWS(persistence_forecast(series_of({1, -2, 3}), 1));
    CHECK_THROWS(climatology_forecast(series_of({-1, 2})));
}
