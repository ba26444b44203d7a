#include <doctest.h>

#include <cmath>
#include <random>

#include "mobimpute/evaluation.hpp"
#include "mobimpute/segmentation.hpp"

using namespace mobimpute;

TEST_CASE("impose_missingness keeps the scheduled on-windows") {
    OnOffSchedule sched;  // 120 on / 600 off
    std::vector<PlanarPoint> pts;
    for (int i = 0; i < 72000; ++i) pts.push_back({0, 0, static_cast<double>(i)});

    SUBCASE("retained fraction equals on/(on+off)") {
        const auto kept = impose_missingness(pts, sched);
        const double frac = static_cast<double>(kept.size()) / pts.size();
        CHECK(frac == doctest::Approx(120.0 / 720.0).epsilon(1e-3));
        for (const auto& p : kept) {
            CHECK(std::fmod(p.t - sched.phase_s, sched.cycle_s()) < sched.on_s);
        }
    }
    SUBCASE("idempotent") {
        const auto once = impose_missingness(pts, sched);
        const auto twice = impose_missingness(once, sched);
        CHECK(twice.size() == once.size());
    }
    SUBCASE("phase shifts the kept windows") {
        OnOffSchedule shifted = sched;
        shifted.phase_s = 300.0;
        const auto kept = impose_missingness(pts, shifted);
        CHECK(kept.front().t == doctest::Approx(300.0));
    }
    SUBCASE("2 on / 10 off in minutes removes 83.3%") {
        OnOffSchedule m;
        m.on_s = 2 * 60;
        m.off_s = 10 * 60;
        const auto kept = impose_missingness(pts, m);
        const double removed = 1.0 - static_cast<double>(kept.size()) / pts.size();
        CHECK(removed == doctest::Approx(10.0 / 12.0).epsilon(1e-3));
    }
}

TEST_CASE("civil_to_epoch matches known timestamps") {
    CHECK(civil_to_epoch(1970, 1, 1, 0, 0, 0) == 0);
    CHECK(civil_to_epoch(1970, 1, 2, 0, 0, 0) == 86400);
    CHECK(civil_to_epoch(2000, 3, 1, 0, 0, 0) == 951868800);   // leap year Feb 29
    CHECK(civil_to_epoch(2008, 10, 24, 4, 10, 45) == 1224821445);
    CHECK(civil_to_epoch(1969, 12, 31, 23, 59, 59) == -1);
}

TEST_CASE("parse_plt") {
    const std::string header =
        "Geolife trajectory\nWGS 84\nAltitude is in Feet\nReserved 3\n"
        "0,2,255,My Track,0,0,2,8421376\n0\n";
    SUBCASE("well-formed line") {
        const auto res = parse_plt(
            header + "39.906631,116.385564,0,492,39745.1741319444,2008-10-24,04:10:45\n");
        REQUIRE(res.records.size() == 1);
        CHECK(res.malformed_lines == 0);
        CHECK(res.records[0].lat == doctest::Approx(39.906631));
        CHECK(res.records[0].lon == doctest::Approx(116.385564));
        CHECK(res.records[0].t == doctest::Approx(
                  static_cast<double>(civil_to_epoch(2008, 10, 24, 4, 10, 45))));
    }
    SUBCASE("out-of-range latitude is skipped and counted") {
        const auto res = parse_plt(
            header +
            "91.0,116.0,0,492,39745.17,2008-10-24,04:10:45\n"
            "39.9,116.3,0,492,39745.18,2008-10-24,04:10:50\n");
        CHECK(res.records.size() == 1);
        CHECK(res.malformed_lines == 1);
    }
    SUBCASE("truncated field count is skipped") {
        const auto res = parse_plt(header + "39.9,116.3,0\n");
        CHECK(res.records.empty());
        CHECK(res.malformed_lines == 1);
    }
    SUBCASE("short header throws") {
        CHECK_THROWS_WITH(parse_plt("too\nshort\n"), "not a PLT file");
    }
}

TEST_CASE("unscheduled_missingness") {
    OnOffSchedule sched;  // 120 on / 600 off
    SUBCASE("full coverage of on-windows scores zero") {
        std::vector<PlanarPoint> pts;
        for (int i = 0; i < 7200; ++i) {
            const double t = i;
            if (std::fmod(t, sched.cycle_s()) < sched.on_s) pts.push_back({0, 0, t});
        }
        CHECK(unscheduled_missingness(pts, sched) == doctest::Approx(0.0).epsilon(1e-6));
    }
    SUBCASE("dropping half the on-windows scores about one half") {
        std::vector<PlanarPoint> pts;
        for (int i = 0; i < 14400; ++i) {
            const double t = i;
            const double cycle_idx = std::floor(t / sched.cycle_s());
            if (std::fmod(t, sched.cycle_s()) < sched.on_s &&
                std::fmod(cycle_idx, 2.0) == 0.0) {
                pts.push_back({0, 0, t});
            }
        }
        const double f = unscheduled_missingness(pts, sched);
        // the 60 s tolerance eats into each missing window
        CHECK(f > 0.3);
        CHECK(f < 0.6);
    }
    SUBCASE("always-on schedule with a one-hour dropout in 24 h scores about 1/24") {
        OnOffSchedule always;
        always.on_s = 600.0;
        always.off_s = 0.0;
        std::vector<PlanarPoint> pts;
        for (int i = 0; i < 86400; i += 10) {
            const double t = i;
            if (t >= 30000.0 && t < 33600.0) continue;
            pts.push_back({0, 0, t});
        }
        const double f = unscheduled_missingness(pts, always);
        // the 60 s tolerance shaves the dropout edges
        CHECK(f == doctest::Approx(1.0 / 24.0).epsilon(0.05));
    }
    SUBCASE("always-on phone on a 1-min-per-hour schedule") {
        OnOffSchedule hourly;
        hourly.on_s = 60.0;
        hourly.off_s = 3540.0;
        std::vector<PlanarPoint> pts;
        for (int i = 0; i < 4 * 3600; i += 10) pts.push_back({0, 0, static_cast<double>(i)});
        CHECK(unscheduled_missingness(pts, hourly) == doctest::Approx(0.0).epsilon(1e-6));
    }
}

namespace {

// Dense 1 s commuter-style truth trace: home pause, walk out, pause, walk back.
std::vector<PlanarPoint> dense_truth(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jit(-2.0, 2.0);
    std::vector<PlanarPoint> pts;
    double t = 0.0;
    auto dwell = [&](double x, double y, double secs) {
        for (double s = 0; s < secs; s += 1.0) {
            pts.push_back({x + jit(rng), y + jit(rng), t});
            t += 1.0;
        }
    };
    auto walk = [&](double x0, double y0, double x1, double y1, double secs) {
        for (double s = 0; s < secs; s += 1.0) {
            const double u = s / secs;
            pts.push_back({x0 + u * (x1 - x0), y0 + u * (y1 - y0), t});
            t += 1.0;
        }
    };
    // walks at ~2.9 m/s so they read as flights, not drifting pauses
    dwell(0, 0, 1200);
    walk(0, 0, 800, 300, 300);
    dwell(800, 300, 1800);
    walk(800, 300, 0, 0, 300);
    dwell(0, 0, 1200);
    return pts;
}

}  // namespace

TEST_CASE("evaluate produces a measure-by-method error summary") {
    std::vector<std::vector<PlanarPoint>> traces = {dense_truth(1), dense_truth(2)};
    OnOffSchedule sched;  // 120/600
    std::vector<Method> methods = {
        {"LI", KernelSpec::make(KernelFamily::LI)},
        {"TL", KernelSpec::make(KernelFamily::TL)},
    };
    const auto table = evaluate(traces, sched, methods, 5, 77);
    CHECK(table.measures == trace_measure_names());
    REQUIRE(table.methods.size() == 2);
    REQUIRE(table.cells.size() == table.measures.size());
    for (const auto& row : table.cells) CHECK(row.size() == 2);
    REQUIRE(table.mean_abs_error.size() == 2);
    for (double m : table.mean_abs_error) {
        CHECK(std::isfinite(m));
        CHECK(m >= 0.0);
    }

    SUBCASE("deterministic under the same seed") {
        const auto again = evaluate(traces, sched, methods, 5, 77);
        for (std::size_t i = 0; i < table.cells.size(); ++i) {
            for (std::size_t j = 0; j < table.cells[i].size(); ++j) {
                CHECK(again.cells[i][j] == table.cells[i][j]);
            }
        }
    }
    SUBCASE("LI underestimates distance travelled") {
        std::size_t dist_row = 0;
        for (std::size_t i = 0; i < table.measures.size(); ++i) {
            if (table.measures[i] == "DistTravelled") dist_row = i;
        }
        CHECK(table.cells[dist_row][0] <= 1e-9);  // signed percent, LI column
    }
}

TEST_CASE("evaluate rejects sparse truth traces") {
    std::vector<PlanarPoint> sparse;
    for (int i = 0; i < 100; ++i) sparse.push_back({0, 0, i * 30.0});
    std::vector<std::vector<PlanarPoint>> traces = {sparse};
    std::vector<Method> methods = {{"LI", KernelSpec::make(KernelFamily::LI)}};
    CHECK_THROWS(evaluate(traces, OnOffSchedule{}, methods, 1, 1));
}

TEST_CASE("ErrorTable finalize skips flagged cells") {
    ErrorTable t;
    t.measures = {"a", "b"};
    t.methods = {"m"};
    t.cells = {{-10.0}, {4.0}};
    t.flagged = {{false}, {true}};
    t.finalize();
    REQUIRE(t.mean_abs_error.size() == 1);
    CHECK(t.mean_abs_error[0] == doctest::Approx(10.0));
}
