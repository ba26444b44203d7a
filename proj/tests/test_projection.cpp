#include <doctest.h>

#include <cmath>
#include <random>

#include "mobimpute/geo.hpp"

using namespace mobimpute;

namespace {

// Independent great-circle oracle.
double haversine_m(double lat1, double lon1, double lat2, double lon2) {
    const double d2r = kPi / 180.0;
    const double p1 = lat1 * d2r, p2 = lat2 * d2r;
    const double dp = (lat2 - lat1) * d2r, dl = (lon2 - lon1) * d2r;
    const double a = std::sin(dp / 2) * std::sin(dp / 2) +
                     std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(a));
}

}  // namespace

TEST_CASE("build_frame spans and distances") {
    SUBCASE("single record gives a degenerate frame") {
        GpsRecord r{0.0, 39.9, 116.3, -1.0};
        const auto f = build_frame(std::span(&r, 1));
        CHECK(f.d1 == 0.0);
        CHECK(f.d2 == 0.0);
        CHECK(f.d3 == 0.0);
    }
    SUBCASE("0.01 degree latitude span maps to the arc length") {
        std::vector<GpsRecord> recs = {{0, 0.0, 0.0, -1}, {1, 0.01, 0.01, -1}};
        const auto f = build_frame(recs);
        // arc-length oracle: delta_rad * R
        const double expected = 0.01 * kPi / 180.0 * kEarthRadiusM;
        CHECK(f.d1 == doctest::Approx(expected).epsilon(1e-9));
        CHECK(expected == doctest::Approx(1111.9).epsilon(1e-3));
    }
    SUBCASE("southern hemisphere has d2 > d3") {
        std::vector<GpsRecord> recs = {{0, -10.0, 30.0, -1}, {1, -9.0, 31.0, -1}};
        const auto f = build_frame(recs);
        CHECK(f.d2 > f.d3);
    }
    SUBCASE("northern hemisphere has d2 < d3") {
        std::vector<GpsRecord> recs = {{0, 40.0, 30.0, -1}, {1, 41.0, 31.0, -1}};
        const auto f = build_frame(recs);
        CHECK(f.d2 < f.d3);
    }
    SUBCASE("empty input throws") {
        CHECK_THROWS_WITH(build_frame({}), "empty trace");
    }
}

TEST_CASE("project corner mapping") {
    std::vector<GpsRecord> recs = {{0, 40.0, 30.0, -1}, {1, 40.5, 30.8, -1}};
    const auto f = build_frame(recs);

    const auto origin = project({0, 40.0, 30.0, -1}, f);
    CHECK(origin.x == doctest::Approx(0.0));
    CHECK(origin.y == doctest::Approx(0.0));

    const auto top_left = project({1, 40.5, 30.0, -1}, f);
    CHECK(top_left.x == doctest::Approx((f.d3 - f.d2) / 2.0));
    const double height = f.d1 * std::sin(std::acos((f.d3 - f.d2) / (2.0 * f.d1)));
    CHECK(top_left.y == doctest::Approx(height));

    CHECK_THROWS_WITH(project({0, 41.0, 30.0, -1}, f), "out of frame");
}

TEST_CASE("project near-equator distance matches haversine") {
    std::vector<GpsRecord> recs = {{0, 0.0, 10.0, -1}, {1, 0.002, 10.002, -1}};
    const auto f = build_frame(recs);
    const auto a = project({0, 0.001, 10.0, -1}, f);
    const auto b = project({1, 0.001, 10.001, -1}, f);
    const double truth = haversine_m(0.001, 10.0, 0.001, 10.001);
    CHECK(planar_distance(a, b) == doctest::Approx(truth).epsilon(0.01));
}

TEST_CASE("projection properties over random frames") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lat0(-60.0, 60.0);
    std::uniform_real_distribution<double> lon0(-170.0, 170.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);

    for (int trial = 0; trial < 50; ++trial) {
        const double la = lat0(rng), lo = lon0(rng);
        std::vector<GpsRecord> corners = {{0, la, lo, -1}, {1, la + 0.9, lo + 0.9, -1}};
        const auto f = build_frame(corners);

        for (int i = 0; i < 20; ++i) {
            GpsRecord p{0, la + 0.9 * frac(rng), lo + 0.9 * frac(rng), -1};
            GpsRecord q{0, la + 0.9 * frac(rng), lo + 0.9 * frac(rng), -1};
            const auto pp = project(p, f), pq = project(q, f);
            const double truth = haversine_m(p.lat, p.lon, q.lat, q.lon);
            if (truth > 1.0) {
                CHECK(planar_distance(pp, pq) == doctest::Approx(truth).epsilon(0.01));
            }
        }

        // monotonicity: x grows with longitude at fixed latitude, y with
        // latitude and is longitude-free
        const double mid_lat = la + 0.45;
        const auto m1 = project({0, mid_lat, lo + 0.2, -1}, f);
        const auto m2 = project({0, mid_lat, lo + 0.6, -1}, f);
        CHECK(m2.x > m1.x);
        CHECK(m1.y == doctest::Approx(m2.y));
        const auto n1 = project({0, la + 0.2, lo + 0.3, -1}, f);
        const auto n2 = project({0, la + 0.7, lo + 0.3, -1}, f);
        CHECK(n2.y > n1.y);
    }
}

TEST_CASE("zero-span frames degenerate without throwing") {
    std::vector<GpsRecord> recs = {{0, 40.0, 30.0, -1}, {1, 40.0, 30.0, -1}};
    const auto f = build_frame(recs);
    const auto p = project({5, 40.0, 30.0, -1}, f);
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
    CHECK(p.t == 5.0);
}
