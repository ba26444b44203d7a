#include <doctest.h>

#include <cmath>

#include "mobimpute/analytic.hpp"
#include "mobimpute/geo.hpp"

using namespace mobimpute;

namespace {

// Direct O(n^2)-per-t evaluation of the mean-path deviation term, written
// exactly as the four separate sums; the library computes the collapsed
// prefix-sum form, so agreement checks both routes.
double mean_path_term_direct(const AnalyticModel& model, int t) {
    const int n = model.n;
    auto mu = [&](int i, int axis) {
        const auto [mx, my] = mean_displacement(model, i - 1);  // 1-based sums
        return axis == 0 ? mx : my;
    };
    double total = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        double s1 = 0.0;
        for (int i = 1; i <= t; ++i) s1 += mu(i, axis) * mu(i, axis);
        double s2 = 0.0;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) s2 += mu(i, axis) * mu(j, axis);
        s2 *= static_cast<double>(t) * t / (static_cast<double>(n) * n);
        double s3 = 0.0;
        for (int i = 1; i <= t; ++i)
            for (int j = 1; j <= n; ++j) s3 += mu(i, axis) * mu(j, axis);
        s3 *= 2.0 / n;
        double s4 = 0.0;
        for (int i = 1; i <= t; ++i) {
            for (int j = i + 1; j <= t; ++j) {
                double inner = mu(i, axis) * mu(j, axis);
                for (int k = 1; k <= n; ++k)
                    inner -= mu(k, axis) * (mu(i, axis) + mu(j, axis)) / n;
                s4 += 2.0 * inner;
            }
        }
        total += s1 + s2 - s3 + s4;
    }
    return total;
}

}  // namespace

TEST_CASE("mean_displacement geometry") {
    AnalyticModel m;
    m.n = 5;
    m.theta0 = (kPi / 2.0);
    m.d = 4.0;
    // angles: pi/2, pi/4, 0, -pi/4, -pi/2; amplitude 2
    auto [x0, y0] = mean_displacement(m, 0);
    CHECK(x0 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(y0 == doctest::Approx(2.0));
    auto [x2, y2] = mean_displacement(m, 2);
    CHECK(x2 == doctest::Approx(2.0));
    CHECK(y2 == doctest::Approx(0.0).epsilon(1e-12));
    auto [x4, y4] = mean_displacement(m, 4);
    CHECK(y4 == doctest::Approx(-2.0));

    CHECK_THROWS(mean_displacement(m, -1));
    CHECK_THROWS(mean_displacement(m, 5));

    SUBCASE("theta0 = 0 gives a straight line of constant steps") {
        AnalyticModel s;
        s.n = 10;
        s.theta0 = 0.0;
        s.d = 9.0;
        for (int t = 0; t < 10; ++t) {
            auto [mx, my] = mean_displacement(s, t);
            CHECK(mx == doctest::Approx(3.0));
            CHECK(my == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("expected_gap_hotdeck closed form") {
    AnalyticModel m;
    m.n = 50;
    m.sigma_x2 = 1.0;
    m.sigma_y2 = 1.0;
    CHECK(expected_gap_hotdeck(m) == doctest::Approx(98.0 / 3.0));
    m.theta0 = (kPi / 2.0);  // theta0-free
    CHECK(expected_gap_hotdeck(m) == doctest::Approx(98.0 / 3.0));
    m.sigma_y2 = 3.0;
    CHECK(expected_gap_hotdeck(m) == doctest::Approx(49.0 / 3.0 * 4.0));
}

TEST_CASE("mean_path_term matches the direct quadruple sum") {
    for (double theta0 : {0.0, (kPi / 2.0) / 2.0, (kPi / 2.0)}) {
        AnalyticModel m;
        m.n = 12;
        m.theta0 = theta0;
        m.d = 2.5;
        for (int t = 0; t <= m.n; ++t) {
            CHECK(mean_path_term(m, t) ==
                  doctest::Approx(mean_path_term_direct(m, t)).epsilon(1e-9));
        }
        CHECK(mean_path_term(m, 0) == doctest::Approx(0.0));
        CHECK(mean_path_term(m, m.n) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("constant mean displacement zeroes every term") {
        AnalyticModel s;
        s.n = 20;
        s.theta0 = 0.0;
        s.d = 7.0;
        for (int t = 0; t <= s.n; ++t) {
            CHECK(mean_path_term(s, t) == doctest::Approx(0.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("expected_gap_li reduces to exactly half at theta0 = 0") {
    for (int n : {10, 50, 200}) {
        AnalyticModel m;
        m.n = n;
        m.theta0 = 0.0;
        m.d = 5.0;
        CHECK(expected_gap_li(m) == doctest::Approx(0.5 * expected_gap_hotdeck(m)).epsilon(1e-12));
    }
}

TEST_CASE("Monte Carlo estimates converge to the closed forms") {
    AnalyticModel m;
    m.n = 50;
    m.theta0 = (kPi / 2.0) / 2.0;
    m.d = 1.0;

    const double mc_hd = monte_carlo_gap(m, GapMethod::HotdeckOracle, 2000, 11);
    CHECK(mc_hd == doctest::Approx(expected_gap_hotdeck(m)).epsilon(0.05));

    const double mc_li = monte_carlo_gap(m, GapMethod::LinearInterpolation, 2000, 12);
    CHECK(mc_li == doctest::Approx(expected_gap_li(m)).epsilon(0.05));

    SUBCASE("deterministic under a fixed seed") {
        CHECK(monte_carlo_gap(m, GapMethod::HotdeckOracle, 100, 11) ==
              monte_carlo_gap(m, GapMethod::HotdeckOracle, 100, 11));
    }
}

TEST_CASE("interpolation overtakes the hot deck on curved paths") {
    AnalyticModel m;
    m.n = 800;
    m.theta0 = (kPi / 2.0);
    m.d = 1.0;
    // closed forms first, then the simulation agrees in direction
    CHECK(expected_gap_li(m) > expected_gap_hotdeck(m));
    const double mc_li = monte_carlo_gap(m, GapMethod::LinearInterpolation, 200, 21);
    const double mc_hd = monte_carlo_gap(m, GapMethod::HotdeckOracle, 200, 21);
    CHECK(mc_li > mc_hd);

    SUBCASE("straight paths favor interpolation") {
        AnalyticModel s = m;
        s.theta0 = 0.0;
        CHECK(expected_gap_li(s) < expected_gap_hotdeck(s));
    }
}

TEST_CASE("jittered_semicircle bias experiment") {
    AnalyticModel m;
    m.n = 400;
    m.theta0 = (kPi / 2.0);
    m.d = 10000.0;   // 100 m mean steps
    m.sigma_x2 = 100.0;
    m.sigma_y2 = 100.0;

    const std::vector<double> fracs = {0.8, 0.5, 0.2, 0.0};
    const auto rows = jittered_semicircle(m, 1.0, fracs, 50, 0.05, 3);
    REQUIRE(rows.size() == fracs.size());

    for (const auto& r : rows) {
        CHECK(r.truth_dist > 0.0);
        // chord-summing can never beat the true path length
        CHECK(r.li_dist <= r.truth_dist + 1e-6);
        CHECK(r.tl_lo <= r.tl_mean + 1e-9);
        CHECK(r.tl_mean <= r.tl_hi + 1e-9);
    }
    // no missingness: both estimators recover the truth
    const auto& full = rows.back();
    CHECK(full.missing_fraction == 0.0);
    CHECK(full.li_dist == doctest::Approx(full.truth_dist).epsilon(1e-9));
    CHECK(full.tl_mean == doctest::Approx(full.truth_dist).epsilon(1e-9));

    // LI bias grows with missingness
    CHECK(rows[0].li_dist < rows[2].li_dist);
}
