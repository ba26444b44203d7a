#include <doctest.h>

#include <cmath>
#include <map>

#include "mobimpute/imputer.hpp"

using namespace mobimpute;

namespace {

Event make_event(EventKind kind, double x, double y, double t, double dx, double dy,
                 double dt, bool observed = true) {
    Event e;
    e.kind = kind;
    e.x = x; e.y = y; e.t = t;
    e.dx = dx; e.dy = dy; e.dt = dt;
    e.observed = observed;
    return e;
}

// Chain of alternating flight/pause events starting at the origin.
MobilityTrace alternating_trace(int n_events) {
    MobilityTrace tr;
    double x = 0, y = 0, t = 0;
    for (int i = 0; i < n_events; ++i) {
        if (i % 2 == 0) {
            tr.events.push_back(make_event(EventKind::Flight, x, y, t, 100, 0, 60));
            x += 100;
            t += 60;
        } else {
            tr.events.push_back(make_event(EventKind::Pause, x, y, t, 0, 0, 120));
            t += 120;
        }
    }
    return tr;
}

KernelSpec uniform_spec() {
    // Spatially flat GL kernel: scale so small that all weights coincide.
    KernelSpec s = KernelSpec::make(KernelFamily::GL);
    s.c = 1e-15;
    return s;
}

}  // namespace

TEST_CASE("estimate_psi on constructed traces") {
    const auto spec = uniform_spec();
    SUBCASE("all flights gives psi = 1") {
        MobilityTrace tr;
        double t = 0;
        for (int i = 0; i < 6; ++i) {
            tr.events.push_back(make_event(EventKind::Flight, 0, 0, t, 50, 0, 30));
            t += 30;
        }
        const auto pool = EmpiricalPool::from_trace(tr);
        CHECK(estimate_psi(pool, spec, {0, 0, 0}) == doctest::Approx(1.0));
    }
    SUBCASE("strict alternation gives psi = 0") {
        const auto pool = EmpiricalPool::from_trace(alternating_trace(10));
        CHECK(estimate_psi(pool, spec, {0, 0, 0}) == doctest::Approx(0.0));
    }
    SUBCASE("pairs {FF, FP} give psi = 1/2") {
        MobilityTrace tr;
        tr.events.push_back(make_event(EventKind::Flight, 0, 0, 0, 50, 0, 30));
        tr.events.push_back(make_event(EventKind::Flight, 50, 0, 30, 50, 0, 30));
        tr.events.push_back(make_event(EventKind::Pause, 100, 0, 60, 0, 0, 60));
        const auto pool = EmpiricalPool::from_trace(tr);
        CHECK(estimate_psi(pool, spec, {0, 0, 0}) == doctest::Approx(0.5));
    }
    SUBCASE("all-pause trace falls back to the flight fraction") {
        MobilityTrace tr;
        tr.events.push_back(make_event(EventKind::Pause, 0, 0, 0, 0, 0, 60));
        const auto pool = EmpiricalPool::from_trace(tr);
        bool fb = false;
        CHECK(estimate_psi(pool, spec, {0, 0, 0}, &fb) == doctest::Approx(0.0));
        CHECK(fb);
    }
}

TEST_CASE("sample_event donor selection") {
    rng::Stream stream(42);
    SUBCASE("single donor is always chosen") {
        MobilityTrace tr;
        tr.events.push_back(make_event(EventKind::Flight, 0, 0, 0, 77, -3, 45));
        const auto pool = EmpiricalPool::from_trace(tr);
        for (int i = 0; i < 20; ++i) {
            const auto e = sample_event(pool, uniform_spec(), {0, 0, 0}, true, stream);
            CHECK(e.dx == doctest::Approx(77.0));
            CHECK(e.dy == doctest::Approx(-3.0));
        }
    }
    SUBCASE("equal weights split draws evenly (binomial bound)") {
        MobilityTrace tr;
        tr.events.push_back(make_event(EventKind::Flight, 0, 0, 0, 1, 0, 10));
        tr.events.push_back(make_event(EventKind::Flight, 1, 0, 10, 2, 0, 10));
        const auto pool = EmpiricalPool::from_trace(tr);
        const int n = 10000;
        int first = 0;
        for (int i = 0; i < n; ++i) {
            const auto e = sample_event(pool, uniform_spec(), {0, 0, 0}, true, stream);
            if (e.dx == 1.0) ++first;
        }
        // 3 sigma around n/2
        const double sigma = std::sqrt(n * 0.25);
        CHECK(std::abs(first - n / 2) < 3.0 * sigma);
    }
    SUBCASE("TL weights bias selection by the density ratio") {
        MobilityTrace tr;
        tr.events.push_back(make_event(EventKind::Flight, 0, 0, 0, 1, 0, 10));
        tr.events.push_back(make_event(EventKind::Flight, 0, 0, 12 * 3600, 2, 0, 10));
        const auto pool = EmpiricalPool::from_trace(tr);
        const auto spec = KernelSpec::make(KernelFamily::TL, 1.0);  // c = 1/3600

        const double w0 = t_density(0.0, 1.0);
        const double w1 = t_density(12.0, 1.0);
        const double p = w0 / (w0 + w1);

        const int n = 10000;
        int near = 0;
        for (int i = 0; i < n; ++i) {
            const auto e = sample_event(pool, spec, {0, 0, 0}, true, stream);
            if (e.dx == 1.0) ++near;
        }
        const double sigma = std::sqrt(n * p * (1 - p));
        CHECK(std::abs(near - p * n) < 3.0 * sigma);
    }
    SUBCASE("empty pool throws") {
        EmpiricalPool pool;
        CHECK_THROWS_WITH(sample_event(pool, uniform_spec(), {0, 0, 0}, true, stream),
                          "no donors");
    }
}

TEST_CASE("linear_interpolate baseline") {
    MissingInterval gap;
    gap.t_start = 0;
    gap.t_end = 600;
    gap.anchor_start = {0, 0, 0};
    gap.anchor_end = {600, 0, 600};
    const auto imp = linear_interpolate(gap);
    REQUIRE(imp.events.size() == 1);
    CHECK(imp.events[0].kind == EventKind::Flight);
    CHECK(imp.events[0].dx == doctest::Approx(600.0));
    CHECK(imp.events[0].dt == doctest::Approx(600.0));  // 1 m/s

    SUBCASE("coincident anchors give a pause") {
        gap.anchor_end = {0, 0, 600};
        const auto p = linear_interpolate(gap);
        REQUIRE(p.events.size() == 1);
        CHECK(p.events[0].kind == EventKind::Pause);
        CHECK(p.events[0].dt == doctest::Approx(600.0));
    }
    SUBCASE("midpoint convexity") {
        // path position halfway through is the anchor midpoint
        const auto& e = imp.events[0];
        CHECK(e.x + 0.5 * e.dx == doctest::Approx(300.0));
    }
}

TEST_CASE("bridge anchors and straightness") {
    MissingInterval gap;
    gap.t_start = 100;
    gap.t_end = 700;
    gap.anchor_start = {10, 20, 100};
    gap.anchor_end = {400, -50, 700};

    SUBCASE("zero simulated displacement collapses to linear interpolation") {
        std::vector<Event> raw = {make_event(EventKind::Pause, 0, 0, 0, 0, 0, 600, false)};
        const auto b = bridge(raw, gap);
        REQUIRE(b.events.size() == 1);
        CHECK(b.events[0].x == doctest::Approx(10.0));
        CHECK(b.events[0].y == doctest::Approx(20.0));
        CHECK(b.events[0].x_end() == doctest::Approx(400.0));
        CHECK(b.events[0].y_end() == doctest::Approx(-50.0));
    }
    SUBCASE("interior waypoint follows the time-weighted blend") {
        // raw displacements sum exactly to anchor_end - anchor_start; the
        // waypoint halfway through still blends the partial sum with the
        // far anchor: 0.5 * (10 + 200) + 0.5 * 400 = 305
        std::vector<Event> raw;
        raw.push_back(make_event(EventKind::Flight, 0, 0, 0, 200, -30, 300, false));
        raw.push_back(make_event(EventKind::Flight, 0, 0, 0, 190, -20, 300, false));
        const auto b = bridge(raw, gap);
        REQUIRE(b.events.size() == 2);
        CHECK(b.events[0].x_end() == doctest::Approx(0.5 * 210.0 + 0.5 * 400.0));
        CHECK(b.events[0].y_end() == doctest::Approx(0.5 * -10.0 + 0.5 * -50.0));
        CHECK(b.events[1].x_end() == doctest::Approx(400.0));
        CHECK(b.events[1].y_end() == doctest::Approx(-50.0));
    }
    SUBCASE("random simulations anchor exactly") {
        rng::Stream stream(123);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Event> raw;
            double total = 0.0;
            while (total < 550.0) {
                const double dt = 30.0 + 100.0 * stream.uniform();
                raw.push_back(make_event(EventKind::Flight, 0, 0, 0,
                                         stream.normal() * 100.0, stream.normal() * 100.0,
                                         dt, false));
                total += dt;
            }
            raw.back().dt += 600.0 - total;
            const auto b = bridge(raw, gap);
            CHECK(b.events.front().x == doctest::Approx(10.0).epsilon(1e-12));
            CHECK(b.events.front().y == doctest::Approx(20.0).epsilon(1e-12));
            CHECK(std::abs(b.events.back().x_end() - 400.0) < 1e-9);
            CHECK(std::abs(b.events.back().y_end() + 50.0) < 1e-9);
            double span = 0.0;
            for (const auto& e : b.events) span += e.dt;
            CHECK(span == doctest::Approx(600.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("simulate_gap") {
    MobilityTrace tr = alternating_trace(20);
    MissingInterval gap;
    gap.t_start = tr.events.back().t_end();
    gap.t_end = gap.t_start + 900.0;
    gap.anchor_start = {tr.events.back().x_end(), 0, gap.t_start};
    gap.anchor_end = {tr.events.back().x_end() + 300.0, 0, gap.t_end};
    tr.gaps.push_back(gap);

    const auto pool = EmpiricalPool::from_trace(tr);
    const auto spec = uniform_spec();

    SUBCASE("imputed events tile the gap and avoid double pauses") {
        for (std::uint64_t s = 0; s < 50; ++s) {
            auto stream = rng::derive_stream(s, 0, 0);
            const auto imp = simulate_gap(tr, gap, pool, spec, stream);
            double span = 0.0;
            for (const auto& e : imp.events) span += e.dt;
            CHECK(span == doctest::Approx(900.0).epsilon(1e-9));
            for (std::size_t i = 1; i < imp.events.size(); ++i) {
                CHECK_FALSE((imp.events[i - 1].kind == EventKind::Pause &&
                             imp.events[i].kind == EventKind::Pause));
            }
            CHECK(std::abs(imp.events.front().x - gap.anchor_start.x) < 1e-9);
            CHECK(std::abs(imp.events.back().x_end() - gap.anchor_end.x) < 1e-9);
        }
    }
    SUBCASE("gap shorter than any donor degenerates to linear interpolation") {
        MissingInterval tiny = gap;
        tiny.t_end = tiny.t_start + 5.0;
        tiny.anchor_end.t = tiny.t_end;
        auto stream = rng::derive_stream(1, 0, 0);
        const auto imp = simulate_gap(tr, tiny, pool, spec, stream);
        REQUIRE(imp.events.size() == 1);
        CHECK(imp.events[0].dt == doctest::Approx(5.0));
    }
    SUBCASE("pause-only pool keeps the path at the anchor") {
        MobilityTrace still;
        still.events.push_back(make_event(EventKind::Pause, 5, 5, 0, 0, 0, 3600));
        MissingInterval g;
        g.t_start = 3600;
        g.t_end = 7200;
        g.anchor_start = {5, 5, 3600};
        g.anchor_end = {5, 5, 7200};
        const auto p2 = EmpiricalPool::from_trace(still);
        auto stream = rng::derive_stream(2, 0, 0);
        const auto imp = simulate_gap(still, g, p2, spec, stream);
        for (const auto& e : imp.events) {
            CHECK(std::abs(e.x - 5.0) < 1e-9);
            CHECK(std::abs(e.x_end() - 5.0) < 1e-9);
        }
        CHECK(imp.psi_fallback);
    }
}

TEST_CASE("impute_trace determinism and no-gap identity") {
    MobilityTrace tr = alternating_trace(12);
    SUBCASE("no gaps returns the input for every replicate") {
        const auto reps = impute_trace(tr, uniform_spec(), 5, 99);
        for (const auto& r : reps) {
            REQUIRE(r.events.size() == tr.events.size());
            for (std::size_t i = 0; i < tr.events.size(); ++i) {
                CHECK(r.events[i].dx == tr.events[i].dx);
            }
        }
    }
    SUBCASE("same seed twice is bit-identical") {
        // heterogeneous donors so different seeds pick different events
        tr.events.clear();
        double x = 0, t = 0;
        for (int i = 0; i < 12; ++i) {
            if (i % 2 == 0) {
                const double dx = 50.0 + 15.0 * i;
                tr.events.push_back(make_event(EventKind::Flight, x, 0, t, dx, 0, 30.0 + 5.0 * i));
                x += dx;
                t += 30.0 + 5.0 * i;
            } else {
                tr.events.push_back(make_event(EventKind::Pause, x, 0, t, 0, 0, 60.0 + 20.0 * i));
                t += 60.0 + 20.0 * i;
            }
        }
        MissingInterval gap;
        gap.t_start = tr.events.back().t_end();
        gap.t_end = gap.t_start + 1200.0;
        gap.anchor_start = {tr.events.back().x_end(), 0, gap.t_start};
        gap.anchor_end = {tr.events.back().x_end() + 150.0, 40, gap.t_end};
        tr.gaps.push_back(gap);

        const auto a = impute_trace(tr, uniform_spec(), 8, 7);
        const auto b = impute_trace(tr, uniform_spec(), 8, 7);
        REQUIRE(a.size() == b.size());
        for (std::size_t r = 0; r < a.size(); ++r) {
            REQUIRE(a[r].events.size() == b[r].events.size());
            for (std::size_t i = 0; i < a[r].events.size(); ++i) {
                CHECK(a[r].events[i].x == b[r].events[i].x);
                CHECK(a[r].events[i].dx == b[r].events[i].dx);
                CHECK(a[r].events[i].dt == b[r].events[i].dt);
            }
        }
        // different seeds diverge
        const auto c = impute_trace(tr, uniform_spec(), 8, 8);
        bool any_diff = false;
        for (std::size_t r = 0; r < a.size() && !any_diff; ++r) {
            if (a[r].events.size() != c[r].events.size()) any_diff = true;
        }
        // (sizes can coincide; compare content of first replicate too)
        if (!any_diff) {
            for (std::size_t i = 0; i < a[0].events.size(); ++i) {
                if (a[0].events[i].x != c[0].events[i].x) { any_diff = true; break; }
            }
        }
        CHECK(any_diff);
    }
}

TEST_CASE("confidence_interval order statistics") {
    SUBCASE("ranks 3 and 97 for B=100, alpha=0.05") {
        std::vector<double> vals;
        for (int i = 100; i >= 1; --i) vals.push_back(i);
        const auto [lo, hi] = confidence_interval(vals, 0.05);
        CHECK(lo == doctest::Approx(3.0));
        CHECK(hi == doctest::Approx(97.0));
    }
    SUBCASE("constant values collapse") {
        const auto [lo, hi] = confidence_interval({5, 5, 5, 5}, 0.05);
        CHECK(lo == 5.0);
        CHECK(hi == 5.0);
    }
    SUBCASE("alpha toward 1 collapses toward the median ranks") {
        std::vector<double> vals;
        for (int i = 1; i <= 100; ++i) vals.push_back(i);
        const auto [lo1, hi1] = confidence_interval(vals, 0.5);
        const auto [lo2, hi2] = confidence_interval(vals, 0.9);
        CHECK(lo2 >= lo1);
        CHECK(hi2 <= hi1);
        CHECK(lo2 <= hi2);
    }
    SUBCASE("fewer than two values throws") {
        CHECK_THROWS(confidence_interval({1.0}, 0.05));
    }
}
