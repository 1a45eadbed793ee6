#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "atlas/errors.hpp"
#include "atlas/regions.hpp"
#include "oracles.hpp"

using namespace atlas;

namespace {

Region synthetic_region(double y_lo, double y_hi, double band) {
    Region r;
    r.y_lo = y_lo;
    r.y_hi = y_hi;
    Barrier lower, upper;
    lower.band_lo = y_lo - band;
    lower.band_hi = y_lo;
    lower.graph_y.assign(64, y_lo - band / 2);
    upper.band_lo = y_hi;
    upper.band_hi = y_hi + band;
    upper.graph_y.assign(64, y_hi + band / 2);
    r.lower = lower;
    r.upper = upper;
    return r;
}

}  // namespace

TEST_CASE("noble targets avoid low-order rationals") {
    auto t = noble_targets(0.3, 0.7, 12);
    REQUIRE(t.size() == 12);
    for (double v : t) {
        CHECK(v >= 0.3);
        CHECK(v <= 0.7);
        for (int q = 1; q <= 20; ++q) {
            double p = std::round(v * q);
            CHECK(std::abs(v - p / q) * q * q > 0.08);
        }
    }
    // Deterministic and sorted.
    auto t2 = noble_targets(0.3, 0.7, 12);
    CHECK(t == t2);
    CHECK(std::is_sorted(t.begin(), t.end()));
}

TEST_CASE("barrier graph interpolation and distance") {
    Barrier b;
    b.detector = BarrierDetector::GraphFit;
    b.band_lo = 0.4;
    b.band_hi = 0.6;
    int n = 64;
    for (int i = 0; i < n; ++i)
        b.graph_y.push_back(0.5 + 0.05 * std::sin(2 * oracle::kPi * i / n));
    CHECK(b.psi(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.psi(0.25) == doctest::Approx(0.55).epsilon(1e-3));
    CHECK(b.psi(1.0) == doctest::Approx(b.psi(0.0)).epsilon(1e-12));  // periodic
    CHECK(b.distance_to({0.0, 0.7}) == doctest::Approx(0.2).epsilon(1e-6));

    Barrier band_only;
    band_only.band_lo = 0.4;
    band_only.band_hi = 0.6;
    CHECK(band_only.psi(0.3) == doctest::Approx(0.5));
}

TEST_CASE("an invariant circle below criticality is detected as a graph") {
    // The golden-mean circle of the standard map survives at k = 0.9; its
    // rotation number is 1/phi = 0.6180...
    LiftedMap f = LiftedMap::standard(0.9);
    auto targets = noble_targets(0.55, 0.68, 8);
    auto found = detect_barrier(f, 0.55, 0.68, targets, 50'000);
    REQUIRE(found.has_value());
    CHECK(found->detector == BarrierDetector::GraphFit);
    CHECK(found->band_lo < found->band_hi);
    CHECK(found->rotation_estimate > 0.55);
    CHECK(found->rotation_estimate < 0.68);
    // Graph stays inside the certified band.
    for (double y : found->graph_y) {
        CHECK(y >= found->band_lo - 1e-9);
        CHECK(y <= found->band_hi + 1e-9);
    }
    // Independent transport oracle: nothing crosses the certified band.
    CHECK_FALSE(oracle::standard_crosses_band(0.9L, found->band_lo - 0.05,
                                              found->band_hi + 0.05, 40, 50'000));
    // The graph is invariant: images of graph points stay on the graph.
    for (int i = 0; i < 16; ++i) {
        double x = (i + 0.5) / 16.0;
        LiftPoint w = f.apply({x, found->psi(x)});
        CHECK(std::abs(w.y - found->psi(w.x)) < 0.01);
    }
}

TEST_CASE("no barrier survives deep in the chaotic regime") {
    // k = 2.0 is far above critical: transport crosses every band.
    LiftedMap f = LiftedMap::standard(2.0);
    auto targets = noble_targets(0.3, 0.7, 8);
    auto found = detect_barrier(f, 0.3, 0.7, targets, 50'000);
    CHECK_FALSE(found.has_value());
    CHECK(oracle::standard_crosses_band(2.0L, 0.3, 0.7, 40, 50'000));
}

TEST_CASE("decompose splits an annulus range at its barriers") {
    LiftedMap f = LiftedMap::standard(0.9);
    DecomposeOptions opts;
    opts.n_cert = 20'000;
    opts.barrier.orbit_len = 40'000;
    opts.inventory_q_max = 3;
    auto regions = decompose(f, 0.05, 0.95, 12, opts);
    REQUIRE(!regions.empty());
    double prev_hi = -1e300;
    for (const auto& r : regions) {
        CHECK(r.y_lo < r.y_hi);
        CHECK(r.y_lo >= prev_hi - 1e-12);
        prev_hi = r.y_hi;
        // Frontier consistency.
        if (r.lower) CHECK(r.lower->band_hi <= r.y_lo + 1e-9);
        if (r.upper) CHECK(r.upper->band_lo >= r.y_hi - 1e-9);
        CHECK(r.rotation_interval.lo <= r.rotation_interval.hi);
        for (const auto& o : r.inventory) {
            CHECK(o.q <= 3);
            // Inventory orbits are anchored inside the region band.
            CHECK(o.representative().y >= r.y_lo - 1e-9);
            CHECK(o.representative().y <= r.y_hi + 1e-9);
        }
    }
    // Ends of the scan have open frontiers.
    CHECK_FALSE(regions.front().lower.has_value());
    CHECK_FALSE(regions.back().upper.has_value());
    // The golden circle separates two of the detected regions: some frontier
    // is a graph whose rotation number falls in (0.55, 0.68).
    bool split_at_golden = false;
    auto in_window = [](const std::optional<Barrier>& b) {
        return b && b->detector == BarrierDetector::GraphFit &&
               b->rotation_estimate > 0.55 && b->rotation_estimate < 0.68;
    };
    for (const auto& r : regions)
        if (in_window(r.upper) || in_window(r.lower)) split_at_golden = true;
    CHECK(split_at_golden);
}

TEST_CASE("escape time statistics from a frontier band") {
    LiftedMap f = LiftedMap::standard(2.0);
    Region r = synthetic_region(-0.45, 0.45, 0.05);
    EscapeStats st = escape_time_stats(f, r, FrontierSide::Upper, 0.1, 300, 20'000);
    CHECK(st.n_total > 0);
    CHECK(st.n_total <= 300);
    CHECK(st.n_escaped <= st.n_total);
    CHECK(std::accumulate(st.histogram.begin(), st.histogram.end(), std::int64_t{0}) ==
          st.n_escaped);
    // Global chaos: essentially everything leaves.
    CHECK(st.n_escaped == st.n_total);
    CHECK(st.cap == 20'000);

    CHECK_THROWS_AS(escape_time_stats(f, r, FrontierSide::Upper, -0.1, 10, 100),
                    InvalidBand);
    // Without a barrier the region edge stands in for the frontier graph.
    Region open_region;
    open_region.y_lo = -0.5;
    open_region.y_hi = 0.5;
    EscapeStats open_st =
        escape_time_stats(f, open_region, FrontierSide::Upper, 0.1, 50, 5000);
    CHECK(open_st.n_total > 0);
}

TEST_CASE("boundary orbits of a resonant band") {
    // The (1,2) resonance of the standard map sits at y = 1/2. The search
    // band hangs from the frontier graph into the region, so a graph at
    // y = 0.55 with width 0.1 covers y in [0.45, 0.55] and must contain
    // the period-2 orbits.
    LiftedMap f = LiftedMap::standard(0.9);
    Region r;
    r.y_lo = 0.1;
    r.y_hi = 0.55;
    Barrier upper;
    upper.band_lo = 0.53;
    upper.band_hi = 0.57;
    upper.graph_y.assign(64, 0.55);
    r.upper = upper;
    auto orbits = region_boundary_orbits(f, r, FrontierSide::Upper, 0.1, 2);
    REQUIRE(!orbits.empty());
    for (const auto& o : orbits) {
        CHECK(o.p == 1);
        CHECK(o.q == 2);
        for (const auto& z : o.points) {
            CHECK(z.y >= 0.45 - 1e-6);
            CHECK(z.y <= 0.55 + 1e-6);
        }
        // Independent residual check.
        CHECK(oracle::standard_pq_residual({o.points[0].x, o.points[0].y}, 0.9L, 1, 2) <
              1e-8);
    }
}

TEST_CASE("connecting orbit in the globally chaotic regime") {
    LiftedMap f = LiftedMap::standard(2.0);
    Region r = synthetic_region(-0.45, 0.45, 0.05);
    // Give the search the central saddle to seed its tangle sweep.
    auto saddle = newton_pq(f, {0.49, 0.02}, 0, 1);
    REQUIRE(saddle.status == NewtonStatus::Converged);
    r.inventory.push_back(saddle.orbit);
    ConnectingOrbitOptions opts;
    opts.n_steps = 200'000;
    opts.delta = 0.05;
    ConnectingOrbitEvidence ev = connecting_orbit_search(f, r, opts);
    CHECK(ev.success);
    CHECK(ev.forward_min_dist_to_upper <= opts.delta);
    CHECK(ev.backward_min_dist_to_lower <= opts.delta);
    CHECK_FALSE(ev.frontier_missing);
    CHECK(ev.n_forward > 0);

    // Re-run the winning seed independently: forward orbit really does get
    // within delta of the upper frontier graph.
    LiftPoint z = ev.start;
    double best = 1e300;
    for (std::int64_t n = 0; n < opts.n_steps && best > opts.delta; ++n) {
        z = f.apply(z);
        best = std::min(best, r.upper->distance_to(z));
    }
    CHECK(best <= opts.delta);
}

TEST_CASE("missing frontier is reported") {
    LiftedMap f = LiftedMap::standard(2.0);
    Region r = synthetic_region(-0.45, 0.45, 0.05);
    r.upper.reset();  // scan edge instead of a barrier
    auto saddle = newton_pq(f, {0.49, 0.02}, 0, 1);
    REQUIRE(saddle.status == NewtonStatus::Converged);
    r.inventory.push_back(saddle.orbit);
    ConnectingOrbitOptions opts;
    opts.n_steps = 50'000;
    ConnectingOrbitEvidence ev = connecting_orbit_search(f, r, opts);
    CHECK(ev.frontier_missing);
}

TEST_CASE("coverage report classifies a mixed window") {
    LiftedMap f = LiftedMap::standard(0.9);
    Window w{0.0, 1.0, -0.3, 0.3};
    CoverageOptions opts;
    opts.saddle_budget = 2;
    opts.discovery_q_max = 2;
    opts.stable_arclength = 30.0;
    CoverageReport rep = coverage_report(f, w, 48, 32, 0.03, opts);
    CHECK(rep.nx == 48);
    CHECK(rep.ny == 32);
    REQUIRE(rep.cells.size() == 48u * 32u);
    CHECK(rep.n_saddles >= 1);
    double sum = rep.h_fraction + rep.e_fraction + rep.unresolved_fraction;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.h_fraction > 0.0);
    // Fractions match the cell grid.
    std::int64_t h = 0;
    for (auto c : rep.cells)
        if (c == static_cast<std::uint8_t>(CellClass::HyperbolicNear)) ++h;
    CHECK(rep.h_fraction == doctest::Approx(double(h) / (48.0 * 32.0)).epsilon(1e-12));
    // The saddle itself lies in a hyperbolic-near cell.
    int ix = static_cast<int>(0.5 * 48), iy = static_cast<int>((0.0 - w.y0) / 0.6 * 32);
    CHECK(rep.cells[static_cast<std::size_t>(iy) * 48 + ix] ==
          static_cast<std::uint8_t>(CellClass::HyperbolicNear));
}
