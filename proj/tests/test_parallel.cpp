#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "atlas/map.hpp"
#include "atlas/orbit.hpp"
#include "atlas/parallel.hpp"
#include "atlas/periodic.hpp"
#include "atlas/regions.hpp"

using namespace atlas;

TEST_CASE("par_for covers every index exactly once") {
    for (Exec exec : {Exec::Serial, Exec::OpenMP}) {
        std::vector<int> hits(1000, 0);
        par_for(1000, [&](std::size_t i) { hits[i] += 1; }, exec);
        for (int h : hits) CHECK(h == 1);
    }
}

TEST_CASE("worker count is settable") {
    int before = worker_count();
    set_worker_count(2);
    CHECK(worker_count() == 2);
    set_worker_count(before);
}

TEST_CASE("rotation_interval_of_set: serial and openmp agree bitwise") {
    LiftedMap f = LiftedMap::standard(0.9);
    std::vector<LiftPoint> seeds;
    for (int i = 0; i < 64; ++i) seeds.push_back({0.31 + 0.01 * i, -0.6 + 0.02 * i});
    RotationInterval a = rotation_interval_of_set(f, seeds, 5000, Exec::Serial);
    RotationInterval b = rotation_interval_of_set(f, seeds, 5000, Exec::OpenMP);
    CHECK(a.lo == b.lo);
    CHECK(a.hi == b.hi);
}

TEST_CASE("find_all_pq: serial and openmp give identical orbit lists") {
    LiftedMap f = LiftedMap::standard(0.9);
    Window w{0.0, 1.0, -0.4, 0.4};
    auto a = find_all_pq(f, 0, 1, w, 12, 12, {}, Exec::Serial);
    auto b = find_all_pq(f, 0, 1, w, 12, 12, {}, Exec::OpenMP);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].points[0].x == b[i].points[0].x);
        CHECK(a[i].points[0].y == b[i].points[0].y);
        CHECK(a[i].residue == b[i].residue);
    }
}

TEST_CASE("escape_time_stats: serial and openmp agree") {
    LiftedMap f = LiftedMap::standard(2.0);
    Region region;
    region.y_lo = -0.2;
    region.y_hi = 0.45;
    Barrier upper;
    upper.band_lo = 0.45;
    upper.band_hi = 0.5;
    upper.graph_y.assign(64, 0.47);
    region.upper = upper;
    EscapeStats a = escape_time_stats(f, region, FrontierSide::Upper, 0.1, 200, 20000,
                                      Exec::Serial);
    EscapeStats b = escape_time_stats(f, region, FrontierSide::Upper, 0.1, 200, 20000,
                                      Exec::OpenMP);
    CHECK(a.n_total == b.n_total);
    CHECK(a.n_escaped == b.n_escaped);
    REQUIRE(a.histogram.size() == b.histogram.size());
    for (std::size_t i = 0; i < a.histogram.size(); ++i)
        CHECK(a.histogram[i] == b.histogram[i]);
}

TEST_CASE("exceptions inside kernels surface once") {
    CHECK_THROWS(par_for(16, [&](std::size_t i) {
        if (i == 7) throw std::runtime_error("boom");
    }, Exec::OpenMP));
}
