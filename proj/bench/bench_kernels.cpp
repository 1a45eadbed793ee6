// Timings for the parallel kernels against their serial reference.
#include <chrono>
#include <cstdio>
#include <vector>

#include "atlas/map.hpp"
#include "atlas/orbit.hpp"
#include "atlas/parallel.hpp"
#include "atlas/periodic.hpp"
#include "atlas/regions.hpp"

using namespace atlas;
using clk = std::chrono::steady_clock;

namespace {

double seconds(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename Fn>
double time_it(Fn&& fn) {
    auto t0 = clk::now();
    fn();
    return seconds(t0, clk::now());
}

void report(const char* name, double serial_s, double parallel_s) {
    std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %5.2fx\n", name, serial_s,
                parallel_s, parallel_s > 0 ? serial_s / parallel_s : 0.0);
}

}  // namespace

int main() {
    LiftedMap map = LiftedMap::standard(0.9);
    std::printf("workers: %d\n", worker_count());

    {
        std::vector<LiftPoint> seeds;
        for (int i = 0; i < 256; ++i)
            seeds.push_back({0.31 + 0.37 * i / 256.0, -0.8 + 1.6 * i / 256.0});
        RotationInterval r1, r2;
        double s = time_it([&] { r1 = rotation_interval_of_set(map, seeds, 20000, Exec::Serial); });
        double p = time_it([&] { r2 = rotation_interval_of_set(map, seeds, 20000, Exec::OpenMP); });
        report("rotation_interval_of_set", s, p);
        if (r1.lo != r2.lo || r1.hi != r2.hi) std::printf("  MISMATCH\n");
    }

    {
        Window w{0.0, 1.0, -0.5, 0.5};
        std::vector<PeriodicOrbit> o1, o2;
        double s = time_it([&] { o1 = find_all_pq(map, 1, 3, w, 24, 24, {}, Exec::Serial); });
        double p = time_it([&] { o2 = find_all_pq(map, 1, 3, w, 24, 24, {}, Exec::OpenMP); });
        report("find_all_pq (1,3)", s, p);
        if (o1.size() != o2.size()) std::printf("  MISMATCH\n");
    }

    {
        Region region;
        region.y_lo = 0.55;
        region.y_hi = 0.75;
        Barrier upper;
        upper.band_lo = 0.72;
        upper.band_hi = 0.78;
        upper.graph_y.assign(64, 0.75);
        region.upper = upper;
        EscapeStats e1, e2;
        double s = time_it([&] {
            e1 = escape_time_stats(map, region, FrontierSide::Upper, 0.05, 400, 50000,
                                   Exec::Serial);
        });
        double p = time_it([&] {
            e2 = escape_time_stats(map, region, FrontierSide::Upper, 0.05, 400, 50000,
                                   Exec::OpenMP);
        });
        report("escape_time_stats", s, p);
        if (e1.n_escaped != e2.n_escaped) std::printf("  MISMATCH\n");
    }

    return 0;
}
