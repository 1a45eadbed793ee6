#ifndef ATLAS_REGIONS_HPP
#define ATLAS_REGIONS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "atlas/manifold.hpp"
#include "atlas/map.hpp"
#include "atlas/orbit.hpp"
#include "atlas/periodic.hpp"
#include "atlas/parallel.hpp"

namespace atlas {

enum class BarrierDetector { GraphFit, TransportExclusion };

std::string barrier_detector_name(BarrierDetector d);

// Transport-excluding invariant-circle certificate: a band no sampled orbit
// crosses, carrying a rotation estimate with no periodic orbit found on it.
struct Barrier {
    BarrierDetector detector = BarrierDetector::TransportExclusion;
    std::vector<double> graph_y;  // y = psi(x) on uniform x nodes (GraphFit)
    double rotation_estimate = 0.0;
    double band_lo = 0.0, band_hi = 0.0;  // y-interval certified non-crossing
    std::int64_t n_cert = 0;

    double psi(double x) const;  // graph value (band midline without a graph)
    double distance_to(const LiftPoint& z) const;
};

struct BarrierOptions {
    int graph_nodes = 1024;
    std::int64_t orbit_len = 100'000;   // graph-fit orbit length
    double graph_tol = 5e-3;            // max per-node y spread for single-valued
    int n_band_seeds = 16;              // graph-fit candidate seeds across the band
    int n_transport_seeds = 100;
    int rational_q_max = 50;            // search depth for on-barrier periodic orbits
    int n_targets = 20;                 // noble rotation targets per band
};

std::optional<Barrier> detect_barrier(const LiftedMap& map, double y_lo, double y_hi,
                                      const std::vector<double>& target_rotations,
                                      std::int64_t n_cert,
                                      const BarrierOptions& opts = {},
                                      Exec exec = default_exec());

// Noble rotation targets in [lo, hi]: continued-fraction tails of 1s glued
// onto low-order rationals (Farey-neighbor mediants with the golden ratio).
std::vector<double> noble_targets(double lo, double hi, int count);

// Sub-annulus between two detected barriers (or the scan edges).
struct Region {
    std::optional<Barrier> lower, upper;  // nullopt: end of the scanned range
    double y_lo = 0.0, y_hi = 0.0;        // vertical extent of the gap
    RotationInterval rotation_interval;
    std::vector<PeriodicOrbit> inventory;
    std::vector<std::size_t> essential_idx;  // inventory indices certified essential
};

struct DecomposeOptions {
    BarrierOptions barrier;
    std::int64_t n_cert = 100'000;
    std::int64_t rotation_orbit_len = 20'000;
    int rotation_seeds_x = 4, rotation_seeds_y = 8;
    int inventory_q_max = 8;   // 0 disables the periodic-orbit inventory
    int inventory_grid = 24;
    NewtonOptions newton;
};

std::vector<Region> decompose(const LiftedMap& map, double y_lo, double y_hi,
                              int scan_resolution, const DecomposeOptions& opts = {},
                              Exec exec = default_exec());

struct ConnectingOrbitEvidence {
    LiftPoint start;
    double forward_min_dist_to_upper = 0.0;
    double backward_min_dist_to_lower = 0.0;
    std::int64_t n_forward = 0, n_backward = 0;
    bool success = false;
    bool frontier_missing = false;  // a scan edge stood in for a barrier
};

struct ConnectingOrbitOptions {
    int n_seeds = 32;
    std::int64_t n_steps = 1'000'000;
    double delta = 0.05;
};

// Best seed (lexicographic in the two attained distances) among seeds
// placed along the tangle directions of the region's saddles.
ConnectingOrbitEvidence connecting_orbit_search(const LiftedMap& map, const Region& region,
                                                const ConnectingOrbitOptions& opts = {},
                                                Exec exec = default_exec());

enum class FrontierSide { Upper, Lower };

struct EscapeStats {
    std::vector<std::int64_t> histogram;  // log2-binned escape times
    std::int64_t n_total = 0, n_escaped = 0;
    std::int64_t cap = 0;
    double band_width = 0.0;
};

// Escape times from the band W on the region side of a frontier; seeds
// within an exclusion distance of the barrier graph are skipped.
EscapeStats escape_time_stats(const LiftedMap& map, const Region& region,
                              FrontierSide side, double band_width, int n_seeds,
                              std::int64_t n_cap, Exec exec = default_exec());

// Periodic orbits lying entirely inside the frontier band, for all p/q with
// q <= q_max and p/q inside the band's sampled rotation interval.
std::vector<PeriodicOrbit> region_boundary_orbits(const LiftedMap& map, const Region& region,
                                                  FrontierSide side, double band_width,
                                                  int q_max,
                                                  const NewtonOptions& newton = {},
                                                  Exec exec = default_exec());

enum class CellClass : std::uint8_t { Unresolved = 0, HyperbolicNear = 1, EllipticNear = 2 };

struct CoverageReport {
    Window window;
    int nx = 0, ny = 0;
    double delta = 0.0;
    std::vector<std::uint8_t> cells;  // CellClass, row-major
    double h_fraction = 0.0, e_fraction = 0.0, unresolved_fraction = 0.0;
    int n_saddles = 0;
};

struct CoverageOptions {
    int saddle_budget = 10;
    int discovery_q_max = 6;
    int discovery_grid = 24;
    double stable_arclength = 400.0;
    GrowOptions grow;
    int barrier_scan = 16;
    std::int64_t n_cert = 20'000;
    NewtonOptions newton;
};

// Grid classification: cells within delta of a stable-manifold cloud are
// hyperbolic-near, cells on detected barriers or near elliptic points are
// elliptic-near, the rest unresolved.
CoverageReport coverage_report(const LiftedMap& map, const Window& window, int nx, int ny,
                               double delta, const CoverageOptions& opts = {},
                               Exec exec = default_exec());

}  // namespace atlas

#endif
