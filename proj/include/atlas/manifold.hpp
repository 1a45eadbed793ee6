#ifndef ATLAS_MANIFOLD_HPP
#define ATLAS_MANIFOLD_HPP

#include <optional>
#include <vector>

#include "atlas/geometry.hpp"
#include "atlas/map.hpp"
#include "atlas/periodic.hpp"

namespace atlas {

enum class BranchKind { Stable, Unstable };
enum class BranchSign { Plus, Minus };

std::string branch_kind_name(BranchKind k);
std::string branch_sign_name(BranchSign s);

// One component of W^s(z) or W^u(z) minus the saddle, as an adaptive
// polyline parameterized from the saddle outward. The parameter s encodes
// fundamental-domain position frac(s) and iteration depth floor(s):
//   point(s) = f^(Q*floor(s)) (z + eps * lambda^frac(s) * v)
// with Q = q (or 2q when the large eigenvalue is negative).
struct Branch {
    PeriodicOrbit owner;
    BranchKind kind = BranchKind::Unstable;
    BranchSign sign = BranchSign::Plus;
    double eps = 1e-7;

    // Linearization data fixed at seeding time.
    struct SeedData {
        LiftPoint saddle;
        LiftPoint dir;           // unit eigenvector, sign applied
        double lambda = 0.0;     // expansion per level (> 1)
        int steps_per_level = 1; // q, or 2q when the eigenvalue is negative
    };
    SeedData seed_data;
    std::vector<double> params;      // increasing s values
    std::vector<LiftPoint> polyline; // lift coordinates, from the saddle outward
    double arclength = 0.0;
    double max_gap = 1e-3;
    double max_turn = 0.2;
    bool truncated = false;

    // Cumulative arclength at each polyline vertex.
    std::vector<double> cumlen;
};

struct HeteroclinicPoint {
    LiftPoint location;        // annulus coordinates (x reduced mod 1)
    double arclength_from = 0; // along the first (unstable-side) branch
    double arclength_to = 0;   // along the second branch
    double crossing_angle = 0; // radians in (0, pi/2]
    bool near_tangency = false;
};

struct GrowOptions {
    double max_gap = 1e-3;
    double max_turn = 0.2;
    std::size_t point_cap = 2'000'000;
};

// Initial fundamental segment along the appropriate eigenvector,
// >= 8 sample points; throws NotHyperbolic / InvalidEps.
Branch branch_seed(const LiftedMap& map, const PeriodicOrbit& orbit,
                   BranchKind kind, BranchSign sign, double eps = 1e-7,
                   int n_samples = 16);

// Extends the seed by iterating the fundamental segment, inserting
// midpoints (pulled back through the parameterization) whenever a gap or
// turning angle exceeds its bound. Sets `truncated` at the point cap.
Branch grow_branch(const LiftedMap& map, const Branch& seed,
                   double target_arclength, const GrowOptions& opts = {});

// Convenience: seed + grow.
Branch grow_branch(const LiftedMap& map, const PeriodicOrbit& orbit,
                   BranchKind kind, BranchSign sign, double target_arclength,
                   const GrowOptions& opts = {}, double eps = 1e-7);

// All transversal crossings of the two polylines in the annulus metric
// (x mod 1), ordered along b1. Requires b1.kind != b2.kind.
std::vector<HeteroclinicPoint> branch_intersections(const Branch& b1,
                                                    const Branch& b2);

struct PrimaryHomoclinicOptions {
    double initial_arclength = 1.0;
    double arclength_cap = 256.0;
    GrowOptions grow;
    double min_distance_from_saddle = 1e-5;
};

// Crossing with smallest arclength along the unstable branch, searching all
// four sign combinations with doubling arclength. Throws NotFoundWithinCap.
HeteroclinicPoint primary_homoclinic(const LiftedMap& map, const PeriodicOrbit& orbit,
                                     const PrimaryHomoclinicOptions& opts = {});

}  // namespace atlas

#endif
