#ifndef ATLAS_TOPOLOGY_HPP
#define ATLAS_TOPOLOGY_HPP

#include <optional>
#include <vector>

#include "atlas/manifold.hpp"
#include "atlas/map.hpp"
#include "atlas/periodic.hpp"

namespace atlas {

// Occupancy grid over one fundamental annulus band; x periodic.
struct SeparationMask {
    int nx = 0, ny = 0;
    double y_min = 0.0, y_max = 0.0;
    double cell = 0.0;
    std::vector<uint8_t> occupied;  // row-major, ny rows of nx

    bool at(int ix, int iy) const {
        ix = ((ix % nx) + nx) % nx;
        return occupied[static_cast<size_t>(iy) * nx + ix] != 0;
    }
};

enum class EssentialityStatus { Essential, NotFoundUpTo };

struct EssentialityVerdict {
    EssentialityStatus status = EssentialityStatus::NotFoundUpTo;
    // Essential: closed polyline in the lift whose endpoints differ by T^{+-1}.
    std::vector<LiftPoint> certificate_curve;
    int winding = 0;          // +-1 for a certificate
    double search_arclength = 0.0;
    double resolution = 0.0;  // grid cell size h
    SeparationMask separation_mask;
};

// Points sampled along all four branches of a saddle up to arclength L.
struct ManifoldCloud {
    PeriodicOrbit owner;
    std::vector<LiftPoint> points;  // annulus coords, deduplicated on a 1e-6 grid
    double arclength = 0.0;
};

struct EssentialityOptions {
    GrowOptions grow;
    double eps = 1e-7;
};

// Rasterizes the four branches onto a band of cell size h and flood-fills
// from the top and bottom edges; Essential iff the fills stay disjoint.
EssentialityVerdict classify_essentiality(const LiftedMap& map, const PeriodicOrbit& orbit,
                                          double arclength, double h,
                                          const EssentialityOptions& opts = {});

// Union of the four branch polylines up to arclength L.
ManifoldCloud sample_K(const LiftedMap& map, const PeriodicOrbit& orbit, double arclength,
                       const GrowOptions& grow = {}, double eps = 1e-7);

// Cloud from branches that are already grown (prefix up to arclength L).
ManifoldCloud cloud_from_branches(const PeriodicOrbit& orbit,
                                  const std::vector<Branch>& branches,
                                  double arclength);

// Grid-bucketed nearest-neighbor queries over a point cloud in the
// annulus metric. The cloud must outlive the index.
class CloudNN {
  public:
    explicit CloudNN(const std::vector<LiftPoint>& points, double cell = 0.01);
    double nearest(const LiftPoint& p) const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

// Symmetric Hausdorff distance in the annulus metric.
double hausdorff(const ManifoldCloud& a, const ManifoldCloud& b);

enum class KEquivalence { Equivalent, Undetermined };

struct KEquivalenceResult {
    KEquivalence verdict = KEquivalence::Undetermined;
    std::optional<HeteroclinicPoint> witness_ab;  // u(A) crossing s(B)
    std::optional<HeteroclinicPoint> witness_ba;  // u(B) crossing s(A)
};

// Equivalent iff heteroclinic witnesses exist in both directions within
// the arclength cap; saddles whose tangles meet share one closure.
KEquivalenceResult k_equivalent(const LiftedMap& map, const PeriodicOrbit& a,
                                const PeriodicOrbit& b, double arclength_cap,
                                const GrowOptions& grow = {});

}  // namespace atlas

#endif
