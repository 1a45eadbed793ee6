#ifndef ATLAS_ORBIT_HPP
#define ATLAS_ORBIT_HPP

#include <cstdint>
#include <vector>

#include "atlas/geometry.hpp"
#include "atlas/map.hpp"
#include "atlas/parallel.hpp"

namespace atlas {

// Birkhoff quotient over one orbit segment.
struct OrbitStats {
    std::int64_t n_steps = 0;
    double displacement = 0.0;      // x_n - x_0 in the lift
    double rotation_estimate = 0.0; // displacement / n_steps, exactly
    double rotation_error_bound = 0.0;
};

enum class IntervalConfidence { Exact, Sampled };

struct RotationInterval {
    double lo = 0.0;
    double hi = 0.0;
    IntervalConfidence confidence = IntervalConfidence::Sampled;

    double length() const { return hi - lo; }
    bool contains(double r) const { return lo <= r && r <= hi; }
};

inline constexpr std::int64_t kDefaultOrbitCap = 100'000'000;

// Orbit of n+1 points starting at z; n < 0 iterates the inverse.
std::vector<LiftPoint> iterate(const LiftedMap& map, const LiftPoint& z,
                               std::int64_t n,
                               std::int64_t cap = kDefaultOrbitCap);

// f^n(z) without storing the intermediate points.
LiftPoint iterate_to(const LiftedMap& map, const LiftPoint& z, std::int64_t n);

// Rotation estimate (x_n - x_0)/n with error bound C/n, C the observed
// oscillation of the partial displacements around the linear trend.
OrbitStats birkhoff_rotation(const LiftedMap& map, const LiftPoint& z,
                             std::int64_t n);

// [min, max] of per-seed Birkhoff estimates widened by their error bounds.
RotationInterval rotation_interval_of_set(const LiftedMap& map,
                                          const std::vector<LiftPoint>& seeds,
                                          std::int64_t n,
                                          Exec exec = default_exec());

}  // namespace atlas

#endif
