#ifndef ATLAS_PERIODIC_HPP
#define ATLAS_PERIODIC_HPP

#include <complex>
#include <vector>

#include "atlas/geometry.hpp"
#include "atlas/map.hpp"
#include "atlas/parallel.hpp"

namespace atlas {

enum class Stability { Degenerate, Elliptic, Hyperbolic };

std::string stability_name(Stability s);

// Orbit with f^q(z) = T^p(z) in the lift; rotation number p/q.
struct PeriodicOrbit {
    int p = 0;
    int q = 1;
    std::vector<LiftPoint> points;  // q points, x reduced to [0,1)
    Stability stability = Stability::Degenerate;
    std::complex<double> eig_small;  // |eig_small| <= |eig_large|
    std::complex<double> eig_large;
    double residue = 0.0;            // (2 - tr DF^q)/4
    double newton_residual = 0.0;

    // Lexicographically smallest orbit point; dedup/sort representative.
    const LiftPoint& representative() const;
    double rotation() const { return static_cast<double>(p) / q; }
};

struct ClassifyResult {
    Stability stability;
    std::complex<double> eig_small, eig_large;
    double residue;
    double trace;
};

struct FixedPointIndex {
    int value = 0;
    double radius = 0.0;
    std::vector<double> turning_data;  // sampled angle increments
};

struct Window {
    double x0 = 0.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
    bool contains(const LiftPoint& z) const {
        return z.x >= x0 && z.x < x1 && z.y >= y0 && z.y <= y1;
    }
};

struct NewtonOptions {
    int max_iters = 50;
    int max_halvings = 20;
    double tol = 1e-10;        // lift sup-norm on f^q(z) - T^p(z)
    double dedup_tol = 1e-6;   // orbit identification, mod 1
    double degeneracy_band = 1e-9;
};

enum class NewtonStatus { Converged, NotConverged, SingularJacobian, PeriodDivisor };

std::string newton_status_name(NewtonStatus s);

struct NewtonOutcome {
    NewtonStatus status = NewtonStatus::NotConverged;
    PeriodicOrbit orbit;       // valid iff status == Converged
    double final_residual = 0.0;
    int divisor = 0;           // set for PeriodDivisor
};

// Deterministic row-major grid of nx*ny points over the window.
std::vector<LiftPoint> seed_grid(const Window& window, int nx, int ny);

// Damped Newton on G(z) = f^q(z) - T^p(z).
NewtonOutcome newton_pq(const LiftedMap& map, const LiftPoint& seed, int p, int q,
                        const NewtonOptions& opts = {});

// Eigenvalue trichotomy of DF^q at a point with periodicity residual < 1e-8.
ClassifyResult classify(const LiftedMap& map, const LiftPoint& orbit_point,
                        int p, int q, double degeneracy_band = 1e-9);

// Winding number of w -> f^q(w) - T^p(w) - w around a circle about z.
FixedPointIndex fixed_point_index(const LiftedMap& map, const LiftPoint& z,
                                  int p, int q, double radius,
                                  int min_samples = 512);

// Seed sweep + Newton + dedup; deterministic given inputs.
std::vector<PeriodicOrbit> find_all_pq(const LiftedMap& map, int p, int q,
                                       const Window& window, int nx, int ny,
                                       const NewtonOptions& opts = {},
                                       Exec exec = default_exec());

// Jacobian of f^q as the product of per-step Jacobians along the orbit.
Mat2 jacobian_power(const LiftedMap& map, const LiftPoint& z, int q);

}  // namespace atlas

#endif
