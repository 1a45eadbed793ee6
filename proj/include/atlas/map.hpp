#ifndef ATLAS_MAP_HPP
#define ATLAS_MAP_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "atlas/geometry.hpp"

namespace atlas {

enum class MapFamily { StandardMap, StandardNontwistMap, UserDefined };

std::string family_name(MapFamily f);
MapFamily family_from_name(const std::string& name);

// Area-preserving annulus map given by its lift to the plane.
//
// Shipped families (x' and y' in lift coordinates, x never reduced mod 1):
//   standard:  y' = y - (k/2pi) sin(2pi x),  x' = x + y'
//   nontwist:  y' = y - b sin(2pi x),        x' = x + a (1 - y'^2)
//
// User maps are closed-form expression strings for (x', y'); their inverse
// is solved by Newton iteration and the Jacobian falls back to central
// finite differences with step 1e-6 unless expressions are provided.
class LiftedMap {
  public:
    static LiftedMap standard(double k);
    static LiftedMap nontwist(double a, double b);
    static LiftedMap user(const std::string& fx, const std::string& fy,
                          const std::map<std::string, double>& params = {});

    LiftPoint apply(const LiftPoint& z) const;       // f(z)
    LiftPoint apply_inverse(const LiftPoint& z) const;
    Mat2 jacobian(const LiftPoint& z) const;         // Df(z)
    Mat2 jacobian_inverse(const LiftPoint& z) const; // D(f^-1)(z)

    MapFamily family() const { return family_; }
    const std::map<std::string, double>& params() const { return params_; }

    // Same dynamics with forward and backward directions swapped (stable
    // manifolds are grown as unstable manifolds of this view).
    LiftedMap reversed() const;

    LiftedMap(const LiftedMap&);
    LiftedMap& operator=(const LiftedMap&);
    LiftedMap(LiftedMap&&) noexcept;
    LiftedMap& operator=(LiftedMap&&) noexcept;
    ~LiftedMap();

  private:
    struct Impl;
    explicit LiftedMap(std::unique_ptr<Impl> impl);

    MapFamily family_;
    std::map<std::string, double> params_;
    bool reversed_ = false;
    std::unique_ptr<Impl> impl_;
};

}  // namespace atlas

#endif
