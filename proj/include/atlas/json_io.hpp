#ifndef ATLAS_JSON_IO_HPP
#define ATLAS_JSON_IO_HPP

#include <json.hpp>

#include "atlas/manifold.hpp"
#include "atlas/orbit.hpp"
#include "atlas/periodic.hpp"
#include "atlas/regions.hpp"
#include "atlas/topology.hpp"

namespace atlas {

nlohmann::json to_json(const LiftPoint& p);
nlohmann::json to_json(const OrbitStats& s);
nlohmann::json to_json(const RotationInterval& iv);
nlohmann::json to_json(const PeriodicOrbit& o);
nlohmann::json to_json(const FixedPointIndex& idx);
nlohmann::json to_json(const Branch& b, bool include_polyline = false);
nlohmann::json to_json(const HeteroclinicPoint& hp);
nlohmann::json to_json(const EssentialityVerdict& v);
nlohmann::json to_json(const Barrier& bar);
nlohmann::json to_json(const Region& r);
nlohmann::json to_json(const ConnectingOrbitEvidence& e);
nlohmann::json to_json(const EscapeStats& st);
nlohmann::json to_json(const CoverageReport& rep);

PeriodicOrbit periodic_orbit_from_json(const nlohmann::json& j);

}  // namespace atlas

#endif
