#include "atlas/json_io.hpp"

namespace atlas {

using nlohmann::json;

json to_json(const LiftPoint& p) { return json{{"x", p.x}, {"y", p.y}}; }

json to_json(const OrbitStats& s) {
    return json{{"n_steps", s.n_steps},
                {"displacement", s.displacement},
                {"rotation_estimate", s.rotation_estimate},
                {"rotation_error_bound", s.rotation_error_bound}};
}

json to_json(const RotationInterval& iv) {
    return json{{"lo", iv.lo},
                {"hi", iv.hi},
                {"confidence", iv.confidence == IntervalConfidence::Exact ? "exact" : "sampled"}};
}

json to_json(const PeriodicOrbit& o) {
    json pts = json::array();
    for (const auto& p : o.points) pts.push_back(to_json(p));
    return json{{"p", o.p},
                {"q", o.q},
                {"points", pts},
                {"stability", stability_name(o.stability)},
                {"eigenvalues",
                 {{"small", {{"re", o.eig_small.real()}, {"im", o.eig_small.imag()}}},
                  {"large", {{"re", o.eig_large.real()}, {"im", o.eig_large.imag()}}}}},
                {"residue", o.residue},
                {"newton_residual", o.newton_residual}};
}

json to_json(const FixedPointIndex& idx) {
    return json{{"value", idx.value},
                {"radius", idx.radius},
                {"n_samples", idx.turning_data.size()}};
}

json to_json(const Branch& b, bool include_polyline) {
    json j{{"kind", branch_kind_name(b.kind)},
           {"sign", branch_sign_name(b.sign)},
           {"arclength", b.arclength},
           {"n_points", b.polyline.size()},
           {"max_gap", b.max_gap},
           {"max_turn", b.max_turn},
           {"truncated", b.truncated},
           {"owner", to_json(b.owner)}};
    if (include_polyline) {
        json pts = json::array();
        for (const auto& p : b.polyline) pts.push_back(to_json(p));
        j["polyline"] = pts;
    }
    return j;
}

json to_json(const HeteroclinicPoint& hp) {
    return json{{"location", to_json(hp.location)},
                {"arclength_from", hp.arclength_from},
                {"arclength_to", hp.arclength_to},
                {"crossing_angle", hp.crossing_angle},
                {"near_tangency", hp.near_tangency}};
}

json to_json(const EssentialityVerdict& v) {
    json j{{"status", v.status == EssentialityStatus::Essential ? "essential" : "not_found_up_to"},
           {"search_arclength", v.search_arclength},
           {"resolution", v.resolution}};
    if (v.status == EssentialityStatus::Essential) {
        json curve = json::array();
        for (const auto& p : v.certificate_curve) curve.push_back(to_json(p));
        j["certificate_curve"] = curve;
        j["winding"] = v.winding;
    }
    return j;
}

json to_json(const Barrier& bar) {
    return json{{"detector", barrier_detector_name(bar.detector)},
                {"rotation_estimate", bar.rotation_estimate},
                {"band", {{"lo", bar.band_lo}, {"hi", bar.band_hi}}},
                {"n_cert", bar.n_cert},
                {"graph_y", bar.graph_y}};
}

json to_json(const Region& r) {
    json inv = json::array();
    for (const auto& o : r.inventory) inv.push_back(to_json(o));
    return json{{"y_lo", r.y_lo},
                {"y_hi", r.y_hi},
                {"lower", r.lower ? to_json(*r.lower) : json(nullptr)},
                {"upper", r.upper ? to_json(*r.upper) : json(nullptr)},
                {"rotation_interval", to_json(r.rotation_interval)},
                {"inventory", inv},
                {"essential_idx", r.essential_idx}};
}

json to_json(const ConnectingOrbitEvidence& e) {
    return json{{"start", to_json(e.start)},
                {"forward_min_dist_to_upper", e.forward_min_dist_to_upper},
                {"backward_min_dist_to_lower", e.backward_min_dist_to_lower},
                {"n_forward", e.n_forward},
                {"n_backward", e.n_backward},
                {"success", e.success},
                {"frontier_missing", e.frontier_missing}};
}

json to_json(const EscapeStats& st) {
    return json{{"histogram", st.histogram},
                {"n_total", st.n_total},
                {"n_escaped", st.n_escaped},
                {"cap", st.cap},
                {"band_width", st.band_width}};
}

json to_json(const CoverageReport& rep) {
    return json{{"nx", rep.nx},
                {"ny", rep.ny},
                {"delta", rep.delta},
                {"window",
                 {{"x0", rep.window.x0}, {"x1", rep.window.x1},
                  {"y0", rep.window.y0}, {"y1", rep.window.y1}}},
                {"h_fraction", rep.h_fraction},
                {"e_fraction", rep.e_fraction},
                {"unresolved_fraction", rep.unresolved_fraction},
                {"n_saddles", rep.n_saddles}};
}

PeriodicOrbit periodic_orbit_from_json(const json& j) {
    PeriodicOrbit o;
    o.p = j.at("p").get<int>();
    o.q = j.at("q").get<int>();
    for (const auto& pj : j.at("points"))
        o.points.emplace_back(pj.at("x").get<double>(), pj.at("y").get<double>());
    std::string st = j.at("stability").get<std::string>();
    o.stability = st == "elliptic" ? Stability::Elliptic
                 : st == "hyperbolic" ? Stability::Hyperbolic
                                      : Stability::Degenerate;
    o.eig_small = {j.at("eigenvalues").at("small").at("re").get<double>(),
                   j.at("eigenvalues").at("small").at("im").get<double>()};
    o.eig_large = {j.at("eigenvalues").at("large").at("re").get<double>(),
                   j.at("eigenvalues").at("large").at("im").get<double>()};
    o.residue = j.at("residue").get<double>();
    o.newton_residual = j.at("newton_residual").get<double>();
    return o;
}

}  // namespace atlas
