#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "atlas/config.hpp"
#include "atlas/errors.hpp"
#include "atlas/json_io.hpp"
#include "atlas/manifold.hpp"
#include "atlas/orbit.hpp"
#include "atlas/parallel.hpp"
#include "atlas/periodic.hpp"
#include "atlas/regions.hpp"
#include "atlas/store.hpp"
#include "atlas/svg.hpp"
#include "atlas/topology.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace atlas;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonArgs {
    std::string config_path;
    std::string family;
    double k = std::nan("");
    double a = std::nan("");
    double b = std::nan("");
    std::string out_dir = "./atlas-out";
    std::string data_dir;
    int workers = 0;
    bool serial = false;
};

void add_common(CLI::App* cmd, CommonArgs& c) {
    cmd->add_option("--config", c.config_path, "flat key=value config file");
    cmd->add_option("--family", c.family, "standard | nontwist | user");
    cmd->add_option("--k", c.k, "standard map parameter");
    cmd->add_option("--a", c.a, "nontwist map parameter a");
    cmd->add_option("--b", c.b, "nontwist map parameter b");
    cmd->add_option("--out", c.out_dir, "output directory");
    cmd->add_option("--data", c.data_dir, "store directory (default env ATLAS_DATA)");
    cmd->add_option("--workers", c.workers, "parallel worker count");
    cmd->add_flag("--serial", c.serial, "run the serial reference kernels");
}

Config build_config(const CommonArgs& c) {
    Config cfg;
    if (!c.config_path.empty()) cfg = Config::load(c.config_path);
    // Flags win over file values.
    if (!c.family.empty()) cfg.set("family", c.family);
    if (!std::isnan(c.k)) cfg.set("params.k", std::to_string(c.k));
    if (!std::isnan(c.a)) cfg.set("params.a", std::to_string(c.a));
    if (!std::isnan(c.b)) cfg.set("params.b", std::to_string(c.b));
    return cfg;
}

void apply_exec(const CommonArgs& c) {
    if (c.workers > 0) set_worker_count(c.workers);
    set_default_exec(c.serial ? Exec::Serial : Exec::OpenMP);
}

RunStore open_store(const CommonArgs& c) {
    return c.data_dir.empty() ? RunStore() : RunStore(c.data_dir);
}

json map_params(const Config& cfg) {
    json params = json::object();
    for (const auto& [key, val] : cfg.values())
        if (key.rfind("params.", 0) == 0) params[key.substr(7)] = std::stod(val);
    // User maps are identified by their expressions too.
    if (cfg.get_string("family", "standard") == "user") {
        params["fx"] = cfg.get_string("map.fx");
        params["fy"] = cfg.get_string("map.fy");
    }
    return params;
}

void emit(const CommonArgs& c, const std::string& name, const json& payload) {
    std::string text = payload.dump(2) + "\n";
    std::cout << text;
    fs::create_directories(c.out_dir);
    std::ofstream out(fs::path(c.out_dir) / name);
    out << text;
}

// Cache wrapper: identical inputs replay the stored payload byte-identically.
json record_inputs(const json& params, const json& inputs) {
    json full = inputs;
    full["params"] = params;
    return full;
}

json cached(RunStore& store, const std::string& family, const json& params,
            const std::string& op, const json& inputs, const std::function<json()>& compute) {
    json full = record_inputs(params, inputs);
    std::string id = run_record_id(family, params, op, full, kVersion);
    if (auto rec = store.get(id)) return rec->payload;
    RunRecord rec;
    rec.family = family;
    rec.op = op;
    rec.inputs = full;
    rec.version = kVersion;
    rec.payload = compute();
    store.put(rec);
    return rec.payload;
}

bool parse_window(const std::string& text, Window& w) {
    return std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &w.x0, &w.x1, &w.y0, &w.y1) == 4;
}

int run_atlas(int argc, char** argv) {
    CLI::App app{"instability-atlas: detectors for transport structure of "
                 "area-preserving annulus maps"};
    app.require_subcommand(1);

    // --- orbits ---
    CommonArgs oc;
    int op_p = 0, op_q = 1;
    std::string op_window = "0,1,-1,1", op_grid = "50x50";
    auto* orbits = app.add_subcommand("orbits", "find (p,q) periodic orbits");
    add_common(orbits, oc);
    orbits->add_option("--p", op_p, "rotation numerator");
    orbits->add_option("--q", op_q, "rotation denominator (>= 1)")
        ->check(CLI::PositiveNumber);
    orbits->add_option("--window", op_window, "x0,x1,y0,y1");
    orbits->add_option("--grid", op_grid, "NxM seed grid");

    // --- manifold ---
    CommonArgs mc;
    std::string mf_orbit, mf_kind = "unstable", mf_sign = "plus";
    double mf_arclength = 50.0;
    auto* manifold = app.add_subcommand("manifold", "grow a stable/unstable branch");
    add_common(manifold, mc);
    manifold->add_option("--orbit", mf_orbit, "orbit record id")->required();
    manifold->add_option("--kind", mf_kind, "stable | unstable");
    manifold->add_option("--sign", mf_sign, "plus | minus");
    manifold->add_option("--arclength", mf_arclength, "target arclength");

    // --- classify ---
    CommonArgs cc;
    std::string cl_orbit;
    double cl_arclength = 20.0;
    int cl_resolution = 512;
    bool cl_svg = false;
    auto* classify_cmd = app.add_subcommand("classify", "essential / inessential verdict");
    add_common(classify_cmd, cc);
    classify_cmd->add_option("--orbit", cl_orbit, "orbit record id")->required();
    classify_cmd->add_option("--arclength", cl_arclength, "branch arclength");
    classify_cmd->add_option("--resolution", cl_resolution, "raster cells across x");
    classify_cmd->add_flag("--svg", cl_svg, "emit mask + certificate SVG");

    // --- regions ---
    CommonArgs rc;
    std::string rg_yrange = "-1,1";
    int rg_scan = 64, rg_qmax = 8;
    auto* regions_cmd = app.add_subcommand("regions", "decompose into regions of instability");
    add_common(regions_cmd, rc);
    regions_cmd->add_option("--y-range", rg_yrange, "lo,hi");
    regions_cmd->add_option("--scan", rg_scan, "barrier scan resolution");
    regions_cmd->add_option("--q-max", rg_qmax, "orbit inventory depth (0 = off)");

    // --- connect ---
    CommonArgs nc;
    std::string cn_region;
    int cn_index = 0;
    double cn_delta = 0.05;
    double cn_steps = 1e6;
    auto* connect = app.add_subcommand("connect", "search for a connecting orbit");
    add_common(connect, nc);
    connect->add_option("--region", cn_region, "regions record id")->required();
    connect->add_option("--index", cn_index, "region index within the record");
    connect->add_option("--delta", cn_delta, "success distance");
    connect->add_option("--steps", cn_steps, "steps per direction");

    // --- coverage ---
    CommonArgs vc;
    double cv_delta = 0.02;
    std::string cv_window = "0,1,-0.5,0.5", cv_grid = "256x256";
    int cv_budget = 10;
    auto* coverage = app.add_subcommand("coverage", "stable-manifold density report");
    add_common(coverage, vc);
    coverage->add_option("--delta", cv_delta, "distance threshold");
    coverage->add_option("--window", cv_window, "x0,x1,y0,y1");
    coverage->add_option("--grid", cv_grid, "NxM cells");
    coverage->add_option("--budget", cv_budget, "saddle budget");

    // --- scan (phase portrait + barrier overlay) ---
    CommonArgs sc;
    std::string sp_window = "0,1,-1,1", sp_region;
    int sp_seeds = 40;
    double sp_steps = 500;
    auto* scan = app.add_subcommand("scan", "phase portrait (SVG + CSV)");
    add_common(scan, sc);
    scan->add_option("--window", sp_window, "x0,x1,y0,y1");
    scan->add_option("--seeds", sp_seeds, "seed lattice size");
    scan->add_option("--steps", sp_steps, "iterations per seed");
    scan->add_option("--region", sp_region, "regions record id to overlay");

    // --- report ---
    CommonArgs pc;
    std::string rp_region;
    auto* report = app.add_subcommand("report", "re-emit a stored record");
    add_common(report, pc);
    report->add_option("--region", rp_region, "record id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*orbits) {
            apply_exec(oc);
            Config cfg = build_config(oc);
            LiftedMap map = cfg.make_map();
            Window w;
            int nx = 50, ny = 50;
            if (!parse_window(op_window, w) ||
                std::sscanf(op_grid.c_str(), "%dx%d", &nx, &ny) != 2 || op_q < 1) {
                std::cerr << json{{"error", "usage"}, {"what", "bad window/grid/q"}}.dump()
                          << "\n";
                return 2;
            }
            RunStore store = open_store(oc);
            json params = map_params(cfg);
            json inputs = {{"p", op_p},   {"q", op_q},  {"window", op_window},
                           {"grid", op_grid}};
            std::string family = cfg.get_string("family", "standard");
            json payload = cached(store, family, params, "orbits", inputs, [&] {
                auto found = find_all_pq(map, op_p, op_q, w, nx, ny);
                json arr = json::array();
                for (const auto& o : found) arr.push_back(to_json(o));
                return arr;
            });
            // Store each orbit under its own id so other commands can load it.
            json out = json::array();
            for (size_t i = 0; i < payload.size(); ++i) {
                RunRecord rec;
                rec.family = family;
                rec.op = "orbit";
                rec.inputs = {{"params", params}, {"from", inputs}, {"index", i}};
                rec.version = kVersion;
                rec.payload = payload[i];
                json item = payload[i];
                item["id"] = store.put(rec);
                out.push_back(item);
            }
            emit(oc, "orbits.json", out);
            return 0;
        }

        if (*manifold) {
            apply_exec(mc);
            Config cfg = build_config(mc);
            RunStore store = open_store(mc);
            auto rec = store.get(mf_orbit);
            if (!rec) {
                std::cerr << json{{"error", "missing_orbit"}, {"id", mf_orbit}}.dump() << "\n";
                return 1;
            }
            if (cfg.get_string("family", "").empty()) cfg.set("family", rec->family);
            for (auto it = rec->inputs["params"].begin(); it != rec->inputs["params"].end(); ++it)
                if (it.value().is_number() && !cfg.has("params." + it.key()))
                    cfg.set("params." + it.key(), std::to_string(it.value().get<double>()));
            LiftedMap map = cfg.make_map();
            PeriodicOrbit orbit = periodic_orbit_from_json(rec->payload);
            BranchKind kind = (mf_kind == "stable") ? BranchKind::Stable : BranchKind::Unstable;
            BranchSign sign = (mf_sign == "minus") ? BranchSign::Minus : BranchSign::Plus;
            Branch b = grow_branch(map, orbit, kind, sign, mf_arclength);
            emit(mc, "manifold.json", to_json(b, /*include_polyline=*/false));
            fs::create_directories(mc.out_dir);
            std::ofstream csv(fs::path(mc.out_dir) / "manifold.csv");
            csv << "s,x,y\n";
            csv.precision(17);
            for (size_t i = 0; i < b.polyline.size(); ++i)
                csv << b.params[i] << "," << b.polyline[i].x << "," << b.polyline[i].y << "\n";
            return 0;
        }

        if (*classify_cmd) {
            apply_exec(cc);
            Config cfg = build_config(cc);
            RunStore store = open_store(cc);
            auto rec = store.get(cl_orbit);
            if (!rec) {
                std::cerr << json{{"error", "missing_orbit"}, {"id", cl_orbit}}.dump() << "\n";
                return 1;
            }
            if (cfg.get_string("family", "").empty()) cfg.set("family", rec->family);
            for (auto it = rec->inputs["params"].begin(); it != rec->inputs["params"].end(); ++it)
                if (it.value().is_number() && !cfg.has("params." + it.key()))
                    cfg.set("params." + it.key(), std::to_string(it.value().get<double>()));
            LiftedMap map = cfg.make_map();
            PeriodicOrbit orbit = periodic_orbit_from_json(rec->payload);
            EssentialityVerdict v =
                classify_essentiality(map, orbit, cl_arclength, 1.0 / cl_resolution);
            emit(cc, "classify.json", to_json(v));
            if (cl_svg) {
                const auto& m = v.separation_mask;
                Window w{0.0, 1.0, m.y_min, m.y_max};
                SvgCanvas svg(w);
                std::vector<LiftPoint> occ;
                for (int iy = 0; iy < m.ny; ++iy)
                    for (int ix = 0; ix < m.nx; ++ix)
                        if (m.at(ix, iy))
                            occ.emplace_back((ix + 0.5) * m.cell, m.y_min + (iy + 0.5) * m.cell);
                svg.add_points(occ, "#9090c0", 1.0);
                if (!v.certificate_curve.empty())
                    svg.add_polyline(v.certificate_curve, "#b03030", 1.5);
                fs::create_directories(cc.out_dir);
                svg.write((fs::path(cc.out_dir) / "classify.svg").string());
            }
            return 0;
        }

        if (*regions_cmd) {
            apply_exec(rc);
            Config cfg = build_config(rc);
            LiftedMap map = cfg.make_map();
            double ylo, yhi;
            if (std::sscanf(rg_yrange.c_str(), "%lf,%lf", &ylo, &yhi) != 2 || yhi <= ylo) {
                std::cerr << json{{"error", "usage"}, {"what", "bad y-range"}}.dump() << "\n";
                return 2;
            }
            RunStore store = open_store(rc);
            json params = map_params(cfg);
            json inputs = {{"y_range", rg_yrange}, {"scan", rg_scan}, {"q_max", rg_qmax}};
            std::string family = cfg.get_string("family", "standard");
            json payload = cached(store, family, params, "regions", inputs, [&] {
                DecomposeOptions opts;
                opts.inventory_q_max = rg_qmax;
                auto regs = decompose(map, ylo, yhi, rg_scan, opts);
                json arr = json::array();
                for (const auto& r : regs) arr.push_back(to_json(r));
                return arr;
            });
            json out = {{"id", run_record_id(family, params, "regions",
                                             record_inputs(params, inputs), kVersion)},
                        {"regions", payload}};
            emit(rc, "regions.json", out);
            return 0;
        }

        if (*connect) {
            apply_exec(nc);
            RunStore store = open_store(nc);
            auto rec = store.get(cn_region);
            if (!rec || rec->op != "regions") {
                std::cerr << json{{"error", "missing_regions_record"}, {"id", cn_region}}.dump()
                          << "\n";
                return 1;
            }
            Config cfg = build_config(nc);
            if (cfg.get_string("family", "").empty()) cfg.set("family", rec->family);
            for (auto it = rec->inputs["params"].begin(); it != rec->inputs["params"].end(); ++it)
                if (it.value().is_number() && !cfg.has("params." + it.key()))
                    cfg.set("params." + it.key(), std::to_string(it.value().get<double>()));
            LiftedMap map = cfg.make_map();
            if (cn_index < 0 || cn_index >= static_cast<int>(rec->payload.size())) {
                std::cerr << json{{"error", "usage"}, {"what", "region index out of range"}}.dump()
                          << "\n";
                return 2;
            }
            // Rebuild the region from its JSON.
            const json& rj = rec->payload[static_cast<size_t>(cn_index)];
            Region region;
            region.y_lo = rj["y_lo"].get<double>();
            region.y_hi = rj["y_hi"].get<double>();
            auto barrier_from = [](const json& bj) {
                Barrier b;
                b.detector = bj["detector"] == "graph_fit" ? BarrierDetector::GraphFit
                                                           : BarrierDetector::TransportExclusion;
                b.rotation_estimate = bj["rotation_estimate"].get<double>();
                b.band_lo = bj["band"]["lo"].get<double>();
                b.band_hi = bj["band"]["hi"].get<double>();
                b.n_cert = bj["n_cert"].get<std::int64_t>();
                b.graph_y = bj["graph_y"].get<std::vector<double>>();
                return b;
            };
            if (!rj["lower"].is_null()) region.lower = barrier_from(rj["lower"]);
            if (!rj["upper"].is_null()) region.upper = barrier_from(rj["upper"]);
            for (const auto& oj : rj["inventory"])
                region.inventory.push_back(periodic_orbit_from_json(oj));
            ConnectingOrbitOptions opts;
            opts.delta = cn_delta;
            opts.n_steps = static_cast<std::int64_t>(cn_steps);
            ConnectingOrbitEvidence ev = connecting_orbit_search(map, region, opts);
            emit(nc, "connect.json", to_json(ev));
            return 0;
        }

        if (*coverage) {
            apply_exec(vc);
            Config cfg = build_config(vc);
            LiftedMap map = cfg.make_map();
            Window w;
            int nx = 256, ny = 256;
            if (!parse_window(cv_window, w) ||
                std::sscanf(cv_grid.c_str(), "%dx%d", &nx, &ny) != 2) {
                std::cerr << json{{"error", "usage"}, {"what", "bad window/grid"}}.dump() << "\n";
                return 2;
            }
            CoverageOptions opts;
            opts.saddle_budget = cv_budget;
            CoverageReport rep = coverage_report(map, w, nx, ny, cv_delta, opts);
            emit(vc, "coverage.json", to_json(rep));
            fs::create_directories(vc.out_dir);
            std::ofstream csv(fs::path(vc.out_dir) / "coverage.csv");
            csv << "ix,iy,class\n";
            for (int iy = 0; iy < ny; ++iy)
                for (int ix = 0; ix < nx; ++ix)
                    csv << ix << "," << iy << ","
                        << int(rep.cells[static_cast<size_t>(iy) * nx + ix]) << "\n";
            SvgCanvas svg(w);
            double cw = (w.x1 - w.x0) / nx, chh = (w.y1 - w.y0) / ny;
            for (int iy = 0; iy < ny; ++iy)
                for (int ix = 0; ix < nx; ++ix) {
                    auto cls = rep.cells[static_cast<size_t>(iy) * nx + ix];
                    if (cls == 0) continue;
                    LiftPoint c{w.x0 + (ix + 0.5) * cw, w.y0 + (iy + 0.5) * chh};
                    svg.add_point(c, cls == 1 ? "#b03030" : "#2a7f3f", 1.2);
                }
            svg.write((fs::path(vc.out_dir) / "coverage.svg").string());
            return 0;
        }

        if (*scan) {
            apply_exec(sc);
            Config cfg = build_config(sc);
            LiftedMap map = cfg.make_map();
            Window w;
            if (!parse_window(sp_window, w) || w.x1 <= w.x0 || w.y1 <= w.y0 || sp_seeds < 1) {
                std::cerr << json{{"error", "usage"}, {"what", "bad window/seeds"}}.dump() << "\n";
                return 2;
            }
            SvgCanvas svg(w);
            fs::create_directories(sc.out_dir);
            std::ofstream csv(fs::path(sc.out_dir) / "portrait.csv");
            csv << "seed,x,y\n";
            csv.precision(12);
            auto steps = static_cast<std::int64_t>(sp_steps);
            for (int s = 0; s < sp_seeds; ++s) {
                double y = w.y0 + (s + 0.5) * (w.y1 - w.y0) / sp_seeds;
                LiftPoint z{0.123, y};
                std::vector<LiftPoint> pts;
                try {
                    for (std::int64_t n = 0; n < steps; ++n) {
                        z = map.apply(z);
                        pts.emplace_back(wrap01(z.x), z.y);
                    }
                } catch (const NonFinite&) {
                    // plot what we have
                }
                for (const auto& p : pts) csv << s << "," << p.x << "," << p.y << "\n";
                svg.add_points(pts);
            }
            if (!sp_region.empty()) {
                RunStore store = open_store(sc);
                auto rec = store.get(sp_region);
                if (rec && rec->op == "regions")
                    for (const auto& rj : rec->payload)
                        for (const char* side : {"lower", "upper"}) {
                            if (rj[side].is_null()) continue;
                            auto gy = rj[side]["graph_y"].get<std::vector<double>>();
                            std::vector<LiftPoint> curve;
                            for (size_t i = 0; i < gy.size(); ++i)
                                curve.emplace_back(static_cast<double>(i) / gy.size(), gy[i]);
                            if (curve.empty()) continue;
                            svg.add_polyline(curve, "#2a7f3f", 2.0);
                        }
            }
            svg.write((fs::path(sc.out_dir) / "portrait.svg").string());
            std::cout << json{{"svg", "portrait.svg"}, {"csv", "portrait.csv"}}.dump(2) << "\n";
            return 0;
        }

        if (*report) {
            apply_exec(pc);
            RunStore store = open_store(pc);
            auto rec = store.get(rp_region);
            if (!rec) {
                std::cerr << json{{"error", "missing_record"}, {"id", rp_region}}.dump() << "\n";
                return 1;
            }
            json out = {{"id", rec->id}, {"op", rec->op}, {"payload", rec->payload}};
            emit(pc, "report.json", out);
            return 0;
        }
    } catch (const AtlasError& e) {
        std::cerr << json{{"error", e.code()}, {"what", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", "usage"}, {"what", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"what", e.what()}}.dump() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) { return run_atlas(argc, argv); }
