#include "atlas/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atlas/errors.hpp"
#include "atlas/topology.hpp"

namespace atlas {

namespace {
constexpr double kGolden = 1.6180339887498948482;
}

std::string barrier_detector_name(BarrierDetector d) {
    return d == BarrierDetector::GraphFit ? "graph_fit" : "transport_exclusion";
}

double Barrier::psi(double x) const {
    if (graph_y.empty()) return 0.5 * (band_lo + band_hi);
    double u = wrap01(x) * static_cast<double>(graph_y.size());
    auto n = static_cast<std::size_t>(u);
    double t = u - static_cast<double>(n);
    std::size_t n1 = (n + 1) % graph_y.size();
    return graph_y[n % graph_y.size()] * (1.0 - t) + graph_y[n1] * t;
}

double Barrier::distance_to(const LiftPoint& z) const {
    if (!graph_y.empty()) return std::abs(z.y - psi(z.x));
    if (z.y < band_lo) return band_lo - z.y;
    if (z.y > band_hi) return z.y - band_hi;
    return 0.0;
}

std::vector<double> noble_targets(double lo, double hi, int count) {
    // Farey-neighbor pairs (p/q, p'/q') give the noble number
    // (p*phi + p') / (q*phi + q'), the value of the continued fraction of
    // p/q with an infinite tail of 1s; it lies between the two fractions.
    std::vector<double> out;
    for (int q = 1; q <= 16 && static_cast<int>(out.size()) < 4 * count; ++q) {
        for (int p = static_cast<int>(std::floor(lo * q)) - 1;
             p <= static_cast<int>(std::ceil(hi * q)) + 1; ++p) {
            if (std::gcd(std::abs(p), q) != 1) continue;
            for (int dq = 1; dq <= q; ++dq) {
                // neighbor p'/q' with |p q' - p' q| = 1
                for (int sign : {1, -1}) {
                    long long num = 1LL * p * dq + sign;
                    if (num % q != 0) continue;
                    long long dp = num / q;
                    double noble = (p * kGolden + static_cast<double>(dp)) /
                                   (q * kGolden + static_cast<double>(dq));
                    if (noble > lo && noble < hi) out.push_back(noble);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    double mid = 0.5 * (lo + hi);
    std::stable_sort(out.begin(), out.end(), [&](double a, double b) {
        return std::abs(a - mid) < std::abs(b - mid);
    });
    if (static_cast<int>(out.size()) > count) out.resize(static_cast<std::size_t>(count));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// No orbit among 100 seeds below the band reaches above it within n_cert steps.
bool transport_excluded(const LiftedMap& map, double y_lo, double y_hi,
                        std::int64_t n_cert, int n_seeds, Exec exec) {
    std::vector<uint8_t> crossed(static_cast<std::size_t>(n_seeds), 0);
    double h = y_hi - y_lo;
    par_for(static_cast<std::size_t>(n_seeds), [&](std::size_t i) {
        double x = static_cast<double>(i) / n_seeds;
        LiftPoint w{x, y_lo - 0.05 * h - 0.30 * h * (static_cast<double>(i % 7) / 7.0)};
        try {
            for (std::int64_t n = 0; n < n_cert; ++n) {
                w = map.apply(w);
                if (w.y > y_hi) { crossed[i] = 1; return; }
            }
        } catch (const NonFinite&) {
            crossed[i] = 1;
        }
    }, exec);
    return std::none_of(crossed.begin(), crossed.end(), [](uint8_t c) { return c != 0; });
}

// Does a (p,q) periodic orbit exist on the barrier graph itself? Orbits of
// nearby island chains do not count: every point must sit within the
// graph-fit tolerance of the fitted curve.
bool rational_orbit_on_barrier(const LiftedMap& map, const Barrier& bar, int p, int q,
                               double on_graph_tol) {
    NewtonOptions nopts;
    for (int i = 0; i < 8; ++i) {
        double x = (i + 0.5) / 8.0;
        LiftPoint seed{x, bar.psi(x)};
        NewtonOutcome oc = newton_pq(map, seed, p, q, nopts);
        if (oc.status != NewtonStatus::Converged) continue;
        bool on_barrier = true;
        for (const auto& pt : oc.orbit.points)
            if (bar.distance_to(pt) > on_graph_tol) on_barrier = false;
        if (on_barrier) return true;
    }
    return false;
}

struct GraphFitCandidate {
    Barrier barrier;
    double target_miss = 1e300;
    bool ok = false;
};

GraphFitCandidate graph_fit_seed(const LiftedMap& map, double seed_y,
                                 double y_lo, double y_hi,
                                 const std::vector<double>& targets,
                                 const BarrierOptions& opts) {
    GraphFitCandidate cand;
    const int nodes = opts.graph_nodes;
    std::vector<double> ymin(static_cast<std::size_t>(nodes), 1e300);
    std::vector<double> ymax(static_cast<std::size_t>(nodes), -1e300);
    std::vector<std::int64_t> hits(static_cast<std::size_t>(nodes), 0);
    std::vector<double> ysum(static_cast<std::size_t>(nodes), 0.0);

    LiftPoint w{0.0, seed_y};
    LiftPoint start = w;
    // A graph through the band can oscillate well beyond a thin scan cell
    // (amplitude of order the map's nonlinearity), so the escape margin must
    // not shrink with the cell height; the spread and fill checks below are
    // what actually reject non-graph orbits.
    double margin = std::max(y_hi - y_lo, 0.25);
    try {
        for (std::int64_t n = 0; n < opts.orbit_len; ++n) {
            w = map.apply(w);
            if (w.y < y_lo - margin || w.y > y_hi + margin) return cand;  // left the band
            auto bin = static_cast<std::size_t>(wrap01(w.x) * nodes);
            if (bin >= static_cast<std::size_t>(nodes)) bin = 0;
            ymin[bin] = std::min(ymin[bin], w.y);
            ymax[bin] = std::max(ymax[bin], w.y);
            ysum[bin] += w.y;
            ++hits[bin];
        }
    } catch (const NonFinite&) {
        return cand;
    }

    for (int i = 0; i < nodes; ++i) {
        if (hits[i] == 0) return cand;                          // graph not filled
        if (ymax[i] - ymin[i] > opts.graph_tol) return cand;    // not single-valued
    }

    Barrier bar;
    bar.detector = BarrierDetector::GraphFit;
    bar.graph_y.resize(static_cast<std::size_t>(nodes));
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < nodes; ++i) {
        bar.graph_y[static_cast<std::size_t>(i)] = ysum[i] / static_cast<double>(hits[i]);
        lo = std::min(lo, ymin[i]);
        hi = std::max(hi, ymax[i]);
    }
    bar.band_lo = lo;
    bar.band_hi = hi;
    bar.rotation_estimate = (w.x - start.x) / static_cast<double>(opts.orbit_len);

    cand.barrier = std::move(bar);
    cand.ok = true;
    for (double t : targets)
        cand.target_miss = std::min(cand.target_miss, std::abs(cand.barrier.rotation_estimate - t));
    return cand;
}

}  // namespace

std::optional<Barrier> detect_barrier(const LiftedMap& map, double y_lo, double y_hi,
                                      const std::vector<double>& target_rotations,
                                      std::int64_t n_cert, const BarrierOptions& opts,
                                      Exec exec) {
    if (y_hi <= y_lo) throw InvalidBand("detect_barrier: band height must be > 0");

    std::vector<double> targets = target_rotations;
    if (targets.empty()) {
        // Default targets: nobles inside the band's own sampled rotation range.
        std::vector<LiftPoint> probe;
        for (int i = 0; i < 4; ++i)
            probe.emplace_back(0.0, y_lo + (i + 0.5) * (y_hi - y_lo) / 4.0);
        try {
            RotationInterval iv = rotation_interval_of_set(map, probe, 5'000, exec);
            targets = noble_targets(iv.lo - 0.05, iv.hi + 0.05, opts.n_targets);
        } catch (const AtlasError&) {
            targets.clear();
        }
    }

    // Graph fit across the band; candidates evaluated in seed order.
    std::vector<GraphFitCandidate> cands(static_cast<std::size_t>(opts.n_band_seeds));
    par_for(cands.size(), [&](std::size_t i) {
        double y = y_lo + (static_cast<double>(i) + 0.5) * (y_hi - y_lo) / opts.n_band_seeds;
        cands[i] = graph_fit_seed(map, y, y_lo, y_hi, targets, opts);
    }, exec);

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < cands.size(); ++i)
        if (cands[i].ok) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cands[a].target_miss < cands[b].target_miss;
    });

    // An orbit trapped in a (p, q) chain reproduces p/q to the resolution of
    // the orbit length; a circle of nearby irrational rotation does not, even
    // though the chain may pass within graph_tol of the fitted curve.
    const double rho_match_tol =
        std::max(1e-4, 4.0 / static_cast<double>(opts.orbit_len));

    for (std::size_t idx : order) {
        Barrier& cand = cands[idx].barrier;
        // Certify the fitted band and reject graphs carrying a periodic orbit.
        bool rational = false;
        double rho = cand.rotation_estimate;
        for (int q = 1; q <= opts.rational_q_max && !rational; ++q) {
            int p = static_cast<int>(std::llround(rho * q));
            if (std::gcd(std::abs(p), q) != 1) continue;
            if (std::abs(rho - static_cast<double>(p) / q) >= rho_match_tol) continue;
            if (rational_orbit_on_barrier(map, cand, p, q, opts.graph_tol)) rational = true;
        }
        if (!rational &&
            transport_excluded(map, cand.band_lo, cand.band_hi, n_cert,
                               opts.n_transport_seeds, exec)) {
            cand.n_cert = n_cert;
            return cand;
        }
    }

    if (transport_excluded(map, y_lo, y_hi, n_cert, opts.n_transport_seeds, exec)) {
        Barrier bar;
        bar.detector = BarrierDetector::TransportExclusion;
        bar.band_lo = y_lo;
        bar.band_hi = y_hi;
        bar.n_cert = n_cert;
        std::vector<LiftPoint> probe;
        for (int i = 0; i < 4; ++i)
            probe.emplace_back(0.0, y_lo + (i + 0.5) * (y_hi - y_lo) / 4.0);
        try {
            bar.rotation_estimate =
                rotation_interval_of_set(map, probe, 20'000, exec).lo;
        } catch (const AtlasError&) {
            bar.rotation_estimate = 0.0;
        }
        return bar;
    }
    return std::nullopt;
}

std::vector<Region> decompose(const LiftedMap& map, double y_lo, double y_hi,
                              int scan_resolution, const DecomposeOptions& opts,
                              Exec exec) {
    if (scan_resolution < 1) throw std::invalid_argument("decompose: scan_resolution >= 1");
    double dy = (y_hi - y_lo) / scan_resolution;

    std::vector<std::optional<Barrier>> bars(static_cast<std::size_t>(scan_resolution));
    for (int i = 0; i < scan_resolution; ++i) {
        double lo = y_lo + i * dy;
        bars[static_cast<std::size_t>(i)] =
            detect_barrier(map, lo, lo + dy, {}, opts.n_cert, opts.barrier, exec);
    }

    std::vector<Region> regions;
    int gap_start = -1;
    auto close_gap = [&](int gap_end, int barrier_after) {
        if (gap_start < 0) return;
        Region r;
        r.y_lo = y_lo + gap_start * dy;
        r.y_hi = y_lo + gap_end * dy;
        if (gap_start > 0) r.lower = bars[static_cast<std::size_t>(gap_start - 1)];
        if (barrier_after >= 0) r.upper = bars[static_cast<std::size_t>(barrier_after)];
        // A barrier's fitted band can be wider than the scan cell it was found
        // in; the region is what lies strictly between the frontier bands.
        if (r.lower) r.y_lo = std::max(r.y_lo, r.lower->band_hi);
        if (r.upper) r.y_hi = std::min(r.y_hi, r.upper->band_lo);
        if (r.y_hi - r.y_lo <= 1e-9) { gap_start = -1; return; }
        regions.push_back(std::move(r));
        gap_start = -1;
    };
    for (int i = 0; i < scan_resolution; ++i) {
        if (bars[static_cast<std::size_t>(i)]) close_gap(i, i);
        else if (gap_start < 0) gap_start = i;
    }
    close_gap(scan_resolution, -1);

    for (auto& r : regions) {
        std::vector<LiftPoint> seeds;
        for (int j = 0; j < opts.rotation_seeds_y; ++j)
            for (int i = 0; i < opts.rotation_seeds_x; ++i)
                seeds.emplace_back(static_cast<double>(i) / opts.rotation_seeds_x + 0.01,
                                   r.y_lo + (j + 0.5) * (r.y_hi - r.y_lo) / opts.rotation_seeds_y);
        try {
            r.rotation_interval =
                rotation_interval_of_set(map, seeds, opts.rotation_orbit_len, exec);
        } catch (const AtlasError&) {
            continue;
        }

        if (opts.inventory_q_max > 0) {
            Window win{0.0, 1.0, r.y_lo, r.y_hi};
            for (int q = 1; q <= opts.inventory_q_max; ++q) {
                int p_lo = static_cast<int>(std::ceil(r.rotation_interval.lo * q));
                int p_hi = static_cast<int>(std::floor(r.rotation_interval.hi * q));
                for (int p = p_lo; p <= p_hi; ++p) {
                    if (std::gcd(std::abs(p), q) != 1) continue;
                    auto found = find_all_pq(map, p, q, win, opts.inventory_grid,
                                             opts.inventory_grid, opts.newton, exec);
                    for (auto& o : found) r.inventory.push_back(std::move(o));
                }
            }
        }
    }
    return regions;
}

namespace {

double frontier_distance(const Region& r, FrontierSide side, const LiftPoint& z,
                         bool& missing) {
    const std::optional<Barrier>& bar = (side == FrontierSide::Upper) ? r.upper : r.lower;
    if (bar) return bar->distance_to(z);
    missing = true;
    double edge = (side == FrontierSide::Upper) ? r.y_hi : r.y_lo;
    return std::abs(z.y - edge);
}

std::vector<LiftPoint> tangle_seeds(const LiftedMap& map, const Region& r, int n_seeds) {
    // Seeds along the unstable directions of the region's saddles; transport
    // happens inside the tangles, so start the search there.
    std::vector<LiftPoint> seeds;
    std::vector<const PeriodicOrbit*> saddles;
    for (const auto& o : r.inventory)
        if (o.stability == Stability::Hyperbolic) saddles.push_back(&o);

    if (saddles.empty()) {
        for (int i = 0; i < n_seeds; ++i)
            seeds.emplace_back(static_cast<double>(i) / n_seeds,
                               r.y_lo + (0.3 + 0.4 * (i % 5) / 5.0) * (r.y_hi - r.y_lo));
        return seeds;
    }
    std::size_t si = 0;
    while (static_cast<int>(seeds.size()) < n_seeds) {
        const PeriodicOrbit& o = *saddles[si % saddles.size()];
        Mat2 m = jacobian_power(map, o.representative(), o.q);
        double t = m.trace();
        double disc = std::sqrt(std::max(0.0, t * t - 4.0));
        double lambda = (t + (t > 0 ? disc : -disc)) / 2.0;
        LiftPoint v{m.b, lambda - m.a};
        double nv = norm(v);
        if (nv == 0.0) { ++si; continue; }
        v = v * (1.0 / nv);
        int j = static_cast<int>(seeds.size());
        double off = 1e-5 * std::pow(10.0, 2.0 * ((j / 2) % 8) / 8.0);
        double sgn = (j % 2 == 0) ? 1.0 : -1.0;
        seeds.push_back(o.representative() + v * (sgn * off));
        ++si;
    }
    return seeds;
}

}  // namespace

ConnectingOrbitEvidence connecting_orbit_search(const LiftedMap& map, const Region& region,
                                                const ConnectingOrbitOptions& opts,
                                                Exec exec) {
    std::vector<LiftPoint> seeds = tangle_seeds(map, region, opts.n_seeds);
    std::vector<ConnectingOrbitEvidence> ev(seeds.size());
    par_for(seeds.size(), [&](std::size_t i) {
        ConnectingOrbitEvidence e;
        e.start = seeds[i];
        e.forward_min_dist_to_upper = 1e300;
        e.backward_min_dist_to_lower = 1e300;
        bool missing = false;
        LiftPoint w = seeds[i];
        try {
            for (std::int64_t n = 0; n < opts.n_steps; ++n) {
                w = map.apply(w);
                double d = frontier_distance(region, FrontierSide::Upper, w, missing);
                if (d < e.forward_min_dist_to_upper) e.forward_min_dist_to_upper = d;
                ++e.n_forward;
                if (w.y > region.y_hi + 1.0 || w.y < region.y_lo - 1.0) break;
            }
            w = seeds[i];
            for (std::int64_t n = 0; n < opts.n_steps; ++n) {
                w = map.apply_inverse(w);
                double d = frontier_distance(region, FrontierSide::Lower, w, missing);
                if (d < e.backward_min_dist_to_lower) e.backward_min_dist_to_lower = d;
                ++e.n_backward;
                if (w.y > region.y_hi + 1.0 || w.y < region.y_lo - 1.0) break;
            }
        } catch (const NonFinite&) {
            // keep the distances achieved before the blow-up
        }
        e.frontier_missing = missing;
        e.success = e.forward_min_dist_to_upper < opts.delta &&
                    e.backward_min_dist_to_lower < opts.delta;
        ev[i] = e;
    }, exec);

    // Lexicographic best in (forward distance, backward distance).
    std::size_t best = 0;
    for (std::size_t i = 1; i < ev.size(); ++i) {
        const auto &a = ev[i], &b = ev[best];
        if (a.forward_min_dist_to_upper < b.forward_min_dist_to_upper ||
            (a.forward_min_dist_to_upper == b.forward_min_dist_to_upper &&
             a.backward_min_dist_to_lower < b.backward_min_dist_to_lower))
            best = i;
        if (ev[best].success) break;
    }
    for (const auto& e : ev)
        if (e.success) return e;
    return ev.empty() ? ConnectingOrbitEvidence{} : ev[best];
}

EscapeStats escape_time_stats(const LiftedMap& map, const Region& region, FrontierSide side,
                              double band_width, int n_seeds, std::int64_t n_cap, Exec exec) {
    if (band_width <= 0.0) throw InvalidBand("escape_time_stats: band_width must be > 0");
    EscapeStats st;
    st.band_width = band_width;
    st.cap = n_cap;

    const std::optional<Barrier>& bar = (side == FrontierSide::Upper) ? region.upper : region.lower;
    double sign = (side == FrontierSide::Upper) ? -1.0 : 1.0;  // region side of the frontier
    auto psi = [&](double x) {
        if (bar) return bar->psi(x);
        return (side == FrontierSide::Upper) ? region.y_hi : region.y_lo;
    };
    // Seed grid in W, skipping seeds essentially on the barrier graph.
    const double exclusion = band_width / 20.0;
    std::vector<LiftPoint> seeds;
    int nx = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_seeds))));
    int ny = (n_seeds + nx - 1) / nx;
    for (int j = 0; j < ny && static_cast<int>(seeds.size()) < n_seeds; ++j)
        for (int i = 0; i < nx && static_cast<int>(seeds.size()) < n_seeds; ++i) {
            double x = (i + 0.5) / nx;
            double off = (j + 0.5) / ny * band_width;
            if (off < exclusion) continue;
            seeds.emplace_back(x, psi(x) + sign * off);
        }

    std::vector<std::int64_t> times(seeds.size(), -1);
    par_for(seeds.size(), [&](std::size_t i) {
        LiftPoint w = seeds[i];
        try {
            for (std::int64_t n = 1; n <= n_cap; ++n) {
                w = map.apply(w);
                double off = sign * (w.y - psi(w.x));
                if (off < 0.0 || off > band_width) { times[i] = n; return; }
            }
        } catch (const NonFinite&) {
            times[i] = -1;
        }
    }, exec);

    st.n_total = static_cast<std::int64_t>(seeds.size());
    int bins = 1;
    while ((1LL << bins) < n_cap) ++bins;
    st.histogram.assign(static_cast<std::size_t>(bins) + 1, 0);
    for (std::int64_t t : times) {
        if (t < 0) continue;
        ++st.n_escaped;
        int b = 0;
        while ((1LL << (b + 1)) <= t) ++b;
        ++st.histogram[static_cast<std::size_t>(std::min(b, bins))];
    }
    return st;
}

std::vector<PeriodicOrbit> region_boundary_orbits(const LiftedMap& map, const Region& region,
                                                  FrontierSide side, double band_width,
                                                  int q_max, const NewtonOptions& newton,
                                                  Exec exec) {
    if (band_width <= 0.0) throw InvalidBand("region_boundary_orbits: band_width must be > 0");
    const std::optional<Barrier>& bar = (side == FrontierSide::Upper) ? region.upper : region.lower;
    double sign = (side == FrontierSide::Upper) ? -1.0 : 1.0;
    auto psi = [&](double x) {
        if (bar) return bar->psi(x);
        return (side == FrontierSide::Upper) ? region.y_hi : region.y_lo;
    };
    auto in_band = [&](const LiftPoint& z) {
        double off = sign * (z.y - psi(z.x));
        return off >= 0.0 && off <= band_width;
    };

    // Sampled rotation interval of the band itself.
    std::vector<LiftPoint> probes;
    for (int i = 0; i < 24; ++i) {
        double x = (i + 0.5) / 24.0;
        probes.emplace_back(x, psi(x) + sign * band_width * (0.2 + 0.6 * (i % 3) / 3.0));
    }
    RotationInterval iv = rotation_interval_of_set(map, probes, 20'000, exec);

    double y_min = 1e300, y_max = -1e300;
    for (int i = 0; i < 64; ++i) {
        double v = psi(i / 64.0);
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
    }
    Window win{0.0, 1.0, std::min(y_min, y_min + sign * band_width) - 1e-9,
               std::max(y_max, y_max + sign * band_width) + 1e-9};

    std::vector<PeriodicOrbit> out;
    for (int q = 1; q <= q_max; ++q) {
        int p_lo = static_cast<int>(std::ceil(iv.lo * q));
        int p_hi = static_cast<int>(std::floor(iv.hi * q));
        for (int p = p_lo; p <= p_hi; ++p) {
            if (std::gcd(std::abs(p), q) != 1) continue;
            auto found = find_all_pq(map, p, q, win, 24, 12, newton, exec);
            for (auto& o : found) {
                bool inside = std::all_of(o.points.begin(), o.points.end(), in_band);
                if (inside) out.push_back(std::move(o));
            }
        }
    }
    return out;
}

CoverageReport coverage_report(const LiftedMap& map, const Window& window, int nx, int ny,
                               double delta, const CoverageOptions& opts, Exec exec) {
    CoverageReport rep;
    rep.window = window;
    rep.nx = nx;
    rep.ny = ny;
    rep.delta = delta;
    rep.cells.assign(static_cast<std::size_t>(nx) * ny,
                     static_cast<std::uint8_t>(CellClass::Unresolved));

    // Saddle discovery: rationals in the window's sampled rotation interval,
    // by increasing q, until the budget is spent.
    std::vector<LiftPoint> probes;
    for (int i = 0; i < 32; ++i)
        probes.emplace_back(window.x0 + (i % 8) * (window.x1 - window.x0) / 8.0,
                            window.y0 + (i / 8 + 0.5) * (window.y1 - window.y0) / 4.0);
    RotationInterval iv{0.0, 0.0, IntervalConfidence::Sampled};
    try {
        iv = rotation_interval_of_set(map, probes, 10'000, exec);
    } catch (const AtlasError&) {
        // keep the empty interval; only q=1 orbits will be probed
    }

    std::vector<PeriodicOrbit> saddles, elliptics;
    for (int q = 1; q <= opts.discovery_q_max &&
                    static_cast<int>(saddles.size()) < opts.saddle_budget; ++q) {
        int p_lo = static_cast<int>(std::floor(iv.lo * q)) - 1;
        int p_hi = static_cast<int>(std::ceil(iv.hi * q)) + 1;
        for (int p = p_lo; p <= p_hi; ++p) {
            if (std::gcd(std::abs(p), q) != 1) continue;
            std::vector<PeriodicOrbit> found;
            try {
                found = find_all_pq(map, p, q, window, opts.discovery_grid,
                                    opts.discovery_grid, opts.newton, exec);
            } catch (const std::exception&) {
                continue;
            }
            for (auto& o : found) {
                if (o.stability == Stability::Hyperbolic &&
                    static_cast<int>(saddles.size()) < opts.saddle_budget)
                    saddles.push_back(std::move(o));
                else if (o.stability == Stability::Elliptic)
                    elliptics.push_back(std::move(o));
            }
        }
    }
    rep.n_saddles = static_cast<int>(saddles.size());

    // Stable-manifold clouds of the discovered saddles.
    std::vector<LiftPoint> cloud;
    for (const auto& s : saddles) {
        for (BranchSign sg : {BranchSign::Plus, BranchSign::Minus}) {
            try {
                Branch b = grow_branch(map, s, BranchKind::Stable, sg,
                                       opts.stable_arclength, opts.grow);
                for (const auto& p : b.polyline) cloud.emplace_back(wrap01(p.x), p.y);
            } catch (const AtlasError&) {
                // skip branches that fail to grow
            }
        }
    }

    // Barrier bands across the window (elliptic-near evidence).
    std::vector<std::pair<double, double>> barrier_bands;
    {
        DecomposeOptions dopts;
        dopts.barrier = BarrierOptions{};
        dopts.barrier.orbit_len = 20'000;
        dopts.n_cert = opts.n_cert;
        dopts.inventory_q_max = 0;
        double dy = (window.y1 - window.y0) / opts.barrier_scan;
        for (int i = 0; i < opts.barrier_scan; ++i) {
            double lo = window.y0 + i * dy;
            auto bar = detect_barrier(map, lo, lo + dy, {}, opts.n_cert, dopts.barrier, exec);
            if (bar) barrier_bands.emplace_back(bar->band_lo, bar->band_hi);
        }
    }

    std::optional<CloudNN> nn;
    if (!cloud.empty()) nn.emplace(cloud);

    double cw = (window.x1 - window.x0) / nx;
    double ch = (window.y1 - window.y0) / ny;
    par_for(static_cast<std::size_t>(nx) * ny, [&](std::size_t idx) {
        int ix = static_cast<int>(idx % static_cast<std::size_t>(nx));
        int iy = static_cast<int>(idx / static_cast<std::size_t>(nx));
        LiftPoint c{window.x0 + (ix + 0.5) * cw, window.y0 + (iy + 0.5) * ch};
        if (nn && nn->nearest(c) <= delta) {
            rep.cells[idx] = static_cast<std::uint8_t>(CellClass::HyperbolicNear);
            return;
        }
        for (const auto& [lo, hi] : barrier_bands)
            if (c.y >= lo && c.y <= hi) {
                rep.cells[idx] = static_cast<std::uint8_t>(CellClass::EllipticNear);
                return;
            }
        for (const auto& e : elliptics)
            for (const auto& pt : e.points)
                if (annulus_dist(c, pt) <= delta) {
                    rep.cells[idx] = static_cast<std::uint8_t>(CellClass::EllipticNear);
                    return;
                }
    }, exec);

    std::size_t h = 0, e = 0;
    for (auto c : rep.cells) {
        if (c == static_cast<std::uint8_t>(CellClass::HyperbolicNear)) ++h;
        else if (c == static_cast<std::uint8_t>(CellClass::EllipticNear)) ++e;
    }
    auto total = static_cast<double>(rep.cells.size());
    rep.h_fraction = static_cast<double>(h) / total;
    rep.e_fraction = static_cast<double>(e) / total;
    rep.unresolved_fraction = 1.0 - rep.h_fraction - rep.e_fraction;
    return rep;
}

}  // namespace atlas
