#include "atlas/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "atlas/errors.hpp"

namespace atlas {

namespace {

std::vector<Branch> grow_four_branches(const LiftedMap& map, const PeriodicOrbit& orbit,
                                       double arclength, const GrowOptions& grow,
                                       double eps) {
    std::vector<Branch> out;
    try {
        for (BranchKind k : {BranchKind::Unstable, BranchKind::Stable})
            for (BranchSign s : {BranchSign::Plus, BranchSign::Minus})
                out.push_back(grow_branch(map, orbit, k, s, arclength, grow, eps));
    } catch (const AtlasError& e) {
        throw BranchGrowthFailed(std::string("branch growth failed: ") + e.what());
    }
    return out;
}

// Conservative rasterization of a segment: marks every cell whose box the
// segment passes through (sampled at sub-cell resolution).
void rasterize_segment(SeparationMask& m, const LiftPoint& a, const LiftPoint& b) {
    double len = norm(b - a);
    int steps = std::max(1, static_cast<int>(std::ceil(len / (0.5 * m.cell))));
    for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        double x = wrap01(a.x + t * (b.x - a.x));
        double y = a.y + t * (b.y - a.y);
        int ix = std::min(m.nx - 1, static_cast<int>(x * m.nx));
        int iy = static_cast<int>((y - m.y_min) / m.cell);
        if (iy < 0 || iy >= m.ny) continue;
        m.occupied[static_cast<size_t>(iy) * m.nx + ix] = 1;
    }
}

// 4-connected flood fill through unoccupied cells, x periodic.
void flood(const SeparationMask& m, std::deque<std::pair<int, int>>& frontier,
           std::vector<uint8_t>& visited) {
    while (!frontier.empty()) {
        auto [ix, iy] = frontier.front();
        frontier.pop_front();
        static const int dx[4] = {1, -1, 0, 0};
        static const int dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int jx = ((ix + dx[d]) % m.nx + m.nx) % m.nx;
            int jy = iy + dy[d];
            if (jy < 0 || jy >= m.ny) continue;
            size_t idx = static_cast<size_t>(jy) * m.nx + jx;
            if (visited[idx] || m.occupied[idx]) continue;
            visited[idx] = 1;
            frontier.emplace_back(jx, jy);
        }
    }
}

}  // namespace

EssentialityVerdict classify_essentiality(const LiftedMap& map, const PeriodicOrbit& orbit,
                                          double arclength, double h,
                                          const EssentialityOptions& opts) {
    if (orbit.stability != Stability::Hyperbolic)
        throw NotHyperbolic("classify_essentiality: needs a saddle orbit");
    auto branches = grow_four_branches(map, orbit, arclength, opts.grow, opts.eps);

    double y_lo = 1e300, y_hi = -1e300;
    for (const auto& b : branches)
        for (const auto& p : b.polyline) {
            y_lo = std::min(y_lo, p.y);
            y_hi = std::max(y_hi, p.y);
        }
    if (h >= (y_hi - y_lo))
        throw ResolutionTooCoarse("classify_essentiality: h exceeds the manifold's y-extent");
    // Band: the cloud's y-range padded by 2h so the frontier rows are free.
    y_lo -= 2.0 * h;
    y_hi += 2.0 * h;

    SeparationMask mask;
    mask.cell = h;
    mask.nx = std::max(4, static_cast<int>(std::round(1.0 / h)));
    mask.ny = std::max(4, static_cast<int>(std::ceil((y_hi - y_lo) / h)));
    mask.y_min = y_lo;
    mask.y_max = y_lo + mask.ny * h;
    mask.occupied.assign(static_cast<size_t>(mask.nx) * mask.ny, 0);

    for (const auto& b : branches)
        for (size_t i = 0; i + 1 < b.polyline.size(); ++i)
            rasterize_segment(mask, b.polyline[i], b.polyline[i + 1]);

    // Fill from the bottom and top edges of the band.
    std::vector<uint8_t> from_bottom(mask.occupied.size(), 0), from_top(mask.occupied.size(), 0);
    std::deque<std::pair<int, int>> fb, ft;
    for (int ix = 0; ix < mask.nx; ++ix) {
        if (!mask.occupied[ix]) { from_bottom[ix] = 1; fb.emplace_back(ix, 0); }
        size_t top = static_cast<size_t>(mask.ny - 1) * mask.nx + ix;
        if (!mask.occupied[top]) { from_top[top] = 1; ft.emplace_back(ix, mask.ny - 1); }
    }
    flood(mask, fb, from_bottom);
    flood(mask, ft, from_top);

    bool separated = true;
    for (size_t i = 0; i < mask.occupied.size() && separated; ++i)
        if (from_bottom[i] && from_top[i]) separated = false;
    // The fills share a cell only if a frontier row itself touches both;
    // the real meeting test is whether any cell carries both labels.
    if (separated) {
        // Also fail separation when the bottom fill reaches the top row.
        for (int ix = 0; ix < mask.nx && separated; ++ix)
            if (from_bottom[static_cast<size_t>(mask.ny - 1) * mask.nx + ix]) separated = false;
    }

    EssentialityVerdict v;
    v.search_arclength = arclength;
    v.resolution = h;
    v.separation_mask = mask;
    if (!separated) {
        v.status = EssentialityStatus::NotFoundUpTo;
        return v;
    }

    // Certificate: a loop through occupied cells with winding +-1, found by
    // walking the occupied mask in the universal cover until a cell repeats
    // at a shifted deck copy; then snap cell centers onto branch points.
    v.status = EssentialityStatus::Essential;

    // BFS over occupied cells with unbounded ix.
    struct Key {
        int ix, iy;
        bool operator==(const Key& o) const { return ix == o.ix && iy == o.iy; }
    };
    struct KeyHash {
        size_t operator()(const Key& k) const {
            return std::hash<long long>()(static_cast<long long>(k.ix) * 131071 + k.iy);
        }
    };

    int start_ix = -1, start_iy = -1;
    for (int iy = 0; iy < mask.ny && start_ix < 0; ++iy)
        for (int ix = 0; ix < mask.nx && start_ix < 0; ++ix)
            if (mask.occupied[static_cast<size_t>(iy) * mask.nx + ix]) {
                start_ix = ix;
                start_iy = iy;
            }

    std::unordered_map<Key, Key, KeyHash> parent;
    std::deque<Key> bfs;
    Key start{start_ix, start_iy};
    parent[start] = start;
    bfs.push_back(start);
    Key goal{start_ix + mask.nx, start_iy};
    bool found = false;
    // 8-connectivity through the occupied set.
    static const int ddx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static const int ddy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    while (!bfs.empty() && !found) {
        Key c = bfs.front();
        bfs.pop_front();
        for (int d = 0; d < 8; ++d) {
            Key n{c.ix + ddx[d], c.iy + ddy[d]};
            if (n.iy < 0 || n.iy >= mask.ny) continue;
            if (std::abs(n.ix - start_ix) > 2 * mask.nx) continue;
            if (!mask.at(n.ix, n.iy)) continue;
            if (parent.count(n)) continue;
            parent[n] = c;
            if (n == goal) { found = true; break; }
            bfs.push_back(n);
        }
    }

    if (found) {
        std::vector<LiftPoint> loop;
        Key c = goal;
        while (!(c == start)) {
            loop.push_back({(c.ix + 0.5) * mask.cell, mask.y_min + (c.iy + 0.5) * mask.cell});
            c = parent[c];
        }
        loop.push_back({(start.ix + 0.5) * mask.cell, mask.y_min + (start.iy + 0.5) * mask.cell});
        std::reverse(loop.begin(), loop.end());
        // Snap interior vertices onto the nearest branch point in the cell.
        for (auto& pt : loop) {
            double best = 1e300;
            LiftPoint snapped = pt;
            for (const auto& b : branches)
                for (const auto& bp : b.polyline) {
                    double d = annulus_dist(pt, bp);
                    if (d < best && d <= 1.5 * mask.cell) {
                        best = d;
                        double shift = std::round(pt.x - bp.x);
                        snapped = {bp.x + shift, bp.y};
                    }
                }
            pt = snapped;
        }
        // Close the lift displacement to exactly one deck translation.
        loop.back() = loop.front().translate(1);
        v.certificate_curve = std::move(loop);
        v.winding = 1;
    }
    return v;
}

ManifoldCloud cloud_from_branches(const PeriodicOrbit& orbit,
                                  const std::vector<Branch>& branches,
                                  double arclength) {
    ManifoldCloud cloud;
    cloud.owner = orbit;
    cloud.arclength = arclength;
    std::unordered_set<long long> seen;
    auto push = [&](const LiftPoint& p) {
        LiftPoint q{wrap01(p.x), p.y};
        // dedup on a 1e-6 grid
        long long gx = static_cast<long long>(std::llround(q.x * 1e6));
        long long gy = static_cast<long long>(std::llround(q.y * 1e6));
        long long key = gx * 2'000'000'011LL + gy;
        if (seen.insert(key).second) cloud.points.push_back(q);
    };
    for (const auto& pt : orbit.points) push(pt);
    for (const auto& b : branches)
        for (size_t i = 0; i < b.polyline.size(); ++i) {
            if (b.cumlen[i] > arclength) break;
            push(b.polyline[i]);
        }
    return cloud;
}

ManifoldCloud sample_K(const LiftedMap& map, const PeriodicOrbit& orbit, double arclength,
                       const GrowOptions& grow, double eps) {
    if (orbit.stability != Stability::Hyperbolic)
        throw NotHyperbolic("sample_K: needs a saddle orbit");
    std::vector<Branch> branches;
    if (arclength > 0.0) branches = grow_four_branches(map, orbit, arclength, grow, eps);
    return cloud_from_branches(orbit, branches, arclength);
}

struct CloudNN::Impl {
    double cell;
    int nx;
    std::unordered_map<long long, std::vector<size_t>> cells;
    const std::vector<LiftPoint>& pts;
    double y_lo = 1e300, y_hi = -1e300;

    Impl(const std::vector<LiftPoint>& points, double cell_size)
        : cell(cell_size), nx(std::max(1, static_cast<int>(1.0 / cell_size))), pts(points) {
        for (size_t i = 0; i < pts.size(); ++i) {
            cells[key_of(pts[i])].push_back(i);
            y_lo = std::min(y_lo, pts[i].y);
            y_hi = std::max(y_hi, pts[i].y);
        }
    }
    long long key(int cx, int cy) const {
        return static_cast<long long>(cy) * 1'000'003LL + ((cx % nx) + nx) % nx;
    }
    long long key_of(const LiftPoint& p) const {
        return key(static_cast<int>(std::floor(wrap01(p.x) * nx)),
                   static_cast<int>(std::floor(p.y / cell)));
    }
    double nearest(const LiftPoint& p) const {
        int cx = static_cast<int>(std::floor(wrap01(p.x) * nx));
        int cy = static_cast<int>(std::floor(p.y / cell));
        int max_ring = static_cast<int>((y_hi - y_lo) / cell) + nx + 3;
        double best = 1e300;
        for (int ring = 0; ring <= max_ring; ++ring) {
            for (int dy = -ring; dy <= ring; ++dy)
                for (int dx = -ring; dx <= ring; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    if (std::abs(dx) > (nx + 1) / 2 && std::abs(dy) != ring) continue;
                    auto it = cells.find(key(cx + dx, cy + dy));
                    if (it == cells.end()) continue;
                    for (size_t i : it->second)
                        best = std::min(best, annulus_dist(p, pts[i]));
                }
            // Any point beyond ring r is at least (r-1)*cell away.
            if (best < 1e300 && best <= (ring - 1) * cell) break;
        }
        return best;
    }
};

CloudNN::CloudNN(const std::vector<LiftPoint>& points, double cell)
    : impl_(std::make_shared<Impl>(points, cell)) {}

double CloudNN::nearest(const LiftPoint& p) const { return impl_->nearest(p); }

double hausdorff(const ManifoldCloud& a, const ManifoldCloud& b) {
    if (a.points.empty() || b.points.empty()) throw EmptyCloud("hausdorff: empty cloud");
    CloudNN ga(a.points), gb(b.points);
    double d = 0.0;
    for (const auto& p : a.points) d = std::max(d, gb.nearest(p));
    for (const auto& p : b.points) d = std::max(d, ga.nearest(p));
    return d;
}

KEquivalenceResult k_equivalent(const LiftedMap& map, const PeriodicOrbit& a,
                                const PeriodicOrbit& b, double arclength_cap,
                                const GrowOptions& grow) {
    if (a.stability != Stability::Hyperbolic || b.stability != Stability::Hyperbolic)
        throw NotHyperbolic("k_equivalent: both orbits must be saddles");
    KEquivalenceResult res;
    std::vector<double> ladder;
    for (double L = std::min(8.0, arclength_cap); L < arclength_cap; L *= 2.0)
        ladder.push_back(L);
    ladder.push_back(arclength_cap);
    for (double L : ladder) {
        std::vector<Branch> ua, sa, ub, sb;
        for (BranchSign sg : {BranchSign::Plus, BranchSign::Minus}) {
            ua.push_back(grow_branch(map, a, BranchKind::Unstable, sg, L, grow));
            sa.push_back(grow_branch(map, a, BranchKind::Stable, sg, L, grow));
            ub.push_back(grow_branch(map, b, BranchKind::Unstable, sg, L, grow));
            sb.push_back(grow_branch(map, b, BranchKind::Stable, sg, L, grow));
        }
        auto first_crossing = [&](const std::vector<Branch>& us,
                                  const std::vector<Branch>& ss)
            -> std::optional<HeteroclinicPoint> {
            std::optional<HeteroclinicPoint> best;
            for (const auto& u : us)
                for (const auto& s : ss)
                    for (const auto& hp : branch_intersections(u, s))
                        if (!best || hp.arclength_from < best->arclength_from) best = hp;
            return best;
        };
        if (!res.witness_ab) res.witness_ab = first_crossing(ua, sb);
        if (!res.witness_ba) res.witness_ba = first_crossing(ub, sa);
        if (res.witness_ab && res.witness_ba) {
            res.verdict = KEquivalence::Equivalent;
            return res;
        }
    }
    res.verdict = KEquivalence::Undetermined;
    return res;
}

}  // namespace atlas
