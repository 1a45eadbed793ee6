#include "atlas/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "atlas/errors.hpp"
#include "atlas/orbit.hpp"

namespace atlas {

namespace {

LiftPoint eigenvector_of(const Mat2& m, double lambda) {
    // (m - lambda I) v = 0; take the better-conditioned row.
    LiftPoint v1{m.b, lambda - m.a};
    LiftPoint v2{lambda - m.d, m.c};
    LiftPoint v = (norm(v1) >= norm(v2)) ? v1 : v2;
    double n = norm(v);
    if (n == 0.0) throw NotHyperbolic("eigenvector degenerate");
    return v * (1.0 / n);
}

LiftPoint eval_branch_point(const LiftedMap& eff, const Branch::SeedData& sd,
                            double eps, double s) {
    double level = std::floor(s);
    double t = s - level;
    double r = eps * std::pow(sd.lambda, t);
    LiftPoint w = sd.saddle + sd.dir * r;
    auto steps = static_cast<std::int64_t>(level) * sd.steps_per_level;
    for (std::int64_t i = 0; i < steps; ++i) w = eff.apply(w);
    return w;
}

double turn_angle(const LiftPoint& a, const LiftPoint& b, const LiftPoint& c) {
    LiftPoint u = b - a, v = c - b;
    double nu = norm(u), nv = norm(v);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    double cosang = (u.x * v.x + u.y * v.y) / (nu * nv);
    cosang = std::clamp(cosang, -1.0, 1.0);
    return std::acos(cosang);
}

void recompute_cumlen(Branch& b) {
    b.cumlen.assign(b.polyline.size(), 0.0);
    for (size_t i = 1; i < b.polyline.size(); ++i)
        b.cumlen[i] = b.cumlen[i - 1] + norm(b.polyline[i] - b.polyline[i - 1]);
    b.arclength = b.cumlen.empty() ? 0.0 : b.cumlen.back();
}

// Segment crossing in the plane; returns parameters (t, u) in [0,1]^2.
bool segment_cross(const LiftPoint& p1, const LiftPoint& p2,
                   const LiftPoint& q1, const LiftPoint& q2,
                   double& t, double& u) {
    LiftPoint r = p2 - p1, s = q2 - q1;
    double denom = r.x * s.y - r.y * s.x;
    if (denom == 0.0) return false;
    LiftPoint d = q1 - p1;
    t = (d.x * s.y - d.y * s.x) / denom;
    u = (d.x * r.y - d.y * r.x) / denom;
    return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

}  // namespace

std::string branch_kind_name(BranchKind k) {
    return k == BranchKind::Stable ? "stable" : "unstable";
}
std::string branch_sign_name(BranchSign s) {
    return s == BranchSign::Plus ? "plus" : "minus";
}

Branch branch_seed(const LiftedMap& map, const PeriodicOrbit& orbit,
                   BranchKind kind, BranchSign sign, double eps, int n_samples) {
    if (orbit.stability != Stability::Hyperbolic)
        throw NotHyperbolic("branch_seed: orbit is " + stability_name(orbit.stability));
    if (eps <= 0.0) throw InvalidEps("branch_seed: eps must be > 0");
    n_samples = std::max(n_samples, 8);

    LiftedMap eff = (kind == BranchKind::Unstable) ? map : map.reversed();
    LiftPoint z = orbit.representative();
    Mat2 m = jacobian_power(eff, z, orbit.q);
    double t = m.trace();
    if (std::abs(t) <= 2.0) throw NotHyperbolic("branch_seed: |trace| <= 2");
    double disc = std::sqrt(t * t - 4.0);
    double lambda = (t + (t > 0 ? disc : -disc)) / 2.0;  // expanding eigenvalue

    Branch b;
    b.owner = orbit;
    b.kind = kind;
    b.sign = sign;
    b.eps = eps;
    b.seed_data.saddle = z;
    LiftPoint v = eigenvector_of(m, lambda);
    if (sign == BranchSign::Minus) v = v * -1.0;
    b.seed_data.dir = v;
    if (lambda < 0.0) {
        // Orientation-reversing along the branch: work with f^(2q).
        b.seed_data.lambda = lambda * lambda;
        b.seed_data.steps_per_level = 2 * orbit.q;
    } else {
        b.seed_data.lambda = lambda;
        b.seed_data.steps_per_level = orbit.q;
    }

    for (int i = 0; i <= n_samples; ++i) {
        double s = static_cast<double>(i) / n_samples;
        b.params.push_back(s);
        b.polyline.push_back(eval_branch_point(eff, b.seed_data, eps, s));
    }
    recompute_cumlen(b);
    return b;
}

Branch grow_branch(const LiftedMap& map, const Branch& seed,
                   double target_arclength, const GrowOptions& opts) {
    Branch b = seed;
    b.max_gap = opts.max_gap;
    b.max_turn = opts.max_turn;
    LiftedMap eff = (b.kind == BranchKind::Unstable) ? map : map.reversed();
    const double min_ds = 1e-12;

    auto eval = [&](double s) { return eval_branch_point(eff, b.seed_data, b.eps, s); };

    // Appends the anchor points (s strictly increasing, starting past the
    // current tail), splitting segments in parameter space until both the
    // gap and the turning angle at the tail vertex are within bounds.
    auto append_refined = [&](const std::vector<double>& anchors) {
        std::vector<std::pair<double, LiftPoint>> stack;  // descending s on top
        for (auto it = anchors.rbegin(); it != anchors.rend(); ++it)
            stack.emplace_back(*it, eval(*it));
        while (!stack.empty()) {
            if (b.polyline.size() >= opts.point_cap) { b.truncated = true; return; }
            auto [s, pt] = stack.back();
            double s_prev = b.params.back();
            const LiftPoint& p_prev = b.polyline.back();
            double ds = s - s_prev;
            bool split = false;
            if (ds > min_ds) {
                if (norm(pt - p_prev) > b.max_gap) split = true;
                else if (b.polyline.size() >= 2 &&
                         turn_angle(b.polyline[b.polyline.size() - 2], p_prev, pt) > b.max_turn)
                    split = true;
            }
            if (split) {
                double mid = 0.5 * (s_prev + s);
                stack.emplace_back(mid, eval(mid));
            } else {
                b.params.push_back(s);
                b.polyline.push_back(pt);
                stack.pop_back();
            }
        }
    };

    // Refine the seed segment itself, then add levels until the target.
    {
        std::vector<double> anchors(b.params.begin() + 1, b.params.end());
        std::vector<double> first_param(1, b.params.front());
        LiftPoint first_pt = b.polyline.front();
        b.params = std::move(first_param);
        b.polyline.assign(1, first_pt);
        append_refined(anchors);
    }
    recompute_cumlen(b);

    while (b.arclength < target_arclength && !b.truncated) {
        double s_max = b.params.back();
        double level_end = std::floor(s_max + 1.0 + 1e-9);
        // The previous level's parameters shifted by one give the anchors of
        // the next level (the image of the refined polyline under f^Q).
        std::vector<double> anchors;
        for (double sp : b.params) {
            double s = sp + 1.0;
            if (s > s_max + min_ds && s <= level_end + 1e-12) anchors.push_back(s);
        }
        if (anchors.empty()) anchors.push_back(s_max + 1.0);
        append_refined(anchors);
        recompute_cumlen(b);
        if (!b.polyline.back().finite()) throw NonFinite("grow_branch: branch diverged");
    }
    return b;
}

Branch grow_branch(const LiftedMap& map, const PeriodicOrbit& orbit,
                   BranchKind kind, BranchSign sign, double target_arclength,
                   const GrowOptions& opts, double eps) {
    return grow_branch(map, branch_seed(map, orbit, kind, sign, eps), target_arclength, opts);
}

std::vector<HeteroclinicPoint> branch_intersections(const Branch& b1, const Branch& b2) {
    if (b1.kind == b2.kind)
        throw std::invalid_argument("branch_intersections: need one stable and one unstable branch");
    std::vector<HeteroclinicPoint> out;
    if (b1.polyline.size() < 2 || b2.polyline.size() < 2) return out;

    // Spatial hash of b2 segments on the annulus (cells in x mod 1 and y).
    const double cell = std::max({b1.max_gap, b2.max_gap, 1e-3}) * 2.0;
    const int nx_cells = std::max(1, static_cast<int>(std::floor(1.0 / cell)));
    auto cell_key = [&](int cx, int cy) {
        return static_cast<long long>(cy) * 1'000'003LL + ((cx % nx_cells) + nx_cells) % nx_cells;
    };
    std::unordered_map<long long, std::vector<size_t>> grid;
    auto insert_segment = [&](size_t idx) {
        const LiftPoint& a = b2.polyline[idx];
        const LiftPoint& c = b2.polyline[idx + 1];
        double xm = wrap01(0.5 * (a.x + c.x));
        int cx0 = static_cast<int>(std::floor((xm - cell) * nx_cells));
        int cx1 = static_cast<int>(std::floor((xm + cell) * nx_cells));
        int cy0 = static_cast<int>(std::floor(std::min(a.y, c.y) / cell)) - 1;
        int cy1 = static_cast<int>(std::floor(std::max(a.y, c.y) / cell)) + 1;
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int cx = cx0; cx <= cx1; ++cx)
                grid[cell_key(cx, cy)].push_back(idx);
    };
    for (size_t j = 0; j + 1 < b2.polyline.size(); ++j) insert_segment(j);

    for (size_t i = 0; i + 1 < b1.polyline.size(); ++i) {
        const LiftPoint& p1 = b1.polyline[i];
        const LiftPoint& p2 = b1.polyline[i + 1];
        double xm = wrap01(0.5 * (p1.x + p2.x));
        int cx0 = static_cast<int>(std::floor((xm - cell) * nx_cells));
        int cx1 = static_cast<int>(std::floor((xm + cell) * nx_cells));
        int cy0 = static_cast<int>(std::floor(std::min(p1.y, p2.y) / cell)) - 1;
        int cy1 = static_cast<int>(std::floor(std::max(p1.y, p2.y) / cell)) + 1;
        std::vector<size_t> cands;
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int cx = cx0; cx <= cx1; ++cx) {
                auto it = grid.find(cell_key(cx, cy));
                if (it != grid.end())
                    cands.insert(cands.end(), it->second.begin(), it->second.end());
            }
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

        for (size_t j : cands) {
            const LiftPoint& q1 = b2.polyline[j];
            const LiftPoint& q2 = b2.polyline[j + 1];
            // Crossing in the annulus: some integer deck shift of the b1
            // segment crosses the b2 segment in the lift.
            double base = 0.5 * (q1.x + q2.x) - 0.5 * (p1.x + p2.x);
            int m0 = static_cast<int>(std::floor(base)) - 1;
            for (int m = m0; m <= m0 + 2; ++m) {
                LiftPoint s1 = p1.translate(m), s2 = p2.translate(m);
                double t, u;
                if (!segment_cross(s1, s2, q1, q2, t, u)) continue;
                LiftPoint loc = s1 + (s2 - s1) * t;
                HeteroclinicPoint hp;
                hp.location = {wrap01(loc.x), loc.y};
                hp.arclength_from = b1.cumlen[i] + t * (b1.cumlen[i + 1] - b1.cumlen[i]);
                hp.arclength_to = b2.cumlen[j] + u * (b2.cumlen[j + 1] - b2.cumlen[j]);
                LiftPoint d1 = s2 - s1, d2 = q2 - q1;
                double cross = std::abs(d1.x * d2.y - d1.y * d2.x);
                double dot = std::abs(d1.x * d2.x + d1.y * d2.y);
                hp.crossing_angle = std::atan2(cross, dot);
                hp.near_tangency = hp.crossing_angle < 1e-4;
                out.push_back(hp);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const HeteroclinicPoint& a, const HeteroclinicPoint& b) {
        return a.arclength_from < b.arclength_from;
    });
    return out;
}

HeteroclinicPoint primary_homoclinic(const LiftedMap& map, const PeriodicOrbit& orbit,
                                     const PrimaryHomoclinicOptions& opts) {
    for (double L = opts.initial_arclength; L <= opts.arclength_cap; L *= 2.0) {
        std::vector<Branch> unstable, stable;
        for (BranchSign sg : {BranchSign::Plus, BranchSign::Minus}) {
            unstable.push_back(grow_branch(map, orbit, BranchKind::Unstable, sg, L, opts.grow));
            stable.push_back(grow_branch(map, orbit, BranchKind::Stable, sg, L, opts.grow));
        }
        std::optional<HeteroclinicPoint> best;
        for (const auto& u : unstable)
            for (const auto& s : stable)
                for (const auto& hp : branch_intersections(u, s)) {
                    bool at_saddle = false;
                    for (const auto& pt : orbit.points)
                        if (annulus_dist(hp.location, pt) < opts.min_distance_from_saddle)
                            at_saddle = true;
                    if (at_saddle) continue;
                    if (!best || hp.arclength_from < best->arclength_from) best = hp;
                }
        if (best) return *best;
    }
    throw NotFoundWithinCap("primary_homoclinic: no crossing up to arclength cap");
}

}  // namespace atlas
