#include "atlas/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "atlas/errors.hpp"
#include "atlas/orbit.hpp"

namespace atlas {

namespace {

bool lex_less(const LiftPoint& a, const LiftPoint& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

// True period check: points pairwise distinct mod 1.
int smallest_period(const std::vector<LiftPoint>& pts, double tol) {
    int q = static_cast<int>(pts.size());
    for (int d = 1; d < q; ++d) {
        if (q % d != 0) continue;
        bool matches = true;
        for (int i = 0; i + d < q && matches; ++i)
            if (annulus_dist(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(i + d)]) > tol)
                matches = false;
        if (matches) return d;
    }
    return q;
}

}  // namespace

const LiftPoint& PeriodicOrbit::representative() const {
    return *std::min_element(points.begin(), points.end(), lex_less);
}

std::string stability_name(Stability s) {
    switch (s) {
        case Stability::Degenerate: return "degenerate";
        case Stability::Elliptic: return "elliptic";
        case Stability::Hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

std::string newton_status_name(NewtonStatus s) {
    switch (s) {
        case NewtonStatus::Converged: return "converged";
        case NewtonStatus::NotConverged: return "not_converged";
        case NewtonStatus::SingularJacobian: return "singular_jacobian";
        case NewtonStatus::PeriodDivisor: return "period_divisor";
    }
    return "unknown";
}

std::vector<LiftPoint> seed_grid(const Window& window, int nx, int ny) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("seed_grid: nx, ny must be >= 1");
    std::vector<LiftPoint> seeds;
    seeds.reserve(static_cast<size_t>(nx) * ny);
    double dx = (window.x1 - window.x0) / nx;
    double dy = (window.y1 - window.y0) / ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            seeds.emplace_back(window.x0 + i * dx, window.y0 + j * dy);
    return seeds;
}

Mat2 jacobian_power(const LiftedMap& map, const LiftPoint& z, int q) {
    Mat2 m = Mat2::identity();
    LiftPoint w = z;
    for (int i = 0; i < q; ++i) {
        m = map.jacobian(w) * m;
        w = map.apply(w);
    }
    return m;
}

NewtonOutcome newton_pq(const LiftedMap& map, const LiftPoint& seed, int p, int q,
                        const NewtonOptions& opts) {
    if (q < 1) throw std::invalid_argument("newton_pq: q must be >= 1");
    NewtonOutcome out;
    LiftPoint z = seed;

    auto residual_vec = [&](const LiftPoint& w) -> LiftPoint {
        LiftPoint img = iterate_to(map, w, q);
        return {img.x - w.x - static_cast<double>(p), img.y - w.y};
    };

    LiftPoint r;
    try {
        r = residual_vec(z);
    } catch (const NonFinite&) {
        out.status = NewtonStatus::NotConverged;
        return out;
    }
    double res = sup_norm(r);

    for (int it = 0; it < opts.max_iters && res >= opts.tol; ++it) {
        Mat2 a = jacobian_power(map, z, q);
        a.a -= 1.0;
        a.d -= 1.0;  // D(f^q) - I; the deck shift has identity derivative
        double scale = std::max({1.0, std::abs(a.a), std::abs(a.b), std::abs(a.c), std::abs(a.d)});
        if (std::abs(a.det()) < 1e-12 * scale * scale) {
            out.status = NewtonStatus::SingularJacobian;
            out.final_residual = res;
            return out;
        }
        LiftPoint step = a.inverse() * r;
        bool improved = false;
        double damping = 1.0;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            LiftPoint trial = z - step * damping;
            double trial_res;
            try {
                trial_res = sup_norm(residual_vec(trial));
            } catch (const NonFinite&) {
                damping *= 0.5;
                continue;
            }
            if (trial_res < res) {
                z = trial;
                r = residual_vec(z);
                res = trial_res;
                improved = true;
                break;
            }
            damping *= 0.5;
        }
        if (!improved) break;
    }

    out.final_residual = res;
    if (res >= opts.tol) {
        out.status = NewtonStatus::NotConverged;
        return out;
    }

    // Assemble the orbit; reduce x to [0,1) for storage.
    std::vector<LiftPoint> pts;
    pts.reserve(static_cast<size_t>(q));
    LiftPoint w = z;
    for (int i = 0; i < q; ++i) {
        pts.emplace_back(wrap01(w.x), w.y);
        w = map.apply(w);
    }
    int true_period = smallest_period(pts, opts.dedup_tol);
    if (true_period < q) {
        out.status = NewtonStatus::PeriodDivisor;
        out.divisor = true_period;
        return out;
    }

    PeriodicOrbit orbit;
    orbit.p = p;
    orbit.q = q;
    orbit.points = std::move(pts);
    orbit.newton_residual = res;
    ClassifyResult cl = classify(map, z, p, q, opts.degeneracy_band);
    orbit.stability = cl.stability;
    orbit.eig_small = cl.eig_small;
    orbit.eig_large = cl.eig_large;
    orbit.residue = cl.residue;

    out.status = NewtonStatus::Converged;
    out.orbit = std::move(orbit);
    return out;
}

ClassifyResult classify(const LiftedMap& map, const LiftPoint& orbit_point,
                        int p, int q, double degeneracy_band) {
    LiftPoint img = iterate_to(map, orbit_point, q);
    LiftPoint res{img.x - orbit_point.x - static_cast<double>(p), img.y - orbit_point.y};
    if (sup_norm(res) >= 1e-8)
        throw ResidualTooLarge("classify: periodicity residual " +
                               std::to_string(sup_norm(res)));

    Mat2 m = jacobian_power(map, orbit_point, q);
    double t = m.trace();
    ClassifyResult out;
    out.trace = t;
    out.residue = (2.0 - t) / 4.0;
    if (std::abs(std::abs(t) - 2.0) <= degeneracy_band) {
        out.stability = Stability::Degenerate;
        double e = (t > 0) ? 1.0 : -1.0;
        out.eig_small = out.eig_large = e;
    } else if (std::abs(t) < 2.0) {
        out.stability = Stability::Elliptic;
        double im = std::sqrt(4.0 - t * t) / 2.0;
        out.eig_small = {t / 2.0, -im};
        out.eig_large = {t / 2.0, im};
    } else {
        out.stability = Stability::Hyperbolic;
        double s = std::sqrt(t * t - 4.0);
        double big = (t + (t > 0 ? s : -s)) / 2.0;  // larger magnitude root
        double small = 1.0 / big;                   // det = 1
        out.eig_small = small;
        out.eig_large = big;
    }
    return out;
}

FixedPointIndex fixed_point_index(const LiftedMap& map, const LiftPoint& z,
                                  int p, int q, double radius, int min_samples) {
    if (radius <= 0.0) throw std::invalid_argument("fixed_point_index: radius must be > 0");
    const double two_pi = 2.0 * M_PI;

    for (int n = std::max(min_samples, 4); n <= (1 << 20); n *= 2) {
        std::vector<double> increments;
        increments.reserve(static_cast<size_t>(n));
        double prev_angle = 0.0;
        bool first = true;
        bool too_coarse = false;
        double total = 0.0;

        for (int i = 0; i <= n; ++i) {
            double theta = two_pi * i / n;
            LiftPoint w{z.x + radius * std::cos(theta), z.y + radius * std::sin(theta)};
            LiftPoint img = iterate_to(map, w, q);
            LiftPoint v{img.x - w.x - static_cast<double>(p), img.y - w.y};
            double len = norm(v);
            if (len < 1e-14 * std::max(1.0, radius))
                throw ZeroVectorOnCircle("fixed_point_index: vanishing vector on sampling circle");
            double ang = std::atan2(v.y, v.x);
            if (!first) {
                double d = ang - prev_angle;
                while (d > M_PI) d -= two_pi;
                while (d < -M_PI) d += two_pi;
                if (std::abs(d) > M_PI / 2.0) { too_coarse = true; break; }
                increments.push_back(d);
                total += d;
            }
            prev_angle = ang;
            first = false;
        }
        if (too_coarse) continue;

        double turns = total / two_pi;
        double nearest = std::round(turns);
        if (std::abs(turns - nearest) > 1e-3)
            throw AmbiguousWinding("fixed_point_index: total turning " +
                                   std::to_string(turns) + " not near an integer");
        FixedPointIndex out;
        out.value = static_cast<int>(nearest);
        out.radius = radius;
        out.turning_data = std::move(increments);
        return out;
    }
    throw AmbiguousWinding("fixed_point_index: angle increments stayed too large");
}

std::vector<PeriodicOrbit> find_all_pq(const LiftedMap& map, int p, int q,
                                       const Window& window, int nx, int ny,
                                       const NewtonOptions& opts, Exec exec) {
    if (q < 1) throw std::invalid_argument("find_all_pq: q must be >= 1");
    if (std::gcd(std::abs(p), q) != 1)
        throw std::invalid_argument("find_all_pq: p and q must be relatively prime");

    std::vector<LiftPoint> seeds = seed_grid(window, nx, ny);
    std::vector<NewtonOutcome> outcomes(seeds.size());
    par_for(seeds.size(), [&](size_t i) {
        try {
            outcomes[i] = newton_pq(map, seeds[i], p, q, opts);
        } catch (...) {
            outcomes[i].status = NewtonStatus::NotConverged;
        }
    }, exec);

    // Merge in seed order so the result is independent of the execution mode.
    std::vector<PeriodicOrbit> found;
    auto same_orbit = [&](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        if (a.points.size() != b.points.size()) return false;
        for (const auto& pa : a.points) {
            double best = 1e300;
            for (const auto& pb : b.points) best = std::min(best, annulus_dist(pa, pb));
            if (best > opts.dedup_tol) return false;
        }
        return true;
    };

    for (auto& oc : outcomes) {
        if (oc.status != NewtonStatus::Converged) continue;
        const LiftPoint& rep = oc.orbit.representative();
        if (!window.contains(rep)) continue;
        bool dup = false;
        for (const auto& f : found)
            if (same_orbit(oc.orbit, f)) { dup = true; break; }
        if (!dup) found.push_back(std::move(oc.orbit));
    }

    std::sort(found.begin(), found.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        return lex_less(a.representative(), b.representative());
    });
    return found;
}

}  // namespace atlas
