#ifndef ATLAS_GEOMETRY_HPP
#define ATLAS_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <stdexcept>

namespace atlas {

// Point in lift coordinates: x lives on the universal cover (unbounded),
// y is the annulus height.
struct LiftPoint {
    double x = 0.0;
    double y = 0.0;

    LiftPoint() = default;
    LiftPoint(double x_, double y_) : x(x_), y(y_) {}

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    // Deck transformation T^k : (x,y) -> (x+k, y).
    LiftPoint translate(int k) const { return {x + static_cast<double>(k), y}; }

    LiftPoint operator+(const LiftPoint& o) const { return {x + o.x, y + o.y}; }
    LiftPoint operator-(const LiftPoint& o) const { return {x - o.x, y - o.y}; }
    LiftPoint operator*(double s) const { return {x * s, y * s}; }
};

inline double norm(const LiftPoint& p) { return std::hypot(p.x, p.y); }
inline double sup_norm(const LiftPoint& p) { return std::max(std::abs(p.x), std::abs(p.y)); }

// x reduced to [0,1); presentation only, never used mid-orbit.
inline double wrap01(double x) {
    double r = x - std::floor(x);
    return (r >= 1.0) ? 0.0 : r;
}

// Distance of x-coordinates on the circle R/Z.
inline double circle_dist(double x1, double x2) {
    double d = std::abs(wrap01(x1) - wrap01(x2));
    return std::min(d, 1.0 - d);
}

// Metric on the annulus: x measured mod 1, y as-is.
inline double annulus_dist(const LiftPoint& a, const LiftPoint& b) {
    return std::hypot(circle_dist(a.x, b.x), a.y - b.y);
}

struct Mat2 {
    // row-major: [[a,b],[c,d]] acting on (x,y)
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Mat2 identity() { return {}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    LiftPoint operator*(const LiftPoint& v) const {
        return {a * v.x + b * v.y, c * v.x + d * v.y};
    }
    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    Mat2 inverse() const {
        double dt = det();
        if (dt == 0.0) throw std::domain_error("Mat2::inverse: singular matrix");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
};

}  // namespace atlas

#endif
