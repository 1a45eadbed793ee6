#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "atlas/errors.hpp"
#include "atlas/map.hpp"
#include "atlas/orbit.hpp"
#include "oracles.hpp"

using namespace atlas;

TEST_CASE("geometry helpers") {
    CHECK(wrap01(1.25) == doctest::Approx(0.25));
    CHECK(wrap01(-0.25) == doctest::Approx(0.75));
    CHECK(wrap01(3.0) == 0.0);
    CHECK(circle_dist(0.1, 0.9) == doctest::Approx(0.2));
    CHECK(circle_dist(0.1, 2.1) == doctest::Approx(0.0));
    CHECK(annulus_dist({0.05, 1.0}, {0.95, 1.0}) == doctest::Approx(0.1));
    Mat2 m{1, 2, 3, 4};
    CHECK(m.det() == -2.0);
    CHECK(m.trace() == 5.0);
    Mat2 mi = m.inverse();
    Mat2 id = m * mi;
    CHECK(id.a == doctest::Approx(1.0));
    CHECK(id.b == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(id.c == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(id.d == doctest::Approx(1.0));
}

TEST_CASE("standard map step matches the formula") {
    LiftedMap f = LiftedMap::standard(0.9);
    LiftPoint z{0.3, 0.4};
    LiftPoint w = f.apply(z);
    oracle::Pt ow = oracle::standard_step({0.3L, 0.4L}, 0.9L);
    CHECK(w.x == doctest::Approx(double(ow.x)).epsilon(1e-15));
    CHECK(w.y == doctest::Approx(double(ow.y)).epsilon(1e-15));
    // 200 steps stay within accumulated roundoff of the long double oracle
    oracle::Pt oz{0.3L, 0.4L};
    for (int i = 0; i < 200; ++i) {
        z = f.apply(z);
        oz = oracle::standard_step(oz, 0.9L);
    }
    CHECK(z.x == doctest::Approx(double(oz.x)).epsilon(1e-9));
    CHECK(z.y == doctest::Approx(double(oz.y)).epsilon(1e-9));
}

TEST_CASE("nontwist map step matches the formula") {
    LiftedMap f = LiftedMap::nontwist(0.615, 0.4);
    LiftPoint w = f.apply({0.3, 0.2});
    oracle::Pt ow = oracle::nontwist_step({0.3L, 0.2L}, 0.615L, 0.4L);
    CHECK(w.x == doctest::Approx(double(ow.x)).epsilon(1e-15));
    CHECK(w.y == doctest::Approx(double(ow.y)).epsilon(1e-15));
}

TEST_CASE("inverses round-trip on all families") {
    for (const LiftedMap& f :
         {LiftedMap::standard(1.2), LiftedMap::nontwist(0.615, 0.4),
          LiftedMap::user("x + y - (k/(2*pi))*sin(2*pi*x)", "y - (k/(2*pi))*sin(2*pi*x)",
                          {{"k", 0.7}})}) {
        LiftPoint z{0.37, -0.21};
        LiftPoint back = f.apply_inverse(f.apply(z));
        CHECK(annulus_dist(back, z) < 1e-10);
        LiftPoint fwd = f.apply(f.apply_inverse(z));
        CHECK(annulus_dist(fwd, z) < 1e-10);
    }
}

TEST_CASE("user family reproduces the standard family") {
    LiftedMap s = LiftedMap::standard(0.9);
    LiftedMap u = LiftedMap::user("x + y - (k/(2*pi))*sin(2*pi*x)",
                                  "y - (k/(2*pi))*sin(2*pi*x)", {{"k", 0.9}});
    LiftPoint z{0.12, 0.55};
    for (int i = 0; i < 50; ++i) {
        LiftPoint a = s.apply(z), b = u.apply(z);
        CHECK(std::abs(a.x - b.x) < 1e-12);
        CHECK(std::abs(a.y - b.y) < 1e-12);
        z = a;
    }
}

TEST_CASE("jacobians") {
    // Standard map: Df = [[1-c, 1], [-c, 1]] with c = k cos(2 pi x),
    // so Df(0.5, 0) = [[1+k, 1], [k, 1]] and det = 1 everywhere.
    double k = 0.9;
    LiftedMap f = LiftedMap::standard(k);
    Mat2 J = f.jacobian({0.5, 0.0});
    CHECK(J.a == doctest::Approx(1.0 + k).epsilon(1e-14));
    CHECK(J.b == doctest::Approx(1.0));
    CHECK(J.c == doctest::Approx(k).epsilon(1e-14));
    CHECK(J.d == doctest::Approx(1.0));
    CHECK(J.det() == doctest::Approx(1.0).epsilon(1e-14));
    Mat2 J0 = f.jacobian({0.0, 0.0});
    CHECK(J0.trace() == doctest::Approx(2.0 - k).epsilon(1e-14));

    // Finite-difference cross-check at a generic point.
    LiftPoint z{0.234, -0.117};
    double h = 1e-6;
    Mat2 Jz = f.jacobian(z);
    LiftPoint dx = (f.apply({z.x + h, z.y}) - f.apply({z.x - h, z.y})) * (0.5 / h);
    LiftPoint dy = (f.apply({z.x, z.y + h}) - f.apply({z.x, z.y - h})) * (0.5 / h);
    CHECK(Jz.a == doctest::Approx(dx.x).epsilon(1e-8));
    CHECK(Jz.c == doctest::Approx(dx.y).epsilon(1e-8));
    CHECK(Jz.b == doctest::Approx(dy.x).epsilon(1e-8));
    CHECK(Jz.d == doctest::Approx(dy.y).epsilon(1e-8));

    // Nontwist map preserves area too.
    LiftedMap g = LiftedMap::nontwist(0.615, 0.4);
    CHECK(g.jacobian({0.3, 0.2}).det() == doctest::Approx(1.0).epsilon(1e-13));

    // D(f^-1)(f(z)) = Df(z)^-1.
    Mat2 Ji = f.jacobian_inverse(f.apply(z));
    Mat2 prod = Ji * Jz;
    CHECK(prod.a == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(prod.d == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(prod.b) < 1e-8);
    CHECK(std::abs(prod.c) < 1e-8);
}

TEST_CASE("reversed view swaps directions") {
    LiftedMap f = LiftedMap::standard(1.1);
    LiftedMap r = f.reversed();
    LiftPoint z{0.4, 0.3};
    CHECK(annulus_dist(r.apply(z), f.apply_inverse(z)) < 1e-12);
    CHECK(annulus_dist(r.apply_inverse(z), f.apply(z)) < 1e-12);
    Mat2 A = r.jacobian(z);
    Mat2 B = f.jacobian_inverse(z);
    CHECK(A.a == doctest::Approx(B.a).epsilon(1e-10));
    CHECK(A.d == doctest::Approx(B.d).epsilon(1e-10));
}

TEST_CASE("iterate stores the orbit and supports negative n") {
    LiftedMap f = LiftedMap::standard(0.9);
    auto orbit = iterate(f, {0.3, 0.4}, 10);
    REQUIRE(orbit.size() == 11);
    CHECK(annulus_dist(orbit[5], iterate_to(f, {0.3, 0.4}, 5)) < 1e-14);
    auto back = iterate(f, orbit.back(), -10);
    CHECK(annulus_dist(back.back(), {0.3, 0.4}) < 1e-8);
}

TEST_CASE("iterate reports non-finite blowup") {
    LiftedMap f = LiftedMap::user("x*3", "y*3");
    CHECK_THROWS_AS(iterate(f, {1e300, 1e300}, 50), NonFinite);
}

TEST_CASE("rotation number of the integrable map is exact") {
    // k = 0: (x, y) -> (x + y, y), so the rotation number is y itself.
    LiftedMap f = LiftedMap::standard(0.0);
    OrbitStats st = birkhoff_rotation(f, {0.0, 0.37}, 1000);
    CHECK(std::abs(st.rotation_estimate - 0.37) < 1e-12);
    CHECK(st.rotation_error_bound < 1e-9);
}

TEST_CASE("rotation estimate agrees with the oracle") {
    LiftedMap f = LiftedMap::standard(0.9);
    OrbitStats st = birkhoff_rotation(f, {0.1, 0.61}, 5000);
    double ref = oracle::standard_rotation({0.1L, 0.61L}, 0.9L, 5000);
    // Double and long double trajectories separate exponentially, but both
    // averages estimate the same rotation number to O(1/n).
    CHECK(std::abs(st.rotation_estimate - ref) < 2e-3);
    // The bound is honest: the estimate of a longer run stays inside it.
    OrbitStats longer = birkhoff_rotation(f, {0.1, 0.61}, 200000);
    CHECK(std::abs(longer.rotation_estimate - st.rotation_estimate) <=
          st.rotation_error_bound + longer.rotation_error_bound);
}

TEST_CASE("rotation interval of a seed set") {
    LiftedMap f = LiftedMap::standard(0.0);
    std::vector<LiftPoint> seeds = {{0.0, 0.2}, {0.3, 0.5}, {0.6, 0.8}};
    RotationInterval iv = rotation_interval_of_set(f, seeds, 2000);
    CHECK(iv.lo <= 0.2 + 1e-12);
    CHECK(iv.hi >= 0.8 - 1e-12);
    CHECK(iv.contains(0.5));
    CHECK_THROWS_AS(rotation_interval_of_set(f, {}, 100), EmptySeedSet);
}
