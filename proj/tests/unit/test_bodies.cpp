#include "doctest.h"

#include <cmath>
#include <random>

#include "homcover/bodies.hpp"
#include "support/oracles.hpp"

using namespace homcover;

namespace {

ConvexBody unit_triangle() {
    PointSet v(2);
    v.push_back(Point{0, 0});
    v.push_back(Point{1, 0});
    v.push_back(Point{0, 1});
    return ConvexBody::from_vertices(v);
}

Point random_point(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Point p(n);
    for (double& v : p) v = u(gen);
    return p;
}

ConvexBody random_polygon(std::mt19937_64& gen, std::vector<oracle::P2>& hull_out) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        std::vector<oracle::P2> pts(6);
        for (auto& p : pts) p = {u(gen), u(gen)};
        hull_out = oracle::hull2d(pts);
        if (hull_out.size() < 3 || oracle::shoelace(hull_out) < 0.05) continue;
        PointSet v(2);
        for (const auto& p : pts) v.push_back(Point{p[0], p[1]});
        return ConvexBody::from_vertices(v);
    }
}

}  // namespace

TEST_CASE("contains examples") {
    CHECK(ConvexBody::cube(3).contains(Point{0, 0, 0}));
    CHECK_FALSE(ConvexBody::cube(2).contains(Point{1, 0}, Membership::StrictInterior));
    CHECK(ConvexBody::cube(2).contains(Point{1, 0}, Membership::Closed));
    const auto tri = unit_triangle();
    CHECK(tri.contains(Point{0.5, 0.49}));
    CHECK_FALSE(tri.contains(Point{0.5, 0.51}));
    CHECK_THROWS_AS(tri.contains(Point{0.1, 0.1, 0.1}), InputError);
}

TEST_CASE("combo_contains examples") {
    for (std::size_t n = 1; n <= 4; ++n) {
        MinkowskiCombo diff(ConvexBody::cube(n), 1.0, 1.0);
        CHECK(diff.contains(Point(n, 2.0)));
        CHECK_FALSE(diff.contains(Point(n, 2.0 + 1e-6)));
        CHECK(diff.contains_lp(Point(n, 2.0)));
        CHECK_FALSE(diff.contains_lp(Point(n, 2.0 + 1e-6)));
    }
    MinkowskiCombo hex(unit_triangle(), 1.0, 1.0);
    CHECK(hex.contains(Point{1, -1}));
    CHECK(hex.contains_lp(Point{1, -1}));
    CHECK_FALSE(hex.contains(Point{1.01, -1}));
    CHECK(MinkowskiCombo(unit_triangle(), 1.0, 0.0).contains(Point{0.2, 0.3}));
    CHECK_THROWS_AS(MinkowskiCombo(unit_triangle(), 0.0, 0.0), InputError);
    CHECK_THROWS_AS(MinkowskiCombo(unit_triangle(), -1.0, 1.0), InputError);
    CHECK_THROWS_AS(hex.contains(Point{1.0}), InputError);
}

TEST_CASE("support examples") {
    CHECK(ConvexBody::cube(4).support(Point{1, 0, 0, 0}) == doctest::Approx(1.0));
    CHECK(ConvexBody::cube(2).support(Point{1, 1}) == doctest::Approx(2.0));
    CHECK(unit_triangle().support(Point{1, 1}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(unit_triangle().support(Point{0, 0}), InputError);
}

TEST_CASE("bounding box examples") {
    const Box b = MinkowskiCombo(ConvexBody::cube(3), 1.0, 0.5).bounding_box();
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(b.lo[j] == doctest::Approx(-1.5));
        CHECK(b.hi[j] == doctest::Approx(1.5));
    }
    const Box h = MinkowskiCombo(unit_triangle(), 1.0, 1.0).bounding_box();
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(h.lo[j] == doctest::Approx(-1.0));
        CHECK(h.hi[j] == doctest::Approx(1.0));
    }
    std::mt19937_64 gen(3);
    std::vector<oracle::P2> hull;
    for (int t = 0; t < 20; ++t) {
        const Box s = MinkowskiCombo(random_polygon(gen, hull), 1.0, 1.0).bounding_box();
        CHECK(s.lo[0] == doctest::Approx(-s.hi[0]));
        CHECK(s.lo[1] == doctest::Approx(-s.hi[1]));
    }
}

TEST_CASE("special bodies have the documented shape") {
    const auto s = ConvexBody::simplex(3);
    CHECK(s.vertices().size() == 4);
    CHECK(s.origin_interior());
    CHECK_FALSE(s.symmetric());
    CHECK(s.difference_normals().size() == 14);
    CHECK(ConvexBody::cube(3).symmetric());
    CHECK(ConvexBody::cross_polytope(3).symmetric());
    CHECK(ConvexBody::cross_polytope(3).facets().size() == 8);
    CHECK(ConvexBody::cross_polytope(3).contains(Point{1.0 / 3, 1.0 / 3, 1.0 / 3}));
    CHECK_FALSE(ConvexBody::cross_polytope(3).contains(Point{0.34, 1.0 / 3, 1.0 / 3}));
    CHECK(unit_triangle().kind() == BodyKind::VRep);
    CHECK_FALSE(unit_triangle().origin_interior());
}

TEST_CASE("facet enumeration agrees with special closed forms") {
    for (BodyKind kind : {BodyKind::Cube, BodyKind::Simplex, BodyKind::CrossPolytope}) {
        for (std::size_t n = 2; n <= 4; ++n) {
            const auto special = ConvexBody::special(kind, n);
            const auto generic = ConvexBody::from_vertices(special.vertices());
            CHECK(generic.facets().size() == special.facets().size());
            std::mt19937_64 gen(n * 10 + static_cast<unsigned>(kind));
            for (int t = 0; t < 500; ++t) {
                const Point x = random_point(gen, n, -2.2, 2.2);
                CHECK(generic.contains(x) == special.contains(x));
                const MinkowskiCombo a(special, 1.0, 0.6);
                const MinkowskiCombo b(generic, 1.0, 0.6);
                CHECK(a.contains(x) == b.contains(x));
            }
        }
    }
}

TEST_CASE("degenerate vertex sets are rejected") {
    PointSet line(2);
    line.push_back(Point{0, 0});
    line.push_back(Point{1, 1});
    line.push_back(Point{2, 2});
    CHECK_THROWS_AS(ConvexBody::from_vertices(line), InputError);
    CHECK_THROWS_AS(ConvexBody::cube(0), InputError);
}

TEST_CASE("random polygons match the hull oracle") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<oracle::P2> hull;
        const auto body = random_polygon(gen, hull);
        CHECK(body.vertices().size() == hull.size());
        const auto diff = oracle::difference_hull(hull, hull);
        const MinkowskiCombo dk(body, 1.0, 1.0);
        const MinkowskiCombo half(body, 1.0, 0.5);
        std::vector<oracle::P2> halfneg;
        for (const auto& p : hull) halfneg.push_back({0.5 * p[0], 0.5 * p[1]});
        const auto half_hull = oracle::difference_hull(hull, halfneg);
        for (int t = 0; t < 200; ++t) {
            const Point x = random_point(gen, 2, -2.0, 2.0);
            const oracle::P2 q{x[0], x[1]};
            const bool near_k = std::abs(body.depth(x)) < 1e-7;
            if (!near_k) CHECK(body.contains(x) == oracle::inside_hull(hull, q, 0.0));
            const bool in_diff = oracle::inside_hull(diff, q, 0.0);
            if (in_diff == oracle::inside_hull(diff, q, 1e-7) && in_diff == oracle::inside_hull(diff, q, -1e-7)) {
                CHECK(dk.contains(x) == in_diff);
            }
            const bool in_half = oracle::inside_hull(half_hull, q, 0.0);
            if (in_half == oracle::inside_hull(half_hull, q, 1e-7) &&
                in_half == oracle::inside_hull(half_hull, q, -1e-7)) {
                CHECK(half.contains(x) == in_half);
            }
        }
    }
}

TEST_CASE("combo fast path agrees with the barycentric LP") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> lam(0.0, 1.0);
    const std::vector<ConvexBody> bodies{ConvexBody::simplex(3), ConvexBody::cross_polytope(3), unit_triangle()};
    for (const auto& k : bodies) {
        for (int t = 0; t < 150; ++t) {
            const MinkowskiCombo c(k, 1.0, lam(gen));
            const Box b = c.bounding_box();
            Point x(k.dim());
            for (std::size_t j = 0; j < x.size(); ++j) {
                x[j] = b.lo[j] + (b.hi[j] - b.lo[j]) * lam(gen);
            }
            CHECK(c.contains(x) == c.contains_lp(x));
        }
    }
}

TEST_CASE("membership properties") {
    std::mt19937_64 gen(4242);
    const std::vector<ConvexBody> bodies{ConvexBody::cube(2), ConvexBody::simplex(2), ConvexBody::simplex(3),
                                         ConvexBody::cross_polytope(3)};
    for (const auto& k : bodies) {
        const std::size_t n = k.dim();
        const MinkowskiCombo k0(k, 1.0, 0.0);
        const MinkowskiCombo kk(k, 1.0, 1.0);
        for (int t = 0; t < 10000; ++t) {
            const Point x = random_point(gen, n, -2.5, 2.5);
            CHECK(k0.contains(x) == k.contains(x));
            CHECK(kk.contains(x) == kk.contains(scaled(x, -1.0)));
            if (k.contains(x, Membership::StrictInterior)) CHECK(k.contains(x));
        }
        const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
        for (int t = 0; t < 2000; ++t) {
            const Point x = random_point(gen, n, -2.0, 2.0);
            bool seen = false;
            for (double lam : grid) {
                const bool in = MinkowskiCombo(k, 1.0, lam).contains(x);
                if (seen) CHECK(in);
                seen = seen || in;
            }
        }
    }
}

TEST_CASE("transformed bodies keep their difference facets") {
    const auto s = ConvexBody::simplex(3);
    const Point t{0.3, -0.2, 0.1};
    const auto moved = s.transformed(2.0, t);
    const auto rebuilt = ConvexBody::from_vertices(moved.vertices());
    std::mt19937_64 gen(8);
    for (int i = 0; i < 500; ++i) {
        const Point x = random_point(gen, 3, -4.0, 4.0);
        CHECK(moved.contains(x) == rebuilt.contains(x));
        CHECK(MinkowskiCombo(moved, 1.0, 0.7).contains(x) == MinkowskiCombo(rebuilt, 1.0, 0.7).contains(x));
    }
    CHECK(moved.inball().radius == doctest::Approx(2.0 * s.inball().radius));
}

TEST_CASE("homothet placement") {
    const auto k = ConvexBody::cube(2);
    CHECK(homothet_contains(k, Point{0.4, 0.4}, 0.6, Point{1.0, -0.2}));
    CHECK_FALSE(homothet_contains(k, Point{0.4, 0.4}, 0.6, Point{1.0, -0.21}));
    CHECK(homothet_contains(k, Point{0.4, 0.4}, 0.0, Point{0.4, 0.4}));
    HomothetPlacement bad{{0.0, 0.0}, 1.5};
    CHECK_THROWS_AS(bad.validate(2), InputError);
    HomothetPlacement tiny{{0.0, 0.0}, 1e-4};
    CHECK_NOTHROW(tiny.validate(2));
    CHECK(tiny.outside_recommended_range(2));
    CHECK_FALSE(HomothetPlacement{{0.0, 0.0}, 0.5}.outside_recommended_range(2));
}
