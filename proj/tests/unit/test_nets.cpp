#include "doctest.h"

#include <cmath>

#include "homcover/nets.hpp"
#include "homcover/randvol.hpp"

using namespace homcover;
using namespace homcover::nets;

namespace {

ConvexBody unit_triangle() {
    PointSet v(2);
    v.push_back(Point{0, 0});
    v.push_back(Point{1, 0});
    v.push_back(Point{0, 1});
    return ConvexBody::from_vertices(v);
}

// Brute force: some net point y with x in y + eps K.
bool covered_by_net(const ConvexBody& k, const EpsNet& net, ConstVec x) {
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (homothet_contains(k, net.points[i], net.epsilon, x)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("square net at half scale") {
    const auto k = ConvexBody::cube(2);
    const auto net = build_net(k, 0.5);
    CHECK(net.certified_inradius == doctest::Approx(0.5));
    CHECK(net.grid_spacing <= 0.70711);
    const double h = net.grid_spacing;
    const double grid_oracle = std::pow(std::ceil(2.0 / h), 2.0);
    CHECK(static_cast<double>(net.size()) <= grid_oracle);
    CHECK(net.size() <= 49);
    CHECK(static_cast<double>(net.size()) <= net.reference_bound());
    CHECK(net.reference_bound() == 100.0);
    for (std::size_t i = 0; i < net.size(); ++i) {
        CHECK(norm_inf(net.points[i]) <= 1.5);
    }
}

TEST_CASE("spacing invariant and K - eps K containment") {
    const std::vector<ConvexBody> bodies{ConvexBody::cube(2), ConvexBody::simplex(2), ConvexBody::simplex(3),
                                         ConvexBody::cross_polytope(3), unit_triangle()};
    for (const auto& k : bodies) {
        for (double eps : {1.0, 0.5, 0.2}) {
            const auto net = build_net(k, eps);
            CHECK(net.grid_spacing * std::sqrt(static_cast<double>(k.dim())) / 2.0 <= net.certified_inradius);
            const MinkowskiCombo shrink(k, 1.0, eps);
            for (std::size_t i = 0; i < net.size(); ++i) CHECK(shrink.contains(net.points[i]));
        }
    }
}

TEST_CASE("unit epsilon still certifies") {
    const auto k = ConvexBody::simplex(3);
    const auto net = build_net(k, 1.0);
    CHECK(net.size() >= 1);
    const auto probes = randvol::sample_uniform(k, RngSpec{10, 0}, 2000);
    for (std::size_t i = 0; i < probes.size(); ++i) CHECK(covered_by_net(k, net, probes[i]));
}

TEST_CASE("triangle net covers uniform probes") {
    const auto k = unit_triangle();
    const auto net = build_net(k, 0.25);
    const auto probes = randvol::sample_uniform(k, RngSpec{11, 0}, 10000);
    std::size_t misses = 0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (!covered_by_net(k, net, probes[i])) ++misses;
        const auto at = net.locate(probes[i]);
        REQUIRE(at.has_value());
        CHECK(homothet_contains(k, net.points[*at], net.epsilon, probes[i]));
    }
    CHECK(misses == 0);
}

TEST_CASE("vertices and boundary points locate a covering cell") {
    for (const auto& k : {ConvexBody::cube(2), ConvexBody::simplex(3), ConvexBody::cross_polytope(2)}) {
        const auto net = build_net(k, 0.3);
        for (std::size_t i = 0; i < k.vertices().size(); ++i) {
            const auto at = net.locate(k.vertices()[i]);
            REQUIRE(at.has_value());
            CHECK(homothet_contains(k, net.points[*at], net.epsilon, k.vertices()[i]));
        }
    }
}

TEST_CASE("gauge nets cover a foreign target") {
    const auto target = ConvexBody::cube(2).transformed(3.0, Point{0.0, 0.0});
    const auto gauge = ConvexBody::simplex(2);
    const auto net = build_net(target, gauge, 0.4);
    const auto probes = randvol::sample_uniform(target, RngSpec{12, 0}, 5000);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto at = net.locate(probes[i]);
        REQUIRE(at.has_value());
        CHECK(homothet_contains(gauge, net.points[*at], 0.4, probes[i]));
    }
}

TEST_CASE("shrinkage implication on constructed tuples") {
    RandomStream s(RngSpec{13, 0});
    for (const auto& k : {ConvexBody::cube(2), ConvexBody::simplex(3), ConvexBody::cross_polytope(3)}) {
        const auto inside = randvol::sample_uniform(k, RngSpec{13, 1}, 20000);
        for (std::size_t t = 0; t < 10000 / 3 + 1; ++t) {
            const double eps = s.uniform(0.01, 0.5);
            const double lam = s.uniform(eps, 1.0);
            Point c(k.dim());
            for (double& v : c) v = s.uniform(-2.0, 2.0);
            const Point y = axpy(c, lam - eps, inside[2 * t]);
            const Point x = axpy(y, eps, inside[2 * t + 1]);
            CHECK(homothet_contains(k, y, eps, x));
            CHECK(homothet_contains(k, c, lam - eps, y));
            CHECK(homothet_contains(k, c, lam, x));
        }
    }
}

TEST_CASE("net size guard") {
    CHECK_THROWS_AS(build_net(ConvexBody::cube(3), 0.01, 1000), NetTooLarge);
    CHECK_THROWS_AS(build_net(ConvexBody::cube(2), 0.0), InputError);
    CHECK_THROWS_AS(build_net(ConvexBody::cube(2), 1.5), InputError);
    const auto net = build_net(ConvexBody::cube(2), 0.1, 5000);
    CHECK(net.size() <= 5000);
}

TEST_CASE("default epsilon") {
    CHECK(default_epsilon(3) == kEpsilonFloor);
    const double a100 = 1.0 - 4.0 * std::log(100.0) / 100.0;
    CHECK(a100 == doctest::Approx(0.8158).epsilon(1e-4));
    CHECK(default_epsilon(100) == doctest::Approx(1.772e-3).epsilon(1e-3));
    CHECK(default_epsilon(9) == doctest::Approx(1.19e-3).epsilon(1e-2));
    CHECK_THROWS_AS(default_epsilon(1), InputError);
}
