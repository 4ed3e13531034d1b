#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "homcover/fnsched.hpp"
#include "homcover/randcover.hpp"

using namespace homcover;
using namespace homcover::fnsched;

namespace {

double cell_volume(int k, std::size_t n) {
    return std::pow(2.0 * std::ldexp(std::pow(static_cast<double>(n), -1.5), -k + 1), static_cast<double>(n));
}

double mass(const std::vector<double>& ratios, const std::vector<std::size_t>& idx, std::size_t n, double vol) {
    double s = 0.0;
    for (std::size_t i : idx) s += std::pow(ratios[i], static_cast<double>(n)) * vol;
    return s;
}

CubeCoverInput square_input(std::size_t count) {
    CubeCoverInput in(ConvexBody::cube(2), 4.0, std::vector<double>(count, 0.5), thresholds(2, Mode::Desk));
    in.epsilon = 0.05;
    in.rng = RngSpec{11, 0};
    return in;
}

// Small ratios spread over a few dyadic classes.
std::vector<double> random_small_ratios(RandomStream& s, std::size_t n, std::size_t count) {
    std::vector<double> out;
    const double cutoff = large_ratio_cutoff(n);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(cutoff * std::ldexp(s.uniform(0.5, 1.0), -static_cast<int>(s.uniform(0, 4))));
    }
    return out;
}

}  // namespace

TEST_CASE("thresholds by mode") {
    const auto exact = thresholds(2, Mode::Exact);
    CHECK(exact.t5 == doctest::Approx(randcover::threshold_sum(2, 1.0, 5.0)));
    CHECK(exact.t6 - exact.t5 == doctest::Approx(2.0));
    const auto desk = thresholds(3, Mode::Desk, 3.0);
    CHECK(desk.t5 == doctest::Approx(3.0));
    CHECK(desk.t4 / desk.t5 ==
          doctest::Approx(randcover::threshold_sum(3, 1.0, 4.0) / randcover::threshold_sum(3, 1.0, 5.0)));
    CHECK(mode_from_string(to_string(Mode::Exact)) == Mode::Exact);
    CHECK_THROWS_AS(mode_from_string("fast"), InputError);
    CHECK_THROWS_AS(thresholds(2, Mode::Desk, 0.0), InputError);
}

TEST_CASE("dyadic classes") {
    CHECK(large_ratio_cutoff(2) == doctest::Approx(0.03125));
    CHECK(dyadic_class(0.02, 2) == 1);
    CHECK(dyadic_class(0.03125 / 2 * 1.001, 2) == 1);
    CHECK(dyadic_class(0.03125 / 2, 2) == 2);
    CHECK_THROWS_AS(dyadic_class(0.03125, 2), InputError);
    CHECK_THROWS_AS(dyadic_class(0.0, 2), InputError);
    RandomStream s(RngSpec{1, 0});
    for (int t = 0; t < 2000; ++t) {
        const std::size_t n = 2 + t % 3;
        const double lambda = large_ratio_cutoff(n) * std::exp(-s.uniform(0.0, 20.0));
        const int k = dyadic_class(lambda, n);
        const double x = lambda * std::pow(static_cast<double>(n), 5.0);
        CHECK(x > std::ldexp(1.0, -k));
        CHECK(x <= std::ldexp(1.0, -k + 1));
    }
}

TEST_CASE("plan for a constant small sequence") {
    const auto t = thresholds(2, Mode::Desk);
    RatioSequence seq{std::vector<double>(80001, 0.02)};
    const auto plan = dyadic_plan(seq, 2, t, 4.0);
    CHECK(plan.large.empty());
    REQUIRE(plan.classes.size() == 1);
    CHECK(plan.classes[0].k == 1);
    CHECK(plan.classes[0].indices.size() == 80001);
    const double expected_budget = std::floor(80001 * 0.0004 * 4.0 / (t.t6 * cell_volume(1, 2)));
    CHECK(plan.classes[0].budget == static_cast<std::size_t>(expected_budget));
}

TEST_CASE("empty small set gives an empty plan") {
    RatioSequence seq{std::vector<double>(10, 0.5)};
    const auto plan = dyadic_plan(seq, 2, thresholds(2, Mode::Desk), 4.0);
    CHECK(plan.large.size() == 10);
    CHECK(plan.classes.empty());
    CHECK(plan.remainder.empty());
    CHECK_THROWS_AS(dyadic_plan(RatioSequence{{1.0}}, 2, thresholds(2, Mode::Desk), 4.0), InputError);
}

TEST_CASE("plan invariants on random sequences") {
    RandomStream s(RngSpec{2, 0});
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 2;
        auto ratios = random_small_ratios(s, n, 200 + static_cast<std::size_t>(s.uniform(0, 3000)));
        for (int i = 0; i < 5; ++i) ratios.push_back(s.uniform(0.2, 0.9));
        const RatioSequence seq{ratios};
        const auto t = thresholds(n, Mode::Desk, s.uniform(0.001, 0.05));
        const double vol = s.uniform(1.0, 5.0);
        const auto plan = dyadic_plan(seq, n, t, vol);

        std::vector<int> seen(ratios.size(), 0);
        for (std::size_t i : plan.large) ++seen[i];
        for (std::size_t i : plan.remainder) ++seen[i];
        for (const auto& cls : plan.classes) {
            for (std::size_t i : cls.indices) CHECK(dyadic_class(ratios[i], n) == cls.k);
            CHECK(cls.partitions.size() <= cls.budget);
            CHECK(cls.budget == static_cast<std::size_t>(std::floor(mass(ratios, cls.indices, n, vol) /
                                                                   (t.t6 * cell_volume(cls.k, n)))));
            for (const auto& part : cls.partitions) {
                double biggest = 0.0;
                for (std::size_t i : part) {
                    ++seen[i];
                    biggest = std::max(biggest, std::pow(ratios[i], static_cast<double>(n)) * vol);
                }
                const double need = t.t5 * cell_volume(cls.k, n);
                const double got = mass(ratios, part, n, vol);
                CHECK(got >= need);
                CHECK(got <= need + biggest + 1e-12);
            }
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    }
}

TEST_CASE("cube assignment refines coarse cells for finer classes") {
    RatioSequence seq{std::vector<double>(40, 0.02)};
    for (int i = 0; i < 200; ++i) seq.ratios.push_back(0.009);
    auto plan = dyadic_plan(seq, 2, thresholds(2, Mode::Desk, 0.01), 4.0);
    REQUIRE(plan.classes.size() == 2);
    const std::vector<Point> tiles{{0.0, 0.0}, {0.70710678, 0.0}};
    assign_cubes(plan, tiles, 2);
    const double h1 = std::pow(2.0, -1.5);
    std::size_t level1 = 0;
    for (const auto& c : plan.cubes) {
        CHECK(c.half_side == doctest::Approx(std::ldexp(h1, -c.k + 1)));
        if (c.k == 1) ++level1;
    }
    CHECK(level1 <= tiles.size());
    // Distinct cubes of the same level never share a center.
    std::set<std::pair<int, std::pair<double, double>>> centers;
    for (const auto& c : plan.cubes) CHECK(centers.insert({c.k, {c.center[0], c.center[1]}}).second);
}

TEST_CASE("symmetry ratio and normalization") {
    CHECK(symmetry_ratio(ConvexBody::cube(3)) == doctest::Approx(1.0));
    CHECK(symmetry_ratio(ConvexBody::simplex(2)) == doctest::Approx(0.5));
    CHECK(symmetry_ratio(ConvexBody::simplex(2).transformed(1.0, Point{5.0, 5.0})) == 0.0);

    const auto norm = normalize(ConvexBody::cube(2).transformed(3.0, Point{1.0, -2.0}));
    CHECK(norm.shift[0] == doctest::Approx(1.0));
    CHECK(norm.shift[1] == doctest::Approx(-2.0));
    CHECK(norm.scale == doctest::Approx(1.0 / 3.0));
    CHECK(norm.unit_cube_inside);
    CHECK(norm.inside_outer_cube);

    const auto thin = ConvexBody::cross_polytope(2).transformed(0.01, Point{0.0, 0.0});
    const auto capped = normalize(thin);
    CHECK(capped.inside_outer_cube);
}

TEST_CASE("patch separation") {
    CHECK(patch_separation(2, 1.0, 1.0, 0.05) == doctest::Approx(1.0 / (4.0 * std::log(2.0))));
    CHECK(patch_separation(2, 1.0, 0.5, 0.45) == doctest::Approx(0.99 * 0.05 * 0.5));
    CHECK_THROWS_AS(patch_separation(2, 0.0, 0.5, 0.1), InputError);
    CHECK_THROWS_AS(patch_separation(2, 1.0, 0.5, 0.5), InputError);
}

TEST_CASE("square in a four-cube is certified") {
    const auto in = square_input(700);
    const auto res = cover_cube(in);
    CHECK(res.verdict.status == cover::Status::Certified);
    CHECK(res.stats.inside_unit_cube);
    CHECK(res.stats.symmetric_inclusion);

    // Least prefix meeting the 4n threshold.
    const double need = in.thresholds.t4 * 64.0;
    CHECK(static_cast<double>(res.stats.prefix) * 0.25 * 4.0 >= need);
    CHECK(static_cast<double>(res.stats.prefix - 1) * 0.25 * 4.0 < need);

    std::set<std::size_t> used;
    for (const auto& p : res.construction.placements) {
        CHECK(used.insert(p.index).second);
        CHECK((p.phase == Phase::Patch) == (p.index >= res.stats.prefix));
    }
    CHECK(res.construction.placements.size() == res.stats.prefix + res.stats.patch_points);

    // Patch points are pairwise separated in the difference body.
    const MinkowskiCombo diff(in.body, 1.0, 1.0);
    std::vector<Point> patch;
    for (const auto& p : res.construction.placements)
        if (p.phase == Phase::Patch) patch.push_back(p.center);
    for (std::size_t a = 0; a < patch.size(); ++a)
        for (std::size_t b = a + 1; b < patch.size(); ++b)
            CHECK_FALSE(diff.contains(scaled(difference(patch[a], patch[b]), 1.0 / res.stats.separation)));

    const auto again = cover_cube(in);
    REQUIRE(again.construction.placements.size() == res.construction.placements.size());
    for (std::size_t i = 0; i < res.construction.placements.size(); ++i)
        CHECK(again.construction.placements[i].center == res.construction.placements[i].center);
}

TEST_CASE("cube cover input errors") {
    CHECK_THROWS_AS(cover_cube(square_input(100)), InputError);
    auto bad = square_input(700);
    bad.ratios[3] = 0.3;
    CHECK_THROWS_AS(cover_cube(bad), InputError);
    // Enough ratio volume, too few indices once the prefix is used.
    auto tight = square_input(512);
    tight.epsilon = 0.3;
    CHECK_THROWS_AS(cover_cube(tight), PatchDeficit);
}

TEST_CASE("large ratios take the random branch") {
    GeneralizedCoverConfig c(ConvexBody::cube(2), std::vector<double>(300, 0.9));
    c.rng = RngSpec{7, 0};
    const auto rep = run_generalized_cover(c);
    CHECK(rep.branch == Branch::LargeRatios);
    CHECK(rep.precondition);
    CHECK(rep.power_sum == doctest::Approx(243.0));
    CHECK(rep.verdict.status == cover::Status::Certified);
    CHECK(rep.construction.placements.size() == 300);
    for (const auto& p : rep.construction.placements) CHECK(p.phase == Phase::LargeRatios);
}

TEST_CASE("sequence just above the desk threshold is certified") {
    // Desk threshold for the square is 8 * 4 = 32, and 40 * 0.81 = 32.4.
    GeneralizedCoverConfig c(ConvexBody::cube(2), std::vector<double>(40, 0.9));
    c.rng = RngSpec{8, 0};
    const auto rep = run_generalized_cover(c);
    CHECK(rep.precondition);
    CHECK(rep.verdict.status == cover::Status::Certified);
}

TEST_CASE("small ratios take the dyadic branch") {
    GeneralizedCoverConfig c(ConvexBody::cube(2), std::vector<double>(80001, 0.02));
    c.rng = RngSpec{7, 0};
    c.probes = 2000;
    const auto rep = run_generalized_cover(c);
    CHECK(rep.branch == Branch::Dyadic);
    CHECK(rep.precondition);
    CHECK(rep.tiling_cubes == 9);
    CHECK(rep.plan.unassigned == 0);
    CHECK(rep.orphan_probes == 0);
    CHECK(rep.verdict.status == cover::Status::Certified);

    std::set<std::size_t> used;
    for (const auto& p : rep.construction.placements) {
        CHECK(used.insert(p.index).second);
        CHECK(p.ratio == 0.02);
    }
    CHECK(cover::decide_cover(c.body, rep.construction.homothets(), 0.01, RngSpec{9, 0}, 20000).status !=
          cover::Status::Refuted);

    const auto again = run_generalized_cover(c);
    REQUIRE(again.construction.placements.size() == rep.construction.placements.size());
    for (std::size_t i = 0; i < rep.construction.placements.size(); ++i)
        CHECK(again.construction.placements[i].center == rep.construction.placements[i].center);
}
