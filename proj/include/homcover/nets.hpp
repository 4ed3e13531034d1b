#pragma once

// Grid epsilon-nets in the gauge of a convex body: points y_j such that every
// x of the target lies in some y_j + eps * gauge.

#include <cstdint>
#include <optional>

#include "homcover/bodies.hpp"

namespace homcover::nets {

inline constexpr double kGridSlack = 0.01;
inline constexpr std::size_t kMaxNetPoints = 10'000'000;
inline constexpr double kEpsilonFloor = 1e-3;

struct EpsNet {
    double epsilon = 0.0;
    PointSet points;
    double grid_spacing = 0.0;
    /// Radius of a Euclidean ball around `anchor` inside eps * gauge.
    double certified_inradius = 0.0;
    Point anchor;
    /// Lower corner of the grid and cells per axis.
    Point origin;
    std::vector<std::size_t> cells_per_axis;
    /// Linear cell id of each net point, increasing.
    std::vector<std::uint64_t> cell_ids;

    std::size_t size() const { return points.size(); }
    /// ceil((5 / eps)^n), reported for comparison only.
    double reference_bound() const;
    /// Index of the net point whose cell holds x, if that cell was kept.
    std::optional<std::size_t> locate(ConstVec x) const;
};

/// Net of K in its own gauge; every point also lies in K - eps K.
EpsNet build_net(const ConvexBody& body, double epsilon, std::size_t max_points = kMaxNetPoints);

/// Net of `target` in the gauge of `gauge`.
EpsNet build_net(const ConvexBody& target, const ConvexBody& gauge, double epsilon,
                 std::size_t max_points = kMaxNetPoints);

/// max(A_n / (n ln n), kEpsilonFloor) with A_n = 1 - 4 ln n / n.
double default_epsilon(std::size_t n);

}  // namespace homcover::nets
