#pragma once

// Small dense linear programming: a two-phase tableau simplex with Bland's
// anti-cycling rule, plus the polytope queries built on it.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "homcover/point.hpp"

namespace homcover::lp {

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kOptimalityTolerance = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal };
enum class Sense { Maximize, Minimize };

struct Constraint {
    std::vector<double> coeffs;
    Relation relation = Relation::LessEqual;
    double bound = 0.0;
};

struct VariableBound {
    double lo = -kInfinity;
    double hi = kInfinity;
};

struct LinearProgram {
    std::vector<double> objective;
    std::vector<Constraint> constraints;
    /// Empty means every variable is free.
    std::vector<VariableBound> bounds;
    Sense sense = Sense::Maximize;

    std::size_t dim() const { return objective.size(); }

    void add(std::vector<double> coeffs, Relation rel, double bound) {
        constraints.push_back({std::move(coeffs), rel, bound});
    }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct LpOutcome {
    Status status = Status::Infeasible;
    std::optional<std::vector<double>> solution;
    std::optional<double> objective_value;

    bool optimal() const { return status == Status::Optimal; }
};

/// Throws InputError on dimension mismatch or non-finite data, NumericFailure
/// when the iteration limit is hit or the returned point fails the residual check.
LpOutcome solve(const LinearProgram& lp);

/// Convenience: true iff the constraint system has a solution.
bool feasible(const LinearProgram& lp);

/// H-representation {x : normal_i . x <= offset_i}. Normals are kept unit length
/// by the producers in this library but the routines here do not assume it.
struct HalfspaceSet {
    std::size_t dim = 0;
    std::vector<std::vector<double>> normals;
    std::vector<double> offsets;

    std::size_t size() const { return offsets.size(); }
    void add(std::vector<double> normal, double offset) {
        normals.push_back(std::move(normal));
        offsets.push_back(offset);
    }
};

struct ChebyshevBall {
    Point center;
    double radius = 0.0;
};

/// Largest Euclidean ball inside a bounded polytope.
/// Throws InradiusZero if the interior is empty, InputError if unbounded.
ChebyshevBall chebyshev_center(const HalfspaceSet& h);

/// max{t >= 0 : origin + t * direction in polytope}.
/// Requires the origin to be inside (InputError otherwise) and direction nonzero.
/// Solved by the one-variable ratio test, which is the closed form of that LP.
double ray_max(const HalfspaceSet& h, ConstVec origin, ConstVec direction);

}  // namespace homcover::lp
