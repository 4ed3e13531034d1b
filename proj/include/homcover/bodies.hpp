#pragma once

// Convex polytopes in V-representation together with the derived
// H-representations that make membership and Minkowski-combination tests cheap.

#include <memory>
#include <optional>
#include <string>

#include "homcover/lpcore.hpp"
#include "homcover/point.hpp"

namespace homcover {

enum class BodyKind { Cube, Simplex, CrossPolytope, VRep };
enum class Membership { Closed, StrictInterior };

std::string to_string(BodyKind kind);
BodyKind body_kind_from_string(const std::string& name);

inline constexpr double kMembershipTolerance = 1e-9;
inline constexpr double kInteriorMargin = 1e-7;
/// Upper limit on hyperplane candidates examined by brute-force facet enumeration.
inline constexpr double kMaxFacetCandidates = 5e6;

/// Facets {x : normal . x <= offset} with unit normals, found by checking every
/// hyperplane through dim affinely independent points. Returns nullopt when the
/// candidate count exceeds kMaxFacetCandidates. Throws InputError if the points
/// do not span the space.
std::optional<lp::HalfspaceSet> enumerate_facets(const PointSet& points);

/// An immutable full-dimensional polytope. Copies share state.
class ConvexBody {
public:
    /// [-1, 1]^n.
    static ConvexBody cube(std::size_t n);
    /// conv{0, e_1, ..., e_n} translated so its centroid is the origin.
    static ConvexBody simplex(std::size_t n);
    /// conv{+-e_j}.
    static ConvexBody cross_polytope(std::size_t n);
    /// Throws InputError if the points are not full-dimensional.
    static ConvexBody from_vertices(const PointSet& vertices);
    static ConvexBody special(BodyKind kind, std::size_t n);

    std::size_t dim() const { return data_->dim; }
    BodyKind kind() const { return data_->kind; }
    const PointSet& vertices() const { return data_->vertices; }
    const lp::HalfspaceSet& facets() const { return data_->facets; }
    bool origin_interior() const { return data_->origin_interior; }
    bool symmetric() const { return data_->symmetric; }
    /// Largest inscribed Euclidean ball.
    const lp::ChebyshevBall& inball() const { return data_->inball; }
    /// Max |coordinate| over the vertices; the natural length scale for tolerances.
    double extent() const { return data_->extent; }

    /// Unit facet normals of K - K, shared by every aK - bK with a, b >= 0.
    /// Empty when enumeration was skipped as too expensive.
    const std::vector<Point>& difference_normals() const { return data_->diff_normals; }
    bool has_difference_normals() const { return !data_->diff_normals.empty(); }
    /// h_K(u) and h_K(-u) for each difference normal u.
    const std::vector<double>& difference_support_plus() const { return data_->diff_plus; }
    const std::vector<double>& difference_support_minus() const { return data_->diff_minus; }

    double support(ConstVec direction) const;
    bool contains(ConstVec x, Membership mode = Membership::Closed) const;
    /// min over facets of (offset - normal . x): the Euclidean distance to the
    /// boundary for interior points, negative outside.
    double depth(ConstVec x) const;
    /// Membership decided by one LP over barycentric weights.
    bool contains_lp(ConstVec x) const;

    /// scale * K + offset, returned as a V-represented body.
    ConvexBody transformed(double scale, ConstVec offset) const;

    Box bounding_box() const;

private:
    struct Data {
        std::size_t dim = 0;
        BodyKind kind = BodyKind::VRep;
        PointSet vertices;
        lp::HalfspaceSet facets;
        std::vector<Point> diff_normals;
        std::vector<double> diff_plus;
        std::vector<double> diff_minus;
        lp::ChebyshevBall inball;
        double extent = 0.0;
        bool origin_interior = false;
        bool symmetric = false;
    };

    explicit ConvexBody(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    static ConvexBody finish(Data d);

    std::shared_ptr<const Data> data_;
};

/// x + ratio * K.
struct HomothetPlacement {
    Point center;
    double ratio = 0.0;

    /// Throws InputError unless ratio is in [0, 1] and finite.
    void validate(std::size_t dim) const;
    /// True when the ratio falls outside (e^{-n}, 1), the range where the random
    /// covering bound applies. Informational only.
    bool outside_recommended_range(std::size_t dim) const;
};

/// x in center + ratio * K, within kMembershipTolerance scaled to the body.
bool homothet_contains(const ConvexBody& k, ConstVec center, double ratio, ConstVec x);

/// plus * K - minus * K.
class MinkowskiCombo {
public:
    /// Throws InputError unless both coefficients are >= 0 with a positive sum.
    MinkowskiCombo(ConvexBody body, double plus, double minus);

    const ConvexBody& body() const { return body_; }
    double plus() const { return plus_; }
    double minus() const { return minus_; }
    std::size_t dim() const { return body_.dim(); }

    /// Uses the difference-body facets when available, otherwise the LP.
    bool contains(ConstVec x) const;
    /// One feasibility LP over barycentric weights of both copies.
    bool contains_lp(ConstVec x) const;
    Box bounding_box() const;

private:
    ConvexBody body_;
    double plus_;
    double minus_;
};

}  // namespace homcover
