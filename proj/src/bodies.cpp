#include "homcover/bodies.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace homcover {

namespace {

constexpr std::size_t kMaxDim = 12;

double scale_tolerance(double extent) { return kMembershipTolerance * std::max(1.0, extent); }

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Row-reduce in place; returns pivot columns. Entries below `eps` count as zero.
std::vector<std::size_t> row_reduce(std::vector<std::vector<double>>& m, std::size_t cols, double eps) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
        std::size_t best = row;
        for (std::size_t r = row + 1; r < m.size(); ++r) {
            if (std::abs(m[r][c]) > std::abs(m[best][c])) best = r;
        }
        if (std::abs(m[best][c]) <= eps) continue;
        std::swap(m[row], m[best]);
        const double inv = 1.0 / m[row][c];
        for (std::size_t k = c; k < cols; ++k) m[row][k] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][c] == 0.0) continue;
            const double f = m[r][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[row][k];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

std::size_t affine_rank(const PointSet& pts, double eps) {
    if (pts.size() < 2) return 0;
    std::vector<std::vector<double>> m;
    for (std::size_t i = 1; i < pts.size(); ++i) m.push_back(difference(pts[i], pts[0]));
    return row_reduce(m, pts.dim(), eps).size();
}

double max_abs_coord(const PointSet& pts) {
    double e = 0.0;
    for (double v : pts.raw()) e = std::max(e, std::abs(v));
    return e;
}

PointSet dedupe(const PointSet& pts, double tol) {
    PointSet out(pts.dim());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < out.size() && !seen; ++j) {
            seen = norm_inf(difference(pts[i], out[j])) <= tol;
        }
        if (!seen) out.push_back(pts[i]);
    }
    return out;
}

// Points of the list at which the tight facet normals span the space.
PointSet extreme_points(const PointSet& pts, const lp::HalfspaceSet& facets, double tol) {
    PointSet out(pts.dim());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<std::vector<double>> tight;
        for (std::size_t f = 0; f < facets.size(); ++f) {
            if (facets.offsets[f] - dot(facets.normals[f], pts[i]) <= tol) tight.push_back(facets.normals[f]);
        }
        if (tight.size() >= pts.dim() && row_reduce(tight, pts.dim(), 1e-9).size() == pts.dim()) {
            out.push_back(pts[i]);
        }
    }
    return out;
}

}  // namespace

std::string to_string(BodyKind kind) {
    switch (kind) {
        case BodyKind::Cube: return "cube";
        case BodyKind::Simplex: return "simplex";
        case BodyKind::CrossPolytope: return "crosspolytope";
        case BodyKind::VRep: return "vrep";
    }
    return "vrep";
}

BodyKind body_kind_from_string(const std::string& name) {
    if (name == "cube") return BodyKind::Cube;
    if (name == "simplex") return BodyKind::Simplex;
    if (name == "crosspolytope" || name == "cross-polytope" || name == "cross") return BodyKind::CrossPolytope;
    if (name == "vrep") return BodyKind::VRep;
    throw InputError("unknown body kind '" + name + "'");
}

std::optional<lp::HalfspaceSet> enumerate_facets(const PointSet& points) {
    const std::size_t n = points.dim();
    const std::size_t m = points.size();
    if (n == 0) throw InputError("enumerate_facets: dimension must be >= 1");
    const double scale = std::max(1.0, max_abs_coord(points));
    const double tol = kMembershipTolerance * scale;
    if (m < n + 1 || affine_rank(points, 1e-10 * scale) < n) {
        throw InputError("enumerate_facets: points do not span a full-dimensional body");
    }
    if (binomial(m, n) > kMaxFacetCandidates) return std::nullopt;

    lp::HalfspaceSet out;
    out.dim = n;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<double>> mat(n > 0 ? n - 1 : 0, std::vector<double>(n));
    Point normal(n);
    for (;;) {
        for (std::size_t r = 0; r + 1 < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) mat[r][c] = points[idx[r + 1]][c] - points[idx[0]][c];
        }
        const auto pivots = row_reduce(mat, n, 1e-12 * scale);
        if (pivots.size() + 1 == n) {
            // Null vector: free column gets 1, pivot variables solve back.
            std::size_t free_col = n - 1;
            for (std::size_t c = 0, p = 0; c < n; ++c) {
                if (p < pivots.size() && pivots[p] == c) {
                    ++p;
                } else {
                    free_col = c;
                    break;
                }
            }
            std::fill(normal.begin(), normal.end(), 0.0);
            normal[free_col] = 1.0;
            for (std::size_t r = 0; r < pivots.size(); ++r) normal[pivots[r]] = -mat[r][free_col];
            const double len = norm2(normal);
            for (double& v : normal) v /= len;
            double offset = dot(normal, points[idx[0]]);

            double hi = -std::numeric_limits<double>::infinity();
            double lo = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m && (hi <= tol || lo >= -tol); ++i) {
                const double s = dot(normal, points[i]) - offset;
                hi = std::max(hi, s);
                lo = std::min(lo, s);
            }
            bool keep = false;
            if (hi <= tol) {
                keep = true;
            } else if (lo >= -tol) {
                for (double& v : normal) v = -v;
                offset = -offset;
                keep = true;
            }
            if (keep) {
                bool dup = false;
                for (std::size_t f = 0; f < out.size() && !dup; ++f) {
                    dup = norm_inf(difference(out.normals[f], normal)) <= 1e-9 &&
                          std::abs(out.offsets[f] - offset) <= tol;
                }
                if (!dup) out.add(normal, offset);
            }
        }
        // Next combination in lexicographic order.
        std::size_t k = n;
        while (k > 0 && idx[k - 1] == m - n + (k - 1)) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

ConvexBody ConvexBody::cube(std::size_t n) {
    if (n == 0 || n > kMaxDim) throw InputError("cube: dimension out of range");
    Data d;
    d.dim = n;
    d.kind = BodyKind::Cube;
    d.vertices = PointSet(n);
    Point v(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        for (std::size_t j = 0; j < n; ++j) v[j] = (mask >> j) & 1U ? 1.0 : -1.0;
        d.vertices.push_back(v);
    }
    d.facets.dim = n;
    for (std::size_t j = 0; j < n; ++j) {
        for (double s : {1.0, -1.0}) {
            Point a(n, 0.0);
            a[j] = s;
            d.facets.add(a, 1.0);
        }
    }
    d.diff_normals = d.facets.normals;
    return finish(std::move(d));
}

ConvexBody ConvexBody::simplex(std::size_t n) {
    if (n == 0 || n > kMaxDim) throw InputError("simplex: dimension out of range");
    const double g = 1.0 / static_cast<double>(n + 1);
    Data d;
    d.dim = n;
    d.kind = BodyKind::Simplex;
    d.vertices = PointSet(n);
    d.vertices.push_back(Point(n, -g));
    for (std::size_t j = 0; j < n; ++j) {
        Point v(n, -g);
        v[j] += 1.0;
        d.vertices.push_back(v);
    }
    d.facets.dim = n;
    for (std::size_t j = 0; j < n; ++j) {
        Point a(n, 0.0);
        a[j] = -1.0;
        d.facets.add(a, g);
    }
    const double rn = std::sqrt(static_cast<double>(n));
    d.facets.add(Point(n, 1.0 / rn), g / rn);
    // K - K = {x : sum of positive parts <= 1, sum of negative parts <= 1}.
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        Point u(n, 0.0);
        double cnt = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if ((mask >> j) & 1U) {
                u[j] = 1.0;
                cnt += 1.0;
            }
        }
        for (double& c : u) c /= std::sqrt(cnt);
        d.diff_normals.push_back(u);
        d.diff_normals.push_back(scaled(u, -1.0));
    }
    return finish(std::move(d));
}

ConvexBody ConvexBody::cross_polytope(std::size_t n) {
    if (n == 0 || n > kMaxDim) throw InputError("cross_polytope: dimension out of range");
    Data d;
    d.dim = n;
    d.kind = BodyKind::CrossPolytope;
    d.vertices = PointSet(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (double s : {1.0, -1.0}) {
            Point v(n, 0.0);
            v[j] = s;
            d.vertices.push_back(v);
        }
    }
    d.facets.dim = n;
    const double rn = std::sqrt(static_cast<double>(n));
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Point a(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = ((mask >> j) & 1U ? 1.0 : -1.0) / rn;
        d.facets.add(a, 1.0 / rn);
    }
    d.diff_normals = d.facets.normals;
    return finish(std::move(d));
}

ConvexBody ConvexBody::special(BodyKind kind, std::size_t n) {
    switch (kind) {
        case BodyKind::Cube: return cube(n);
        case BodyKind::Simplex: return simplex(n);
        case BodyKind::CrossPolytope: return cross_polytope(n);
        case BodyKind::VRep: break;
    }
    throw InputError("special: a vrep body needs explicit vertices");
}

ConvexBody ConvexBody::from_vertices(const PointSet& vertices) {
    const std::size_t n = vertices.dim();
    if (n == 0 || n > kMaxDim) throw InputError("from_vertices: dimension out of range");
    for (double v : vertices.raw()) {
        if (!std::isfinite(v)) throw InputError("from_vertices: non-finite coordinate");
    }
    const double tol = scale_tolerance(max_abs_coord(vertices));
    const PointSet unique = dedupe(vertices, tol);
    auto facets = enumerate_facets(unique);
    if (!facets) throw Unsupported("from_vertices: too many vertices for facet enumeration");

    Data d;
    d.dim = n;
    d.kind = BodyKind::VRep;
    d.facets = std::move(*facets);
    d.vertices = extreme_points(unique, d.facets, tol);

    PointSet diffs(n);
    for (std::size_t i = 0; i < d.vertices.size(); ++i) {
        for (std::size_t j = 0; j < d.vertices.size(); ++j) {
            if (i != j) diffs.push_back(difference(d.vertices[i], d.vertices[j]));
        }
    }
    diffs = dedupe(diffs, tol);
    if (auto df = enumerate_facets(diffs)) d.diff_normals = std::move(df->normals);
    return finish(std::move(d));
}

ConvexBody ConvexBody::finish(Data d) {
    d.extent = max_abs_coord(d.vertices);
    try {
        d.inball = lp::chebyshev_center(d.facets);
    } catch (const InradiusZero&) {
        throw InputError("convex body is not full-dimensional");
    }
    const double tol = scale_tolerance(d.extent);
    double zero_depth = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < d.facets.size(); ++f) zero_depth = std::min(zero_depth, d.facets.offsets[f]);
    d.origin_interior = zero_depth > kInteriorMargin;

    // Central symmetry about the vertex centroid.
    Point c(d.dim, 0.0);
    for (std::size_t i = 0; i < d.vertices.size(); ++i) {
        for (std::size_t j = 0; j < d.dim; ++j) c[j] += d.vertices[i][j];
    }
    for (double& v : c) v /= static_cast<double>(d.vertices.size());
    d.symmetric = true;
    for (std::size_t i = 0; i < d.vertices.size() && d.symmetric; ++i) {
        const Point mirrored = axpy(scaled(c, 2.0), -1.0, d.vertices[i]);
        for (std::size_t f = 0; f < d.facets.size(); ++f) {
            if (dot(d.facets.normals[f], mirrored) > d.facets.offsets[f] + tol) {
                d.symmetric = false;
                break;
            }
        }
    }

    d.diff_plus.clear();
    d.diff_minus.clear();
    for (const auto& u : d.diff_normals) {
        double hp = -std::numeric_limits<double>::infinity();
        double hm = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < d.vertices.size(); ++i) {
            const double s = dot(u, d.vertices[i]);
            hp = std::max(hp, s);
            hm = std::max(hm, -s);
        }
        d.diff_plus.push_back(hp);
        d.diff_minus.push_back(hm);
    }
    return ConvexBody(std::make_shared<const Data>(std::move(d)));
}

double ConvexBody::support(ConstVec direction) const {
    require_dim(direction, dim(), "support");
    if (norm_inf(direction) == 0.0) throw InputError("support: zero direction");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices().size(); ++i) best = std::max(best, dot(vertices()[i], direction));
    return best;
}

bool ConvexBody::contains(ConstVec x, Membership mode) const {
    require_dim(x, dim(), "contains");
    const auto& f = facets();
    if (mode == Membership::Closed) {
        const double tol = scale_tolerance(extent());
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (dot(f.normals[i], x) > f.offsets[i] + tol) return false;
        }
        return true;
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (dot(f.normals[i], x) + kInteriorMargin > f.offsets[i]) return false;
    }
    return true;
}

double ConvexBody::depth(ConstVec x) const {
    require_dim(x, dim(), "depth");
    const auto& f = facets();
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) d = std::min(d, f.offsets[i] - dot(f.normals[i], x));
    return d;
}

bool ConvexBody::contains_lp(ConstVec x) const {
    require_dim(x, dim(), "contains_lp");
    return MinkowskiCombo(*this, 1.0, 0.0).contains_lp(x);
}

ConvexBody ConvexBody::transformed(double scale, ConstVec offset) const {
    require_dim(offset, dim(), "transformed");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InputError("transformed: scale must be positive");
    Data d;
    d.dim = dim();
    d.kind = BodyKind::VRep;
    d.vertices = PointSet(dim());
    for (std::size_t i = 0; i < vertices().size(); ++i) d.vertices.push_back(axpy(offset, scale, vertices()[i]));
    d.facets.dim = dim();
    for (std::size_t f = 0; f < facets().size(); ++f) {
        d.facets.add(facets().normals[f], scale * facets().offsets[f] + dot(facets().normals[f], offset));
    }
    d.diff_normals = difference_normals();
    return finish(std::move(d));
}

Box ConvexBody::bounding_box() const { return MinkowskiCombo(*this, 1.0, 0.0).bounding_box(); }

void HomothetPlacement::validate(std::size_t dim) const {
    require_dim(center, dim, "HomothetPlacement center");
    if (!std::isfinite(ratio) || ratio < 0.0 || ratio > 1.0) {
        throw InputError("HomothetPlacement: ratio " + std::to_string(ratio) + " outside [0, 1]");
    }
    for (double v : center) {
        if (!std::isfinite(v)) throw InputError("HomothetPlacement: non-finite center");
    }
}

bool HomothetPlacement::outside_recommended_range(std::size_t dim) const {
    return ratio <= std::exp(-static_cast<double>(dim)) || ratio >= 1.0;
}

bool homothet_contains(const ConvexBody& k, ConstVec center, double ratio, ConstVec x) {
    require_dim(x, k.dim(), "homothet_contains");
    require_dim(center, k.dim(), "homothet_contains center");
    const double tol = scale_tolerance(k.extent());
    const auto& f = k.facets();
    for (std::size_t i = 0; i < f.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += f.normals[i][j] * (x[j] - center[j]);
        if (s > ratio * f.offsets[i] + tol) return false;
    }
    return true;
}

MinkowskiCombo::MinkowskiCombo(ConvexBody body, double plus, double minus)
    : body_(std::move(body)), plus_(plus), minus_(minus) {
    if (!std::isfinite(plus) || !std::isfinite(minus) || plus < 0.0 || minus < 0.0 || plus + minus <= 0.0) {
        throw InputError("MinkowskiCombo: coefficients must be >= 0 with positive sum");
    }
}

bool MinkowskiCombo::contains(ConstVec x) const {
    require_dim(x, dim(), "combo_contains");
    if (!body_.has_difference_normals()) return contains_lp(x);
    const auto& normals = body_.difference_normals();
    const auto& hp = body_.difference_support_plus();
    const auto& hm = body_.difference_support_minus();
    const double tol = scale_tolerance((plus_ + minus_) * body_.extent());
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (dot(normals[i], x) > plus_ * hp[i] + minus_ * hm[i] + tol) return false;
    }
    return true;
}

bool MinkowskiCombo::contains_lp(ConstVec x) const {
    require_dim(x, dim(), "combo_contains_lp");
    const auto& v = body_.vertices();
    const std::size_t m = v.size();
    const std::size_t n = dim();
    lp::LinearProgram prog;
    prog.objective.assign(2 * m, 0.0);
    prog.bounds.assign(2 * m, lp::VariableBound{0.0, lp::kInfinity});
    std::vector<double> sum_a(2 * m, 0.0);
    std::vector<double> sum_b(2 * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        sum_a[i] = 1.0;
        sum_b[m + i] = 1.0;
    }
    prog.add(sum_a, lp::Relation::Equal, 1.0);
    prog.add(sum_b, lp::Relation::Equal, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> row(2 * m);
        for (std::size_t i = 0; i < m; ++i) {
            row[i] = plus_ * v[i][j];
            row[m + i] = -minus_ * v[i][j];
        }
        prog.add(std::move(row), lp::Relation::Equal, x[j]);
    }
    return lp::feasible(prog);
}

Box MinkowskiCombo::bounding_box() const {
    const std::size_t n = dim();
    Box b{Point(n), Point(n)};
    Point e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const double hp = body_.support(e);
        e[j] = -1.0;
        const double hm = body_.support(e);
        e[j] = 0.0;
        b.hi[j] = plus_ * hp + minus_ * hm;
        b.lo[j] = -(plus_ * hm + minus_ * hp);
    }
    return b;
}

}  // namespace homcover
