#include "homcover/nets.hpp"

#include <algorithm>
#include <cmath>

#include "homcover/parallel.hpp"

namespace homcover::nets {

namespace {

// Picks the net point for a grid cell C. The default g - anchor covers all of C.
// When that point falls outside the preferred region ((1 - eps) T for targets
// around the origin, T otherwise) an LP finds a point that still covers C n T
// while sitting as deep in T as possible.
struct Snapper {
    const ConvexBody& target;
    const ConvexBody& gauge;
    double epsilon;
    double spacing;
    const std::vector<double>& target_support;

    enum class Outcome { Placed, MissesTarget, NoOptimum };
    struct Placement {
        Outcome outcome;
        Point y;
    };

    bool preferred(ConstVec y) const {
        const auto& f = target.facets();
        const double shrink = target.origin_interior() ? 1.0 - epsilon : 1.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (dot(f.normals[i], y) > shrink * f.offsets[i]) return false;
        }
        return true;
    }

    // max a . x over x in C n T; nullopt when the cell misses T.
    std::optional<double> exact_reach(ConstVec a, ConstVec g) const {
        const std::size_t n = g.size();
        lp::LinearProgram prog;
        prog.objective.assign(a.begin(), a.end());
        prog.bounds.resize(n);
        for (std::size_t j = 0; j < n; ++j) prog.bounds[j] = {g[j] - 0.5 * spacing, g[j] + 0.5 * spacing};
        const auto& tf = target.facets();
        for (std::size_t i = 0; i < tf.size(); ++i) prog.add(tf.normals[i], lp::Relation::LessEqual, tf.offsets[i]);
        const auto out = lp::solve(prog);
        if (!out.optimal()) return std::nullopt;
        return *out.objective_value;
    }

    Placement place(ConstVec g, ConstVec anchor) const {
        Placement fallback{Outcome::Placed, difference(g, anchor)};
        if (preferred(fallback.y)) return fallback;
        try {
            const Placement cheap = solve(g, false);
            if (cheap.outcome == Outcome::Placed && preferred(cheap.y)) return cheap;
            const Placement exact = solve(g, true);
            if (exact.outcome != Outcome::NoOptimum) return exact;
        } catch (const NumericFailure&) {
            // The default point is always valid.
        }
        return fallback;
    }

    // Variables (y, t). Coverage of the cell: a_k . y >= reach_k - eps * beta_k
    // for each gauge facet, where reach_k bounds a_k . x over C n T.
    Placement solve(ConstVec g, bool exact) const {
        const std::size_t n = g.size();
        const bool gauge_mode = target.origin_interior();
        lp::LinearProgram prog;
        prog.objective.assign(n + 1, 0.0);
        prog.objective[n] = gauge_mode ? 1.0 : -1.0;
        prog.sense = lp::Sense::Minimize;
        const auto& gf = gauge.facets();
        for (std::size_t k = 0; k < gf.size(); ++k) {
            const auto& a = gf.normals[k];
            double l1 = 0.0;
            for (double v : a) l1 += std::abs(v);
            double reach = std::min(dot(a, g) + 0.5 * spacing * l1, target_support[k]);
            if (exact) {
                const auto r = exact_reach(a, g);
                if (!r) return {Outcome::MissesTarget, {}};
                reach = std::min(reach, *r);
            }
            std::vector<double> row(n + 1, 0.0);
            for (std::size_t j = 0; j < n; ++j) row[j] = -a[j];
            prog.add(std::move(row), lp::Relation::LessEqual, epsilon * gf.offsets[k] - reach);
        }
        // Minimize the target gauge about the origin, or maximize depth.
        const auto& tf = target.facets();
        for (std::size_t i = 0; i < tf.size(); ++i) {
            std::vector<double> row(tf.normals[i].begin(), tf.normals[i].end());
            row.push_back(gauge_mode ? -tf.offsets[i] : 1.0);
            prog.add(std::move(row), lp::Relation::LessEqual, gauge_mode ? 0.0 : tf.offsets[i]);
        }
        const auto out = lp::solve(prog);
        if (!out.optimal()) return {Outcome::NoOptimum, {}};
        return {Outcome::Placed, Point(out.solution->begin(), out.solution->begin() + static_cast<std::ptrdiff_t>(n))};
    }
};

EpsNet build(const ConvexBody& target, const ConvexBody& gauge, double epsilon, std::size_t max_points,
             bool same_body) {
    if (!(epsilon > 0.0) || epsilon > 1.0) throw InputError("build_net: epsilon must lie in (0, 1]");
    if (target.dim() != gauge.dim()) throw InputError("build_net: target and gauge dimensions differ");
    const std::size_t n = target.dim();

    EpsNet net;
    net.epsilon = epsilon;
    net.anchor = scaled(gauge.inball().center, epsilon);
    net.certified_inradius = epsilon * gauge.inball().radius;
    net.grid_spacing = 2.0 * net.certified_inradius * (1.0 - kGridSlack) / std::sqrt(static_cast<double>(n));
    const double h = net.grid_spacing;

    const Box box = target.bounding_box();
    net.origin = box.lo;
    net.cells_per_axis.resize(n);
    double total = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        net.cells_per_axis[j] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((box.hi[j] - box.lo[j]) / h)));
        total *= static_cast<double>(net.cells_per_axis[j]);
    }
    if (total > static_cast<double>(max_points)) {
        throw NetTooLarge("build_net: grid of " + std::to_string(static_cast<long double>(total)) +
                          " cells exceeds the limit of " + std::to_string(max_points));
    }
    const auto cells = static_cast<std::size_t>(total);

    const auto& f = target.facets();
    std::vector<double> l1(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        l1[i] = 0.0;
        for (double a : f.normals[i]) l1[i] += std::abs(a);
    }
    const double tol = kMembershipTolerance * std::max(1.0, target.extent());
    const std::optional<MinkowskiCombo> shrink =
        same_body ? std::optional<MinkowskiCombo>(MinkowskiCombo(target, 1.0, epsilon)) : std::nullopt;

    std::vector<std::vector<std::uint64_t>> kept(thread_count());
    parallel_for(
        cells,
        [&](std::size_t begin, std::size_t end, std::size_t worker) {
            Point g(n);
            Point y(n);
            auto& out = kept[worker];
            for (std::size_t id = begin; id < end; ++id) {
                std::size_t rest = id;
                for (std::size_t j = 0; j < n; ++j) {
                    const std::size_t k = rest % net.cells_per_axis[j];
                    rest /= net.cells_per_axis[j];
                    g[j] = box.lo[j] + (static_cast<double>(k) + 0.5) * h;
                }
                // Keep the cell unless some facet halfspace misses it entirely.
                bool meets = true;
                for (std::size_t i = 0; i < f.size() && meets; ++i) {
                    meets = dot(f.normals[i], g) - 0.5 * h * l1[i] <= f.offsets[i] + tol;
                }
                if (!meets) continue;
                if (shrink) {
                    for (std::size_t j = 0; j < n; ++j) y[j] = g[j] - net.anchor[j];
                    if (!shrink->contains(y)) continue;
                }
                out.push_back(id);
            }
        },
        1024);

    for (auto& part : kept) net.cell_ids.insert(net.cell_ids.end(), part.begin(), part.end());
    std::sort(net.cell_ids.begin(), net.cell_ids.end());

    std::vector<double> target_support(gauge.facets().size());
    for (std::size_t k = 0; k < target_support.size(); ++k) {
        target_support[k] = target.support(gauge.facets().normals[k]);
    }
    const Snapper snap{target, gauge, epsilon, h, target_support};

    std::vector<Point> pts(net.cell_ids.size());
    std::vector<char> keep(net.cell_ids.size(), 1);
    parallel_for(
        pts.size(),
        [&](std::size_t begin, std::size_t end, std::size_t) {
            Point g(n);
            for (std::size_t i = begin; i < end; ++i) {
                std::uint64_t rest = net.cell_ids[i];
                for (std::size_t j = 0; j < n; ++j) {
                    const std::uint64_t k = rest % net.cells_per_axis[j];
                    rest /= net.cells_per_axis[j];
                    g[j] = box.lo[j] + (static_cast<double>(k) + 0.5) * h;
                }
                auto placed = snap.place(g, net.anchor);
                if (placed.outcome != Snapper::Outcome::Placed) {
                    keep[i] = 0;
                    continue;
                }
                pts[i] = std::move(placed.y);
                if (shrink && !shrink->contains(pts[i])) keep[i] = 0;
            }
        },
        64);

    net.points = PointSet(n);
    net.points.reserve(pts.size());
    std::vector<std::uint64_t> ids;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!keep[i]) continue;
        net.points.push_back(pts[i]);
        ids.push_back(net.cell_ids[i]);
    }
    net.cell_ids = std::move(ids);
    return net;
}

}  // namespace

double EpsNet::reference_bound() const {
    return std::ceil(std::pow(5.0 / epsilon, static_cast<double>(points.dim())));
}

std::optional<std::size_t> EpsNet::locate(ConstVec x) const {
    require_dim(x, origin.size(), "EpsNet::locate");
    std::uint64_t id = 0;
    std::uint64_t stride = 1;
    for (std::size_t j = 0; j < origin.size(); ++j) {
        const double cells = static_cast<double>(cells_per_axis[j]);
        double t = std::floor((x[j] - origin[j]) / grid_spacing);
        if (t == cells && x[j] - origin[j] <= cells * grid_spacing) t = cells - 1.0;
        if (t < 0.0 || t >= cells) return std::nullopt;
        id += static_cast<std::uint64_t>(t) * stride;
        stride *= cells_per_axis[j];
    }
    const auto it = std::lower_bound(cell_ids.begin(), cell_ids.end(), id);
    if (it == cell_ids.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - cell_ids.begin());
}

EpsNet build_net(const ConvexBody& body, double epsilon, std::size_t max_points) {
    return build(body, body, epsilon, max_points, true);
}

EpsNet build_net(const ConvexBody& target, const ConvexBody& gauge, double epsilon, std::size_t max_points) {
    return build(target, gauge, epsilon, max_points, false);
}

double default_epsilon(std::size_t n) {
    if (n < 2) throw InputError("default_epsilon: n must be >= 2");
    const double dn = static_cast<double>(n);
    const double a = 1.0 - 4.0 * std::log(dn) / dn;
    return std::max(a / (dn * std::log(dn)), kEpsilonFloor);
}

}  // namespace homcover::nets
