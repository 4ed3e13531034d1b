#include "homcover/fnsched.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <tuple>

#include "homcover/parallel.hpp"
#include "homcover/randcover.hpp"
#include "homcover/randvol.hpp"

namespace homcover::fnsched {

namespace {

constexpr std::uint64_t kVolumeTag = 0xfff0'0000'0000'0001ULL;
constexpr std::uint64_t kPlacementTag = 0xfff0'0000'0000'0002ULL;
constexpr std::uint64_t kProbeTag = 0xfff0'0000'0000'0003ULL;
constexpr std::uint64_t kCellTag = 0xfff0'0000'0000'0004ULL;
constexpr double kRatioSlack = 1e-12;

double dpow(double x, std::size_t n) { return std::pow(x, static_cast<double>(n)); }

// Half side of the tiling cubes, n^{-3/2}.
double tile_half_side(std::size_t n) { return std::pow(static_cast<double>(n), -1.5); }

double cube_volume(double half_side, std::size_t n) { return dpow(2.0 * half_side, n); }

double body_volume(const ConvexBody& body, double scale, RngSpec rng) {
    if (body.kind() != BodyKind::VRep) return randvol::exact_volume(body, scale);
    return randvol::mc_volume(MinkowskiCombo(body, 1.0, 0.0), rng, 400000).mean * dpow(scale, body.dim());
}

std::vector<Point> cube_vertices(std::size_t n, double half_side) {
    std::vector<Point> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Point v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = (mask >> j & 1) ? half_side : -half_side;
        out.push_back(std::move(v));
    }
    return out;
}

bool box_meets(const ConvexBody& body, ConstVec center, double half_side) {
    const std::size_t n = body.dim();
    lp::LinearProgram prog;
    prog.objective.assign(n, 0.0);
    prog.bounds.resize(n);
    for (std::size_t j = 0; j < n; ++j) prog.bounds[j] = {center[j] - half_side, center[j] + half_side};
    const auto& f = body.facets();
    for (std::size_t i = 0; i < f.size(); ++i) prog.add(f.normals[i], lp::Relation::LessEqual, f.offsets[i]);
    return lp::feasible(prog);
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::Exact ? "paper" : "desk"; }

Mode mode_from_string(const std::string& s) {
    if (s == "paper") return Mode::Exact;
    if (s == "desk") return Mode::Desk;
    throw InputError("unknown mode '" + s + "'");
}

std::string to_string(Phase p) {
    switch (p) {
        case Phase::Random: return "random";
        case Phase::Patch: return "patch";
        case Phase::LargeRatios: return "large-ratio";
    }
    return "random";
}

std::string to_string(Branch b) { return b == Branch::LargeRatios ? "large-ratios" : "dyadic"; }

Thresholds thresholds(std::size_t n, Mode mode, double scale) {
    const double p4 = randcover::threshold_sum(n, 1.0, 4.0);
    const double p5 = randcover::threshold_sum(n, 1.0, 5.0);
    const double p6 = randcover::threshold_sum(n, 1.0, 6.0);
    if (mode == Mode::Exact) return {p4, p5, p6};
    if (!(scale > 0.0)) throw InputError("desk scale must be positive");
    return {scale * p4 / p5, scale, scale * p6 / p5};
}

double RatioSequence::power_sum(std::size_t n) const { return randcover::power_sum(ratios, n); }

double large_ratio_cutoff(std::size_t n) { return std::pow(static_cast<double>(n), -5.0); }

int dyadic_class(double lambda, std::size_t n) {
    const double x = lambda / large_ratio_cutoff(n);
    if (!(x > 0.0 && x < 1.0)) throw InputError("dyadic_class: ratio outside (0, n^-5)");
    int k = static_cast<int>(std::floor(-std::log2(x))) + 1;
    while (x > std::ldexp(1.0, -k + 1)) --k;
    while (x <= std::ldexp(1.0, -k)) ++k;
    return k;
}

DyadicPlan dyadic_plan(const RatioSequence& seq, std::size_t n, const Thresholds& t, double volume) {
    DyadicPlan plan;
    std::map<int, std::vector<std::size_t>> by_class;
    const double cutoff = large_ratio_cutoff(n);
    for (std::size_t i = 0; i < seq.ratios.size(); ++i) {
        const double r = seq.ratios[i];
        if (!(r > 0.0 && r < 1.0)) throw InputError("dyadic_plan: every ratio must lie in (0, 1)");
        if (r >= cutoff) {
            plan.large.push_back(i);
        } else {
            by_class[dyadic_class(r, n)].push_back(i);
        }
    }
    for (auto& [k, indices] : by_class) {
        DyadicClass cls;
        cls.k = k;
        cls.indices = indices;
        const double cell = cube_volume(std::ldexp(tile_half_side(n), -k + 1), n);
        double mass = 0.0;
        for (std::size_t i : indices) mass += dpow(seq.ratios[i], n) * volume;
        cls.budget = static_cast<std::size_t>(std::floor(mass / (t.t6 * cell)));

        std::vector<std::size_t> order = indices;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return seq.ratios[a] > seq.ratios[b]; });
        std::vector<std::size_t> current;
        double filled = 0.0;
        std::size_t pos = 0;
        for (; pos < order.size() && cls.partitions.size() < cls.budget; ++pos) {
            current.push_back(order[pos]);
            filled += dpow(seq.ratios[order[pos]], n) * volume;
            if (filled >= t.t5 * cell) {
                cls.partitions.push_back(std::move(current));
                current.clear();
                filled = 0.0;
            }
        }
        plan.remainder.insert(plan.remainder.end(), current.begin(), current.end());
        plan.remainder.insert(plan.remainder.end(), order.begin() + static_cast<std::ptrdiff_t>(pos), order.end());
        plan.classes.push_back(std::move(cls));
    }
    std::sort(plan.remainder.begin(), plan.remainder.end());
    return plan;
}

void assign_cubes(DyadicPlan& plan, const std::vector<Point>& tiling_centers, std::size_t n) {
    const double h1 = tile_half_side(n);
    int deepest = 1;
    for (const auto& c : plan.classes) deepest = std::max(deepest, c.k);
    std::vector<std::deque<Point>> open(static_cast<std::size_t>(deepest) + 1);
    for (const auto& c : tiling_centers) open[1].push_back(c);
    plan.cubes.clear();

    for (std::size_t ci = 0; ci < plan.classes.size(); ++ci) {
        const int k = plan.classes[ci].k;
        for (std::size_t l = 0; l < plan.classes[ci].partitions.size(); ++l) {
            int level = k;
            while (level >= 1 && open[static_cast<std::size_t>(level)].empty()) --level;
            if (level < 1) break;
            Point cell = open[static_cast<std::size_t>(level)].front();
            open[static_cast<std::size_t>(level)].pop_front();
            // Split down to the class size, keeping the first child each time.
            for (; level < k; ++level) {
                const double child = std::ldexp(h1, -level);
                const auto offsets = cube_vertices(n, child);
                for (std::size_t c = 1; c < offsets.size(); ++c) {
                    Point sib = cell;
                    for (std::size_t j = 0; j < n; ++j) sib[j] += offsets[c][j];
                    open[static_cast<std::size_t>(level) + 1].push_back(std::move(sib));
                }
                for (std::size_t j = 0; j < n; ++j) cell[j] += offsets[0][j];
            }
            plan.cubes.push_back({std::move(cell), std::ldexp(h1, -k + 1), k, ci, l});
        }
    }
    plan.unassigned = 0;
    for (const auto& q : open) plan.unassigned += q.size();
}

std::vector<HomothetPlacement> CoveringConstruction::homothets() const {
    std::vector<HomothetPlacement> out;
    out.reserve(placements.size());
    for (const auto& p : placements) out.push_back({p.center, p.ratio});
    return out;
}

double symmetry_ratio(const ConvexBody& body) {
    if (!body.origin_interior()) return 0.0;
    const auto& f = body.facets();
    double rho = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        rho = std::min(rho, f.offsets[i] / body.support(scaled(f.normals[i], -1.0)));
    }
    return rho;
}

double patch_separation(std::size_t n, double symmetry, double min_ratio, double epsilon) {
    if (!(symmetry > 0.0)) throw InputError("patch_separation: the origin must be interior to the body");
    const double room = min_ratio - epsilon;
    if (!(room > 0.0)) throw InputError("patch_separation: ratios must exceed the shrink");
    const double dn = static_cast<double>(n);
    return std::min(1.0 / (2.0 * dn * std::log(dn)), kPatchSlack * room * symmetry / (1.0 + symmetry));
}

CubePlacement place_in_cube(const CubeCoverInput& in, const PointSet& probes) {
    const std::size_t n = in.body.dim();
    const ConvexBody& k = in.body;
    if (!(in.half_side > 0.0)) throw InputError("cube cover: half side must be positive");
    if (in.ratios.empty()) throw InputError("cube cover: no ratios");
    for (double r : in.ratios) {
        if (r < 0.5 - kRatioSlack || r > 1.0 + kRatioSlack) throw InputError("cube cover: ratios must lie in [1/2, 1]");
    }
    const double vol_k = in.body_volume ? *in.body_volume : body_volume(k, 1.0, in.rng.child(kVolumeTag));
    const double vol_cube = cube_volume(in.half_side, n);
    double total = 0.0;
    for (double r : in.ratios) total += dpow(r, n) * vol_k;
    if (total < in.thresholds.t5 * vol_cube * (1.0 - kRatioSlack)) {
        throw InputError("cube cover: ratio volume is below the threshold");
    }

    CubePlacement out;
    auto& st = out.stats;
    st.symmetry = symmetry_ratio(k);
    st.symmetric_inclusion = st.symmetry >= 1.0 / static_cast<double>(n) - kRatioSlack;
    const Box bb = k.bounding_box();
    st.inside_unit_cube = true;
    for (std::size_t j = 0; j < n; ++j) {
        st.inside_unit_cube = st.inside_unit_cube && bb.lo[j] >= -1.0 - kRatioSlack && bb.hi[j] <= 1.0 + kRatioSlack;
    }

    double acc = 0.0;
    std::size_t prefix = 0;
    while (prefix < in.ratios.size() && acc < in.thresholds.t4 * vol_cube) acc += dpow(in.ratios[prefix++], n) * vol_k;
    st.prefix = prefix;

    // Random phase: uniform in L B_inf - 2K'.
    PointSet sums(n);
    for (const auto& c : cube_vertices(n, in.half_side)) {
        for (std::size_t v = 0; v < k.vertices().size(); ++v) sums.push_back(axpy(c, -2.0, k.vertices()[v]));
    }
    const ConvexBody domain = ConvexBody::from_vertices(sums);
    const PointSet centers = randvol::sample_uniform(domain, in.rng, prefix);
    auto& placed = out.construction.placements;
    std::vector<HomothetPlacement> first;
    for (std::size_t i = 0; i < prefix; ++i) {
        placed.push_back({i, centers.point(i), in.ratios[i], Phase::Random});
        first.push_back({centers.point(i), in.ratios[i]});
    }

    std::vector<std::size_t> uncovered;
    if (!first.empty()) {
        const cover::HomothetIndex index(k, first, in.epsilon);
        for (std::size_t p = 0; p < probes.size(); ++p) {
            if (!index.first_containing(probes[p])) uncovered.push_back(p);
        }
    } else {
        uncovered.resize(probes.size());
        std::iota(uncovered.begin(), uncovered.end(), std::size_t{0});
    }
    st.uncovered = uncovered.size();
    if (uncovered.empty()) {
        st.unused = in.ratios.size() - prefix;
        return out;
    }
    if (prefix == in.ratios.size()) {
        throw PatchDeficit("cube cover: " + std::to_string(uncovered.size()) +
                           " uncovered probes and no ratios left for patching");
    }

    // Patch phase: a maximal delta (K' - K')-separated subset of the uncovered probes.
    double min_ratio = 1.0;
    for (std::size_t i = prefix; i < in.ratios.size(); ++i) min_ratio = std::min(min_ratio, in.ratios[i]);
    st.separation = patch_separation(n, st.symmetry, min_ratio, in.epsilon);
    const double delta = st.separation;
    const MinkowskiCombo diff(k, 1.0, 1.0);
    const Box db = diff.bounding_box();
    std::vector<Point> chosen;
    Point rel(n);
    for (std::size_t p : uncovered) {
        bool near = false;
        for (const auto& q : chosen) {
            bool in_box = true;
            for (std::size_t j = 0; j < n && in_box; ++j) {
                rel[j] = (probes[p][j] - q[j]) / delta;
                in_box = rel[j] >= db.lo[j] && rel[j] <= db.hi[j];
            }
            if (in_box && diff.contains(rel)) {
                near = true;
                break;
            }
        }
        if (!near) chosen.push_back(probes.point(p));
    }
    st.patch_points = chosen.size();
    const std::size_t left = in.ratios.size() - prefix;
    if (chosen.size() > left) {
        throw PatchDeficit("cube cover: patch needs " + std::to_string(chosen.size()) + " ratios but only " +
                           std::to_string(left) + " remain (shortfall " + std::to_string(chosen.size() - left) + ")");
    }
    for (std::size_t j = 0; j < chosen.size(); ++j) {
        placed.push_back({prefix + j, std::move(chosen[j]), in.ratios[prefix + j], Phase::Patch});
    }
    st.unused = left - st.patch_points;
    return out;
}

CubeCoverResult cover_cube(const CubeCoverInput& in) {
    const std::size_t n = in.body.dim();
    const ConvexBody target = ConvexBody::cube(n).transformed(in.half_side, Point(n, 0.0));
    const auto net = nets::build_net(target, in.body, in.epsilon);
    auto placed = place_in_cube(in, net.points);
    CubeCoverResult out;
    out.stats = placed.stats;
    out.construction = std::move(placed.construction);
    out.verdict = cover::certify_cover(target, in.body, out.construction.homothets(), net);
    return out;
}

Normalization normalize(const ConvexBody& body) {
    const std::size_t n = body.dim();
    const auto& v = body.vertices();
    Normalization out;
    out.shift.assign(n, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) out.shift[j] += v[i][j] / static_cast<double>(v.size());
    }
    const ConvexBody centered = body.transformed(1.0, scaled(out.shift, -1.0));
    const auto& f = centered.facets();
    double s_in = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double l1 = 0.0;
        for (double a : f.normals[i]) l1 += std::abs(a);
        s_in = std::max(s_in, l1 / f.offsets[i]);
    }
    double reach = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) reach = std::max(reach, norm_inf(centered.vertices()[i]));
    const double outer = std::pow(static_cast<double>(n), 1.5);
    out.scale = std::min(s_in, outer / reach);
    out.unit_cube_inside = out.scale >= s_in * (1.0 - kRatioSlack);
    out.inside_outer_cube = out.scale * reach <= outer * (1.0 + kRatioSlack);
    return out;
}

namespace {

struct LeafKey {
    std::size_t tile;
    int level;
    std::uint64_t cell;
    auto tie() const { return std::tie(tile, level, cell); }
    bool operator<(const LeafKey& o) const { return tie() < o.tie(); }
};

// Tiling of the normalized body by cubes of half side n^{-3/2} and lookup of
// the refinement cube holding a point.
class Tiling {
public:
    Tiling(const ConvexBody& body, std::size_t n) : n_(n), h_(tile_half_side(n)) {
        const Box b = body.bounding_box();
        lo_ = b.lo;
        counts_.resize(n);
        std::size_t total = 1;
        for (std::size_t j = 0; j < n; ++j) {
            counts_[j] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b.hi[j] - b.lo[j]) / (2 * h_))));
            total *= counts_[j];
        }
        slot_.assign(total, kAbsent);
        for (std::size_t id = 0; id < total; ++id) {
            const Point c = center_of(id);
            if (!box_meets(body, c, h_)) continue;
            slot_[id] = centers_.size();
            centers_.push_back(c);
        }
    }

    const std::vector<Point>& centers() const { return centers_; }

    void add_leaf(const CubeAssignment& a, std::size_t leaf) {
        const std::size_t tile = tile_of(a.center);
        leaves_[{tile, a.k, sub_cell(tile, a.center, a.k)}] = leaf;
        deepest_ = std::max(deepest_, a.k);
    }

    std::optional<std::size_t> leaf_of(ConstVec z) const {
        const std::size_t tile = tile_of(z);
        for (int level = 1; level <= deepest_; ++level) {
            const auto it = leaves_.find({tile, level, sub_cell(tile, z, level)});
            if (it != leaves_.end()) return it->second;
        }
        return std::nullopt;
    }

private:
    static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

    Point center_of(std::size_t id) const {
        Point c(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            c[j] = lo_[j] + (static_cast<double>(id % counts_[j]) + 0.5) * 2 * h_;
            id /= counts_[j];
        }
        return c;
    }

    // Kept tile holding z, or the nearest kept tile in the max norm.
    std::size_t tile_of(ConstVec z) const {
        std::size_t id = 0;
        std::size_t stride = 1;
        for (std::size_t j = 0; j < n_; ++j) {
            const double t = std::floor((z[j] - lo_[j]) / (2 * h_));
            const auto cell = static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(counts_[j] - 1)));
            id += cell * stride;
            stride *= counts_[j];
        }
        if (slot_[id] != kAbsent) return slot_[id];
        std::size_t best = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            const double d = norm_inf(difference(z, centers_[i]));
            if (d < dist) {
                dist = d;
                best = i;
            }
        }
        return best;
    }

    std::uint64_t sub_cell(std::size_t tile, ConstVec z, int level) const {
        const auto per_axis = std::uint64_t{1} << (level - 1);
        const double width = 2 * h_ / static_cast<double>(per_axis);
        std::uint64_t id = 0;
        std::uint64_t stride = 1;
        for (std::size_t j = 0; j < n_; ++j) {
            const double t = std::floor((z[j] - (centers_[tile][j] - h_)) / width);
            id += static_cast<std::uint64_t>(std::clamp(t, 0.0, static_cast<double>(per_axis - 1))) * stride;
            stride *= per_axis;
        }
        return id;
    }

    std::size_t n_;
    double h_;
    Point lo_;
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> slot_;
    std::vector<Point> centers_;
    std::map<LeafKey, std::size_t> leaves_;
    int deepest_ = 1;
};

void run_large_branch(const GeneralizedCoverConfig& config, GeneralizedCoverReport& rep) {
    const std::size_t n = config.body.dim();
    std::vector<double> ratios;
    double smallest = 1.0;
    for (std::size_t i : rep.plan.large) {
        ratios.push_back(config.seq.ratios[i]);
        smallest = std::min(smallest, config.seq.ratios[i]);
    }
    rep.epsilon = config.epsilon.value_or(config.mode == Mode::Exact
                                              ? std::min(nets::default_epsilon(n), kNetFraction * smallest)
                                              : kNetFraction * smallest);
    const auto ps = randcover::draw_trial_placements(config.body, ratios, randcover::Domain::KMinusLambdaK,
                                                     config.rng.child(kPlacementTag), 0);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        rep.construction.placements.push_back({rep.plan.large[i], ps[i].center, ps[i].ratio, Phase::LargeRatios});
    }
    const auto net = nets::build_net(config.body, rep.epsilon);
    rep.net_size = net.size();
    rep.verdict = cover::decide_cover(config.body, ps, net, config.rng.child(kProbeTag), config.probes);
}

void run_dyadic_branch(const GeneralizedCoverConfig& config, GeneralizedCoverReport& rep) {
    const std::size_t n = config.body.dim();
    const double dn = static_cast<double>(n);
    const auto& norm = rep.normalization;
    const ConvexBody normalized = config.body.transformed(norm.scale, scaled(norm.shift, -norm.scale));
    const Tiling tiling_probe(normalized, n);
    rep.tiling_cubes = tiling_probe.centers().size();
    assign_cubes(rep.plan, tiling_probe.centers(), n);
    Tiling tiling = tiling_probe;
    for (std::size_t i = 0; i < rep.plan.cubes.size(); ++i) tiling.add_leaf(rep.plan.cubes[i], i);
    if (rep.plan.cubes.empty()) {
        rep.verdict.status = cover::Status::Unknown;
        return;
    }

    double smallest = 1.0;
    for (const auto& c : rep.plan.cubes) smallest = std::min(smallest, std::ldexp(large_ratio_cutoff(n), -c.k));
    rep.epsilon = config.epsilon.value_or(kNetFraction * smallest);
    const auto net = nets::build_net(config.body, rep.epsilon);
    rep.net_size = net.size();

    // Probe z = s (y - (1 - eps) c) sits in Y + (lambda - eps) K~ exactly when
    // y sits in the original homothet shrunk by eps.
    std::vector<std::vector<std::size_t>> members(rep.plan.cubes.size());
    std::vector<Point> zs(net.size());
    for (std::size_t p = 0; p < net.size(); ++p) {
        Point z(n);
        for (std::size_t j = 0; j < n; ++j) z[j] = norm.scale * (net.points[p][j] - (1.0 - rep.epsilon) * norm.shift[j]);
        if (const auto leaf = tiling.leaf_of(z)) {
            members[*leaf].push_back(p);
        } else {
            ++rep.orphan_probes;
        }
        zs[p] = std::move(z);
    }

    const double big_l = dn * dn;
    const ConvexBody unit_body = normalized.transformed(std::pow(dn, -1.5), Point(n, 0.0));
    const double unit_volume = body_volume(config.body, norm.scale * std::pow(dn, -1.5), config.rng.child(kVolumeTag));
    std::vector<CubePlacement> results(rep.plan.cubes.size());
    parallel_for(rep.plan.cubes.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t c = begin; c < end; ++c) {
            const auto& cube = rep.plan.cubes[c];
            const double sigma = cube.half_side / big_l;
            const auto& part = rep.plan.classes[cube.class_index].partitions[cube.partition];
            CubeCoverInput in(unit_body, big_l, {}, rep.thresholds);
            in.epsilon = rep.epsilon * std::pow(dn, 1.5) / sigma;
            in.rng = config.rng.child(kCellTag).child(c);
            in.body_volume = unit_volume;
            for (std::size_t i : part) in.ratios.push_back(config.seq.ratios[i] * std::pow(dn, 1.5) / sigma);
            PointSet local(n);
            for (std::size_t p : members[c]) {
                Point q(n);
                for (std::size_t j = 0; j < n; ++j) q[j] = (zs[p][j] - cube.center[j]) / sigma;
                local.push_back(q);
            }
            try {
                results[c] = place_in_cube(in, local);
            } catch (const PatchDeficit& e) {
                throw PatchDeficit("dyadic branch, cube " + std::to_string(c) + ": " + e.what());
            }
        }
    });

    for (std::size_t c = 0; c < results.size(); ++c) {
        const auto& cube = rep.plan.cubes[c];
        const double sigma = cube.half_side / big_l;
        const auto& part = rep.plan.classes[cube.class_index].partitions[cube.partition];
        rep.patch_points += results[c].stats.patch_points;
        rep.max_patch_points = std::max(rep.max_patch_points, results[c].stats.patch_points);
        rep.symmetry = results[c].stats.symmetry;
        rep.symmetric_inclusion = results[c].stats.symmetric_inclusion;
        for (const auto& p : results[c].construction.placements) {
            const std::size_t index = part[p.index];
            const double lambda = config.seq.ratios[index];
            // Normalized center Y = cube center + sigma Y'; original x = Y / s + (1 - lambda) c.
            Point x(n);
            for (std::size_t j = 0; j < n; ++j) {
                x[j] = (cube.center[j] + sigma * p.center[j]) / norm.scale + (1.0 - lambda) * norm.shift[j];
            }
            rep.construction.placements.push_back({index, std::move(x), lambda, p.phase});
        }
    }
    rep.verdict =
        cover::decide_cover(config.body, rep.construction.homothets(), net, config.rng.child(kProbeTag), config.probes);
}

}  // namespace

GeneralizedCoverReport run_generalized_cover(const GeneralizedCoverConfig& config) {
    const std::size_t n = config.body.dim();
    if (n < 2) throw InputError("generalized cover: dimension must be >= 2");
    if (config.seq.ratios.empty()) throw InputError("generalized cover: no ratios");

    GeneralizedCoverReport rep;
    rep.mode = config.mode;
    rep.thresholds = thresholds(n, config.mode, config.scale);
    rep.volume_ratio = config.volume_ratio.value_or(
        randvol::difference_ratio(config.body, config.rng.child(kVolumeTag)).value);
    rep.power_sum = config.seq.power_sum(n);
    const double cutoff = large_ratio_cutoff(n);
    for (double r : config.seq.ratios) {
        if (r >= cutoff) rep.large_power_sum += dpow(r, n);
    }
    rep.precondition = rep.power_sum > rep.thresholds.t5 * rep.volume_ratio;

    rep.normalization = normalize(config.body);
    const double volume = body_volume(config.body, rep.normalization.scale, config.rng.child(kVolumeTag).child(1));
    rep.plan = dyadic_plan(config.seq, n, rep.thresholds, volume);

    if (rep.large_power_sum >= rep.thresholds.t4 * rep.volume_ratio) {
        rep.branch = Branch::LargeRatios;
        run_large_branch(config, rep);
    } else {
        rep.branch = Branch::Dyadic;
        run_dyadic_branch(config, rep);
    }
    return rep;
}

}  // namespace homcover::fnsched
