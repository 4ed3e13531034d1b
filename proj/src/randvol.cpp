#include "homcover/randvol.hpp"

#include <atomic>
#include <cmath>

#include "homcover/parallel.hpp"

namespace homcover::randvol {

namespace {

void check_dimension(std::size_t dim) {
    if (dim > kMaxRejectionDim) {
        throw RejectionTooSlow("rejection sampling is capped at dimension " + std::to_string(kMaxRejectionDim) +
                               ", got " + std::to_string(dim));
    }
}

void check_acceptance(std::uint64_t accepted, std::uint64_t drawn) {
    if (drawn >= kProbeDraws && static_cast<double>(accepted) < kMinAcceptance * static_cast<double>(drawn)) {
        throw RejectionTooSlow("acceptance rate " + std::to_string(static_cast<double>(accepted) / drawn) +
                               " below floor after " + std::to_string(drawn) + " draws");
    }
}

void draw_in_box(RandomStream& s, const Box& box, Point& out) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = s.uniform(box.lo[j], box.hi[j]);
}

}  // namespace

Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
    if (trials == 0) throw InputError("wilson_interval: zero trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, std::min(p, center - half)), std::min(1.0, std::max(p, center + half))};
}

PointSet sample_uniform(const MinkowskiCombo& combo, RngSpec rng, std::size_t count) {
    const std::size_t n = combo.dim();
    check_dimension(n);
    const Box box = combo.bounding_box();
    RandomStream s(rng);
    PointSet out(n);
    out.reserve(count);
    Point x(n);
    std::uint64_t drawn = 0;
    while (out.size() < count) {
        draw_in_box(s, box, x);
        ++drawn;
        if (combo.contains(x)) out.push_back(x);
        check_acceptance(out.size(), drawn);
    }
    return out;
}

PointSet sample_uniform(const ConvexBody& body, RngSpec rng, std::size_t count) {
    return sample_uniform(MinkowskiCombo(body, 1.0, 0.0), rng, count);
}

VolumeEstimate mc_volume(const MinkowskiCombo& combo, RngSpec rng, std::uint64_t samples) {
    if (samples < 1000) throw InputError("mc_volume: at least 1000 samples required");
    const std::size_t n = combo.dim();
    check_dimension(n);
    const Box box = combo.bounding_box();
    std::atomic<std::uint64_t> hits{0};
    parallel_for(
        samples,
        [&](std::size_t begin, std::size_t end, std::size_t) {
            RandomStream s(rng);
            s.seek(static_cast<std::uint64_t>(begin) * n);
            Point x(n);
            std::uint64_t local = 0;
            for (std::size_t i = begin; i < end; ++i) {
                draw_in_box(s, box, x);
                if (combo.contains(x)) ++local;
            }
            hits += local;
        },
        4096);
    check_acceptance(hits, samples);
    VolumeEstimate est;
    est.samples = samples;
    est.hits = hits;
    est.box_volume = box.volume();
    const Interval ci = wilson_interval(est.hits, samples);
    est.mean = est.box_volume * static_cast<double>(est.hits) / static_cast<double>(samples);
    est.ci95_low = est.box_volume * ci.lo;
    est.ci95_high = est.box_volume * ci.hi;
    return est;
}

double exact_volume(BodyKind kind, std::size_t dim, double scale) {
    if (dim == 0) throw InputError("exact_volume: dimension must be >= 1");
    if (!(scale > 0.0)) throw InputError("exact_volume: scale must be positive");
    const double n = static_cast<double>(dim);
    const double fact = std::tgamma(n + 1.0);
    switch (kind) {
        case BodyKind::Cube: return std::pow(2.0 * scale, n);
        case BodyKind::Simplex: return std::pow(scale, n) / fact;
        case BodyKind::CrossPolytope: return std::pow(2.0 * scale, n) / fact;
        case BodyKind::VRep: break;
    }
    throw Unsupported("exact_volume: no closed form for vrep bodies");
}

double exact_volume(const ConvexBody& body, double scale) { return exact_volume(body.kind(), body.dim(), scale); }

std::optional<double> exact_difference_ratio(const ConvexBody& body) {
    const double n = static_cast<double>(body.dim());
    if (body.symmetric()) return std::pow(2.0, n);
    if (body.kind() == BodyKind::Simplex) {
        double c = 1.0;
        for (std::size_t i = 1; i <= body.dim(); ++i) c = c * static_cast<double>(body.dim() + i) / static_cast<double>(i);
        return c;
    }
    return std::nullopt;
}

RatioEstimate difference_ratio(const ConvexBody& body, RngSpec rng, std::uint64_t samples) {
    if (auto r = exact_difference_ratio(body)) return {*r, true, {*r, *r}};
    const auto diff = mc_volume(MinkowskiCombo(body, 1.0, 1.0), rng.child(1), samples);
    const auto base = mc_volume(MinkowskiCombo(body, 1.0, 0.0), rng.child(2), samples);
    if (base.hits == 0) throw NumericFailure("difference_ratio: no hits in the body");
    return {diff.mean / base.mean, false, {diff.ci95_low / base.ci95_high, diff.ci95_high / base.ci95_low}};
}

ConvexBody random_vrep(std::size_t dim, std::size_t count, RngSpec rng) {
    if (dim == 0) throw InputError("random_vrep: dimension must be >= 1");
    if (count < dim + 1) throw InputError("random_vrep: need at least dim + 1 points");
    RandomStream s(rng);
    for (int attempt = 0; attempt < 64; ++attempt) {
        PointSet pts(dim);
        Point x(dim);
        while (pts.size() < count) {
            for (double& v : x) v = s.uniform(-1.0, 1.0);
            const double r = norm2(x);
            if (r > 1e-9 && r <= 1.0) pts.push_back(scaled(x, 1.0 / r));
        }
        Point c(dim, 0.0);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < dim; ++j) c[j] += pts[i][j] / static_cast<double>(count);
        PointSet centered(dim);
        for (std::size_t i = 0; i < pts.size(); ++i) centered.push_back(difference(pts[i], c));
        try {
            ConvexBody body = ConvexBody::from_vertices(centered);
            if (body.origin_interior()) return body;
        } catch (const InputError&) {
            // Degenerate draw; take the next one from the same stream.
        }
    }
    throw NumericFailure("random_vrep: could not draw a full-dimensional body");
}

}  // namespace homcover::randvol
