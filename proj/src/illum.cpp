#include "homcover/illum.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "homcover/parallel.hpp"

namespace homcover::illum {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr std::uint64_t kVolumeTag = 0xffff'ffff'ffff'ff00ULL;
constexpr std::uint64_t kIlluminationTag = 0x4000'0000'0000'0000ULL;

double scale_of(const ConvexBody& body) { return std::max(1.0, body.extent()); }

struct Span {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool empty() const { return !(lo < hi); }
};

// Open set of s with p + s d at depth > margin.
Span interior_span(const ConvexBody& body, ConstVec p, ConstVec d, double margin) {
    const auto& f = body.facets();
    Span s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double slope = dot(f.normals[i], d);
        const double room = f.offsets[i] - margin - dot(f.normals[i], p);
        if (slope > 0.0) {
            s.hi = std::min(s.hi, room / slope);
        } else if (slope < 0.0) {
            s.lo = std::max(s.lo, room / slope);
        } else if (room <= 0.0) {
            return {0.0, 0.0};
        }
    }
    return s;
}

}  // namespace

LightSource::LightSource(const ConvexBody& body, Point position) : position_(std::move(position)) {
    require_dim(position_, body.dim(), "LightSource");
    if (body.contains(position_)) throw InputError("light source must lie outside the body");
}

bool illuminates(const LightSource& source, ConstVec boundary_point, const ConvexBody& body) {
    require_dim(boundary_point, body.dim(), "illuminates");
    const double scale = scale_of(body);
    if (std::abs(body.depth(boundary_point)) > kBoundaryTolerance * scale) {
        throw InputError("illuminates: point is not on the boundary");
    }
    const Point& p = source.position();
    const Point d = difference(boundary_point, p);
    if (norm2(d) == 0.0) return false;
    const Span s = interior_span(body, p, d, kInteriorMargin * scale);
    if (s.empty()) return false;
    // Beyond x (s > 1) or behind p (s < 0).
    return s.hi > 1.0 || s.lo < 0.0;
}

Point boundary_point(const ConvexBody& body, ConstVec direction) {
    const Point& c = body.inball().center;
    const double t = lp::ray_max(body.facets(), c, direction);
    return axpy(c, t, direction);
}

IlluminationSet covering_to_illumination(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                                         const cover::CoverageVerdict& certificate, double epsilon_cover) {
    if (certificate.status != cover::Status::Certified) {
        throw ConversionRequiresCertificate("covering_to_illumination: the cover is not certified");
    }
    if (!(epsilon_cover > 0.0 && epsilon_cover < 1.0)) {
        throw InputError("covering_to_illumination: epsilon must lie in (0, 1)");
    }
    IlluminationSet out;
    out.epsilon_cover = epsilon_cover;
    out.r_used = 1.0 / epsilon_cover + kRadiusMargin;
    out.placements = placements;
    out.certificate = certificate;
    for (std::size_t i = 0; i < placements.size(); ++i) {
        const auto& p = placements[i];
        p.validate(body.dim());
        if (std::abs(p.ratio - (1.0 - epsilon_cover)) > 1e-12) {
            throw InputError("covering_to_illumination: every ratio must equal 1 - epsilon");
        }
        Point pos = scaled(p.center, out.r_used);
        if (body.contains(pos)) {
            out.dropped.push_back(i);
            continue;
        }
        out.sources.emplace_back(body, std::move(pos));
    }
    return out;
}

std::string to_string(IllumStatus s) {
    switch (s) {
        case IllumStatus::VerifiedByCovering: return "verified-by-covering";
        case IllumStatus::FalsifiedWitness: return "falsified-witness";
        case IllumStatus::Unknown: return "unknown";
    }
    return "unknown";
}

IllumStatus illum_status_from_string(const std::string& s) {
    if (s == "verified-by-covering") return IllumStatus::VerifiedByCovering;
    if (s == "falsified-witness") return IllumStatus::FalsifiedWitness;
    if (s == "unknown") return IllumStatus::Unknown;
    throw InputError("unknown illumination status '" + s + "'");
}

IlluminationVerdict verify_illumination(const ConvexBody& body, const std::vector<LightSource>& sources, RngSpec rng,
                                        std::size_t probes) {
    if (probes == 0) throw InputError("verify_illumination: probes must be >= 1");
    const std::size_t n = body.dim();
    const std::size_t corners = std::min(probes, body.vertices().size());

    // Probe points are fixed before the parallel pass so the reported witness
    // does not depend on scheduling.
    PointSet pts(n);
    pts.reserve(probes);
    for (std::size_t i = 0; i < corners; ++i) pts.push_back(body.vertices()[i]);
    RandomStream stream(rng);
    while (pts.size() < probes) pts.push_back(boundary_point(body, stream.direction(n)));

    std::atomic<std::size_t> first{kNone};
    parallel_for(
        probes,
        [&](std::size_t begin, std::size_t end, std::size_t) {
            for (std::size_t i = begin; i < end && i < first.load(std::memory_order_relaxed); ++i) {
                bool lit = false;
                for (const auto& s : sources) {
                    if (illuminates(s, pts[i], body)) {
                        lit = true;
                        break;
                    }
                }
                if (!lit) {
                    std::size_t cur = first.load();
                    while (i < cur && !first.compare_exchange_weak(cur, i)) {
                    }
                    return;
                }
            }
        },
        256);

    IlluminationVerdict v;
    v.probes = probes;
    if (first.load() != kNone) {
        v.status = IllumStatus::FalsifiedWitness;
        v.witness = pts.point(first.load());
        v.witness_probe = first.load();
    }
    return v;
}

IlluminationVerdict verify_illumination(const ConvexBody& body, const IlluminationSet& set, RngSpec rng,
                                        std::size_t probes) {
    IlluminationVerdict v = verify_illumination(body, set.sources, rng, probes);
    v.r_used = set.r_used;
    if (v.status == IllumStatus::Unknown && set.certificate.status == cover::Status::Certified) {
        v.status = IllumStatus::VerifiedByCovering;
    }
    return v;
}

std::string check_illumination_witness(const ConvexBody& body, const std::vector<LightSource>& sources,
                                       ConstVec witness) {
    if (witness.size() != body.dim()) return "witness has the wrong dimension";
    if (std::abs(body.depth(witness)) > kBoundaryTolerance * scale_of(body)) return "witness is not on the boundary";
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (illuminates(sources[i], witness, body)) return "witness is lit by source " + std::to_string(i);
    }
    return {};
}

std::pair<std::size_t, double> illumination_parameters(std::size_t n, double volume_ratio) {
    const double t5 = randcover::threshold_sum(n, volume_ratio, 5.0);
    const double t4 = randcover::threshold_sum(n, volume_ratio, 4.0);
    const auto m = static_cast<std::size_t>(std::ceil(t5));
    const double dm = static_cast<double>(m);
    double eps = 1.0 - std::pow(t4 / dm, 1.0 / static_cast<double>(n));
    while (dm * std::pow(1.0 - eps, static_cast<double>(n)) < t4) eps = std::nextafter(eps, 0.0);
    return {m, eps};
}

randcover::CoverExperimentConfig illumination_cover_config(const IlluminationExperimentConfig& config) {
    if (!config.body.origin_interior()) throw InputError("illumination experiment: the origin must be interior to the body");
    const std::size_t n = config.body.dim();
    const auto ratio = config.volume_ratio
                           ? randvol::RatioEstimate{*config.volume_ratio, true, {}}
                           : randvol::difference_ratio(config.body, config.rng.child(kVolumeTag));
    const auto [m, eps] = illumination_parameters(n, ratio.value);
    if (!(config.net_epsilon > 0.0 && config.net_epsilon < 1.0 - eps)) {
        throw InputError("illumination experiment: net epsilon must lie in (0, 1 - eps)");
    }
    randcover::CoverExperimentConfig cc{config.body, std::vector<double>(m, 1.0 - eps)};
    cc.trials = config.trials;
    cc.epsilon = config.net_epsilon;
    cc.rng = config.rng;
    cc.volume_ratio = ratio.value;
    cc.probes = config.cover_probes;
    cc.domain = randcover::Domain::KMinusK;
    cc.keep_details = true;
    return cc;
}

IlluminationExperimentReport run_illumination_experiment(const IlluminationExperimentConfig& config) {
    const auto cc = illumination_cover_config(config);
    const auto prop = randcover::run_cover_experiment(cc);

    IlluminationExperimentReport rep;
    rep.dim = config.body.dim();
    rep.m = cc.ratios.size();
    rep.epsilon_cover = 1.0 - cc.ratios.front();
    rep.r_used = 1.0 / rep.epsilon_cover + kRadiusMargin;
    rep.volume_ratio = prop.volume_ratio;
    rep.volume_ratio_exact = randvol::exact_difference_ratio(config.body).has_value();
    rep.certified = prop.certified;

    for (const auto& row : prop.rows) {
        IlluminationTrialRow out;
        out.trial = row.trial;
        out.cover = row.verdict;
        if (row.verdict == cover::Status::Certified) {
            cover::CoverageVerdict cert;
            cert.status = cover::Status::Certified;
            cert.epsilon = prop.epsilon;
            cert.assignment = row.assignment;
            cert.net_size = prop.net_size;
            const auto set = covering_to_illumination(config.body, row.placements, cert, rep.epsilon_cover);
            const auto v = verify_illumination(config.body, set, config.rng.child(kIlluminationTag + row.trial),
                                               config.illumination_probes);
            out.illumination = v.status;
            out.sources = set.sources.size();
            out.witness = v.witness;
            if (v.status == IllumStatus::VerifiedByCovering) ++rep.converted_verified;
            if (v.status == IllumStatus::FalsifiedWitness) ++rep.falsified;
        }
        rep.rows.push_back(std::move(out));
    }
    return rep;
}

}  // namespace homcover::illum
