#include "homcover/covercert.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "homcover/parallel.hpp"
#include "homcover/randvol.hpp"

namespace homcover::cover {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void validate_placements(std::size_t dim, const std::vector<HomothetPlacement>& placements) {
    for (const auto& p : placements) p.validate(dim);
}

}  // namespace

std::string to_string(Status s) {
    switch (s) {
        case Status::Certified: return "certified";
        case Status::Refuted: return "refuted";
        case Status::Unknown: return "unknown";
    }
    return "unknown";
}

Status status_from_string(const std::string& s) {
    if (s == "certified") return Status::Certified;
    if (s == "refuted") return Status::Refuted;
    if (s == "unknown") return Status::Unknown;
    throw InputError("unknown verdict status '" + s + "'");
}

HomothetIndex::HomothetIndex(const ConvexBody& gauge, const std::vector<HomothetPlacement>& placements,
                             double shrink)
    : gauge_(&gauge), placements_(&placements), shrink_(shrink) {
    const std::size_t n = gauge.dim();
    const Box g = gauge.bounding_box();
    std::vector<Box> boxes;
    for (std::size_t i = 0; i < placements.size(); ++i) {
        const double lam = placements[i].ratio;
        if (shrink > 0.0 && lam <= shrink) continue;
        const double r = std::max(0.0, lam - shrink);
        Box b{Point(n), Point(n)};
        for (std::size_t j = 0; j < n; ++j) {
            b.lo[j] = placements[i].center[j] + r * g.lo[j];
            b.hi[j] = placements[i].center[j] + r * g.hi[j];
        }
        active_.push_back(i);
        boxes.push_back(std::move(b));
    }
    if (active_.empty()) return;

    origin_.assign(n, std::numeric_limits<double>::infinity());
    Point top(n, -std::numeric_limits<double>::infinity());
    for (const auto& b : boxes) {
        for (std::size_t j = 0; j < n; ++j) {
            origin_[j] = std::min(origin_[j], b.lo[j]);
            top[j] = std::max(top[j], b.hi[j]);
        }
    }
    const double pad = kMembershipTolerance * std::max(1.0, gauge.extent()) * 4.0;
    for (std::size_t j = 0; j < n; ++j) {
        origin_[j] -= pad;
        top[j] += pad;
    }

    const double cap = std::max(4096.0, 16.0 * static_cast<double>(active_.size()));
    cell_.resize(n);
    dims_.resize(n);
    double total = 1.0;
    std::vector<double> widths(boxes.size());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < boxes.size(); ++i) widths[i] = boxes[i].hi[j] - boxes[i].lo[j];
        std::nth_element(widths.begin(), widths.begin() + static_cast<std::ptrdiff_t>(widths.size() / 2), widths.end());
        const double extent = top[j] - origin_[j];
        const double w = std::max(widths[widths.size() / 2], extent * 1e-6);
        dims_[j] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(extent / w)));
        total *= static_cast<double>(dims_[j]);
    }
    if (total > cap) {
        const double shrink_by = std::pow(cap / total, 1.0 / static_cast<double>(n));
        for (auto& d : dims_) d = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(d * shrink_by)));
    }
    std::size_t cells = 1;
    for (std::size_t j = 0; j < n; ++j) {
        cell_[j] = (top[j] - origin_[j]) / static_cast<double>(dims_[j]);
        cells *= dims_[j];
    }
    buckets_.resize(cells);

    std::vector<std::size_t> lo(n), hi(n), cur(n);
    for (std::size_t a = 0; a < boxes.size(); ++a) {
        for (std::size_t j = 0; j < n; ++j) {
            auto clampi = [&](double v) {
                const double t = std::floor((v - origin_[j]) / cell_[j]);
                return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(dims_[j] - 1)));
            };
            lo[j] = clampi(boxes[a].lo[j] - pad);
            hi[j] = clampi(boxes[a].hi[j] + pad);
        }
        cur = lo;
        for (;;) {
            std::size_t id = 0;
            std::size_t stride = 1;
            for (std::size_t j = 0; j < n; ++j) {
                id += cur[j] * stride;
                stride *= dims_[j];
            }
            buckets_[id].push_back(static_cast<std::uint32_t>(a));
            std::size_t j = 0;
            while (j < n && cur[j] == hi[j]) {
                cur[j] = lo[j];
                ++j;
            }
            if (j == n) break;
            ++cur[j];
        }
    }
}

std::optional<std::size_t> HomothetIndex::first_containing(ConstVec x) const {
    if (active_.empty()) return std::nullopt;
    std::size_t id = 0;
    std::size_t stride = 1;
    for (std::size_t j = 0; j < dims_.size(); ++j) {
        const double t = std::floor((x[j] - origin_[j]) / cell_[j]);
        if (t < 0.0 || t >= static_cast<double>(dims_[j])) return std::nullopt;
        id += static_cast<std::size_t>(t) * stride;
        stride *= dims_[j];
    }
    for (std::uint32_t a : buckets_[id]) {
        const auto& p = (*placements_)[active_[a]];
        const double r = std::max(0.0, p.ratio - shrink_);
        if (homothet_contains(*gauge_, p.center, r, x)) return active_[a];
    }
    return std::nullopt;
}

CoverageVerdict certify_cover(const ConvexBody& target, const ConvexBody& gauge,
                              const std::vector<HomothetPlacement>& placements, const nets::EpsNet& net) {
    if (placements.empty()) throw InputError("certify_cover: placement list is empty");
    if (target.dim() != gauge.dim() || net.points.dim() != target.dim()) {
        throw InputError("certify_cover: dimension mismatch");
    }
    validate_placements(gauge.dim(), placements);
    CoverageVerdict v;
    v.epsilon = net.epsilon;
    v.net_size = net.size();
    v.net_spacing = net.grid_spacing;

    const HomothetIndex index(gauge, placements, net.epsilon);
    std::vector<std::size_t> owner(net.size(), kNone);
    std::atomic<bool> failed{false};
    parallel_for(
        net.size(),
        [&](std::size_t begin, std::size_t end, std::size_t) {
            for (std::size_t i = begin; i < end && !failed.load(std::memory_order_relaxed); ++i) {
                const auto hit = index.first_containing(net.points[i]);
                if (!hit) {
                    failed = true;
                    return;
                }
                owner[i] = *hit;
            }
        },
        256);
    if (failed) return v;
    v.status = Status::Certified;
    v.assignment.reserve(owner.size());
    for (std::size_t i = 0; i < owner.size(); ++i) v.assignment.push_back({i, owner[i]});
    return v;
}

CoverageVerdict certify_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                              const nets::EpsNet& net) {
    return certify_cover(body, body, placements, net);
}

CoverageVerdict certify_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                              double epsilon) {
    if (placements.empty()) throw InputError("certify_cover: placement list is empty");
    return certify_cover(body, placements, nets::build_net(body, epsilon));
}

CoverageVerdict refute_cover(const ConvexBody& target, const ConvexBody& gauge,
                             const std::vector<HomothetPlacement>& placements, RngSpec rng, std::size_t probes) {
    if (probes == 0) throw InputError("refute_cover: probes must be >= 1");
    validate_placements(gauge.dim(), placements);
    const PointSet pts = randvol::sample_uniform(target, rng, probes);
    CoverageVerdict v;
    const HomothetIndex index(gauge, placements, 0.0);
    std::atomic<std::size_t> first{kNone};
    parallel_for(
        pts.size(),
        [&](std::size_t begin, std::size_t end, std::size_t) {
            for (std::size_t i = begin; i < end && i < first.load(std::memory_order_relaxed); ++i) {
                if (!index.first_containing(pts[i])) {
                    std::size_t cur = first.load();
                    while (i < cur && !first.compare_exchange_weak(cur, i)) {
                    }
                    return;
                }
            }
        },
        256);
    if (first.load() != kNone) {
        v.status = Status::Refuted;
        v.witness = pts.point(first.load());
        v.witness_probe = first.load();
    }
    return v;
}

CoverageVerdict refute_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                             RngSpec rng, std::size_t probes) {
    return refute_cover(body, body, placements, rng, probes);
}

CoverageVerdict decide_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                             const nets::EpsNet& net, RngSpec rng, std::size_t probes) {
    CoverageVerdict v = certify_cover(body, placements, net);
    if (v.status == Status::Certified) return v;
    CoverageVerdict r = refute_cover(body, placements, rng, probes);
    r.epsilon = v.epsilon;
    r.net_size = v.net_size;
    r.net_spacing = v.net_spacing;
    return r;
}

CoverageVerdict decide_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                             double epsilon, RngSpec rng, std::size_t probes) {
    if (placements.empty()) throw InputError("decide_cover: placement list is empty");
    return decide_cover(body, placements, nets::build_net(body, epsilon), rng, probes);
}

std::string check_assignment(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                             const nets::EpsNet& net, const std::vector<Assignment>& assignment) {
    if (assignment.size() != net.size()) {
        return "assignment covers " + std::to_string(assignment.size()) + " net points, net has " +
               std::to_string(net.size());
    }
    for (std::size_t k = 0; k < assignment.size(); ++k) {
        const auto& a = assignment[k];
        if (a.net_index != k) return "assignment entry " + std::to_string(k) + " is out of order";
        if (a.homothet_index >= placements.size()) {
            return "assignment entry " + std::to_string(k) + " names a missing homothet";
        }
        const auto& p = placements[a.homothet_index];
        if (p.ratio <= net.epsilon) {
            return "homothet " + std::to_string(a.homothet_index) + " has no shrunken copy";
        }
        if (!homothet_contains(body, p.center, p.ratio - net.epsilon, net.points[k])) {
            return "net point " + std::to_string(k) + " is not in shrunken homothet " +
                   std::to_string(a.homothet_index);
        }
    }
    return {};
}

std::string check_witness(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                          ConstVec witness) {
    if (witness.size() != body.dim()) return "witness has the wrong dimension";
    if (!body.contains(witness)) return "witness lies outside the body";
    for (std::size_t i = 0; i < placements.size(); ++i) {
        if (homothet_contains(body, placements[i].center, placements[i].ratio, witness)) {
            return "witness lies in homothet " + std::to_string(i);
        }
    }
    return {};
}

}  // namespace homcover::cover
