#pragma once

// Deciding whether homothets x_i + lambda_i K cover a target. A cover is
// certified when every net point lies in some x_i + (lambda_i - eps)_+ K, and
// refuted by a sampled point of the target outside every homothet.

#include <optional>
#include <string>

#include "homcover/bodies.hpp"
#include "homcover/nets.hpp"
#include "homcover/rng.hpp"

namespace homcover::cover {

enum class Status { Certified, Refuted, Unknown };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

struct Assignment {
    std::size_t net_index = 0;
    std::size_t homothet_index = 0;

    bool operator==(const Assignment&) const = default;
};

struct CoverageVerdict {
    Status status = Status::Unknown;
    double epsilon = 0.0;
    std::optional<Point> witness;
    /// Index of the refuting probe in the sampled sequence.
    std::optional<std::size_t> witness_probe;
    /// One entry per net point, in net order, when Certified.
    std::vector<Assignment> assignment;
    std::size_t net_size = 0;
    double net_spacing = 0.0;
};

/// Bucket grid over the bounding boxes of gauge homothets c_i + r_i G, answering
/// "lowest index whose homothet contains x".
class HomothetIndex {
public:
    /// Ratios are lambda_i - shrink; homothets with ratio <= 0 are skipped when
    /// shrink > 0 and kept as single points when shrink == 0.
    HomothetIndex(const ConvexBody& gauge, const std::vector<HomothetPlacement>& placements, double shrink);

    std::optional<std::size_t> first_containing(ConstVec x) const;

private:
    const ConvexBody* gauge_;
    const std::vector<HomothetPlacement>* placements_;
    double shrink_;
    std::vector<std::size_t> active_;
    Point origin_;
    Point cell_;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<std::uint32_t>> buckets_;
};

/// Never returns Refuted. Throws InputError on an empty placement list.
CoverageVerdict certify_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                              double epsilon);
/// Reuses a prebuilt net of `body`; the net's epsilon is the shrink amount.
CoverageVerdict certify_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                              const nets::EpsNet& net);
/// Target covered by gauge homothets, with a net of the target in the gauge.
CoverageVerdict certify_cover(const ConvexBody& target, const ConvexBody& gauge,
                              const std::vector<HomothetPlacement>& placements, const nets::EpsNet& net);

/// Samples `probes` uniform points of the body and reports the first one outside
/// every homothet. Never returns Certified.
CoverageVerdict refute_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                             RngSpec rng, std::size_t probes);
CoverageVerdict refute_cover(const ConvexBody& target, const ConvexBody& gauge,
                             const std::vector<HomothetPlacement>& placements, RngSpec rng, std::size_t probes);

/// certify, then refute if the certificate fails.
CoverageVerdict decide_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                             double epsilon, RngSpec rng, std::size_t probes);
CoverageVerdict decide_cover(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                             const nets::EpsNet& net, RngSpec rng, std::size_t probes);

/// Replays a certificate: every net point assigned exactly once to a homothet
/// whose shrunken copy contains it. Returns an empty string when valid,
/// otherwise the first failure.
std::string check_assignment(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                             const nets::EpsNet& net, const std::vector<Assignment>& assignment);

/// Replays a witness: inside the body and outside every homothet.
std::string check_witness(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                          ConstVec witness);

}  // namespace homcover::cover
