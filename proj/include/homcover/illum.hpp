#pragma once

// Illumination of convex bodies by point light sources: a source p outside K
// lights a boundary point x when the line through p and x meets int K at a
// point not between p and x.

#include <optional>
#include <string>
#include <vector>

#include "homcover/covercert.hpp"
#include "homcover/randcover.hpp"

namespace homcover::illum {

/// Allowed distance from the boundary for points passed to illuminates.
inline constexpr double kBoundaryTolerance = 1e-7;
/// R = 1 / eps + kRadiusMargin in the covering conversion.
inline constexpr double kRadiusMargin = 0.5;

class LightSource {
public:
    /// Throws InputError when the position lies in the closed body.
    LightSource(const ConvexBody& body, Point position);

    const Point& position() const { return position_; }

private:
    Point position_;
};

/// q(s) = p + s (x - p) meets int K for some s > 1 or s < 0. Interior means
/// depth above kInteriorMargin, so grazing lines do not count. Throws
/// InputError when x is farther than kBoundaryTolerance from the boundary.
bool illuminates(const LightSource& source, ConstVec boundary_point, const ConvexBody& body);

/// Boundary point hit by the ray from the Chebyshev center in `direction`.
Point boundary_point(const ConvexBody& body, ConstVec direction);

/// Sources built from a certified cover by homothets x_i + (1 - eps) K.
struct IlluminationSet {
    std::vector<LightSource> sources;
    double r_used = 0.0;
    double epsilon_cover = 0.0;
    /// Indices of placements whose scaled center fell inside K; those homothets
    /// miss the boundary and need no source.
    std::vector<std::size_t> dropped;
    std::vector<HomothetPlacement> placements;
    cover::CoverageVerdict certificate;
};

/// Throws ConversionRequiresCertificate unless `certificate` is Certified, and
/// InputError unless every ratio equals 1 - epsilon_cover with epsilon_cover in (0, 1).
IlluminationSet covering_to_illumination(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                                         const cover::CoverageVerdict& certificate, double epsilon_cover);

enum class IllumStatus { VerifiedByCovering, FalsifiedWitness, Unknown };

std::string to_string(IllumStatus s);
IllumStatus illum_status_from_string(const std::string& s);

struct IlluminationVerdict {
    IllumStatus status = IllumStatus::Unknown;
    std::optional<Point> witness;
    std::optional<std::size_t> witness_probe;
    std::optional<double> r_used;
    std::size_t probes = 0;
};

/// Probes the body's vertices first, then boundary points in uniform random
/// directions, until `probes` points are tested. Reports the lowest-index
/// unlit probe. Without a certificate the best outcome is Unknown.
IlluminationVerdict verify_illumination(const ConvexBody& body, const std::vector<LightSource>& sources, RngSpec rng,
                                        std::size_t probes);
IlluminationVerdict verify_illumination(const ConvexBody& body, const IlluminationSet& set, RngSpec rng,
                                        std::size_t probes);

/// Replays a witness: on the boundary and lit by no source.
std::string check_illumination_witness(const ConvexBody& body, const std::vector<LightSource>& sources,
                                       ConstVec witness);

struct IlluminationExperimentConfig {
    explicit IlluminationExperimentConfig(ConvexBody k) : body(std::move(k)) {}

    ConvexBody body;
    std::size_t trials = 1;
    RngSpec rng;
    /// Net shrink for the cover certificate.
    double net_epsilon = 0.02;
    std::size_t cover_probes = 10000;
    std::size_t illumination_probes = 10000;
    std::optional<double> volume_ratio;
};

struct IlluminationTrialRow {
    std::size_t trial = 0;
    cover::Status cover = cover::Status::Unknown;
    std::optional<IllumStatus> illumination;
    std::size_t sources = 0;
    std::optional<Point> witness;
};

struct IlluminationExperimentReport {
    std::size_t dim = 0;
    std::size_t m = 0;
    double epsilon_cover = 0.0;
    double r_used = 0.0;
    double volume_ratio = 0.0;
    bool volume_ratio_exact = false;
    std::size_t certified = 0;
    std::size_t converted_verified = 0;
    std::size_t falsified = 0;
    std::vector<IlluminationTrialRow> rows;
};

/// m from the 5n threshold and eps from m (1 - eps)^n = the 4n threshold.
std::pair<std::size_t, double> illumination_parameters(std::size_t n, double volume_ratio);

/// The cover experiment config run_illumination_experiment uses for its trials.
randcover::CoverExperimentConfig illumination_cover_config(const IlluminationExperimentConfig& config);

/// Centers uniform in K - K with ratios 1 - eps, certified, converted, verified.
IlluminationExperimentReport run_illumination_experiment(const IlluminationExperimentConfig& config);

}  // namespace homcover::illum
