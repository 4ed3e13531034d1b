#pragma once

// Generalized coverings by homothets of prescribed ratios. Large ratios are
// placed at random; small ratios are grouped dyadically, each group covers one
// cube of a dyadic tiling of K, and each cube is covered by random placement
// followed by patching the uncovered points.

#include <optional>
#include <string>
#include <vector>

#include "homcover/covercert.hpp"

namespace homcover::fnsched {

enum class Mode { Exact, Desk };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// Desk mode replaces n ln n + n ln ln n + c n by scale * (that value) / (its c = 5 value).
inline constexpr double kDeskScale = 8.0;
/// Final net shrink as a fraction of the smallest ratio in play.
inline constexpr double kNetFraction = 0.1;
/// Slack kept between the patch separation and the certifying shrink.
inline constexpr double kPatchSlack = 0.99;

struct Thresholds {
    double t4 = 0.0;
    double t5 = 0.0;
    double t6 = 0.0;
};

Thresholds thresholds(std::size_t n, Mode mode, double scale = kDeskScale);

struct RatioSequence {
    std::vector<double> ratios;

    double power_sum(std::size_t n) const;
};

/// Ratios at or above n^-5 are placed at random; the rest enter dyadic classes.
double large_ratio_cutoff(std::size_t n);

/// k with lambda n^5 in (2^-k, 2^-k+1].
int dyadic_class(double lambda, std::size_t n);

struct DyadicClass {
    int k = 0;
    std::vector<std::size_t> indices;
    /// Number of partitions the class volume pays for.
    std::size_t budget = 0;
    std::vector<std::vector<std::size_t>> partitions;
};

/// One cube of the dyadic refinement with the partition assigned to cover it.
struct CubeAssignment {
    Point center;
    double half_side = 0.0;
    int k = 0;
    std::size_t class_index = 0;
    std::size_t partition = 0;
};

struct DyadicPlan {
    std::vector<std::size_t> large;
    std::vector<DyadicClass> classes;
    /// Indices of classes with no partition and partition leftovers.
    std::vector<std::size_t> remainder;
    std::vector<CubeAssignment> cubes;
    /// Refinement cubes left without a partition.
    std::size_t unassigned = 0;
};

/// Volume of the body the ratios apply to (after normalization) sets the
/// per-index volumes. Partitions are first-fit over descending ratio.
DyadicPlan dyadic_plan(const RatioSequence& seq, std::size_t n, const Thresholds& t, double body_volume);

/// Refines the tiling cubes (half side n^-3/2) dyadically and hands each
/// partition one cube of its class size, coarsest classes first.
void assign_cubes(DyadicPlan& plan, const std::vector<Point>& tiling_centers, std::size_t n);

enum class Phase { Random, Patch, LargeRatios };

std::string to_string(Phase p);

struct PlacedHomothet {
    std::size_t index = 0;
    Point center;
    double ratio = 0.0;
    Phase phase = Phase::Random;
};

struct CoveringConstruction {
    std::vector<PlacedHomothet> placements;

    std::vector<HomothetPlacement> homothets() const;
};

/// Covering L B_inf by homothets mu_i K' of ratios in [1/2, 1].
struct CubeCoverInput {
    CubeCoverInput(ConvexBody k, double half, std::vector<double> mus, Thresholds t)
        : body(std::move(k)), half_side(half), ratios(std::move(mus)), thresholds(t) {}

    ConvexBody body;
    double half_side = 0.0;
    std::vector<double> ratios;
    Thresholds thresholds;
    /// Shrink used to call a probe covered.
    double epsilon = 0.05;
    RngSpec rng;
    /// Vol(K'); exact or estimated when unset.
    std::optional<double> body_volume;
};

struct CubeCoverStats {
    std::size_t prefix = 0;
    std::size_t uncovered = 0;
    std::size_t patch_points = 0;
    std::size_t unused = 0;
    double separation = 0.0;
    /// Largest t with -t K' in K'.
    double symmetry = 0.0;
    bool symmetric_inclusion = false;
    bool inside_unit_cube = false;
};

struct CubePlacement {
    CoveringConstruction construction;
    CubeCoverStats stats;
};

/// Largest t with -t K in K; zero unless the origin is interior.
double symmetry_ratio(const ConvexBody& body);

/// Random prefix in L B_inf - 2K', then a maximal separated subset of the
/// uncovered probes receives the remaining ratios. Indices are local.
/// Throws PatchDeficit when the remaining ratios are too few.
CubePlacement place_in_cube(const CubeCoverInput& in, const PointSet& probes);

/// Separation used by the patch phase: every uncovered probe lies within
/// delta (K' - K') of a patch point, and delta (K' - K') sits in (mu - eps) K'.
double patch_separation(std::size_t n, double symmetry, double min_ratio, double epsilon);

struct CubeCoverResult {
    CoveringConstruction construction;
    CubeCoverStats stats;
    cover::CoverageVerdict verdict;
};

/// Standalone cube cover certified on its own net of L B_inf in the gauge of K'.
CubeCoverResult cover_cube(const CubeCoverInput& in);

struct Normalization {
    /// Normalized body is scale * (K - shift).
    Point shift;
    double scale = 1.0;
    bool unit_cube_inside = false;
    bool inside_outer_cube = false;
};

/// Vertex centroid to the origin, then the smallest scale putting B_inf inside,
/// capped so the body stays in n^{3/2} B_inf.
Normalization normalize(const ConvexBody& body);

enum class Branch { LargeRatios, Dyadic };

std::string to_string(Branch b);

struct GeneralizedCoverConfig {
    GeneralizedCoverConfig(ConvexBody k, std::vector<double> lambdas) : body(std::move(k)), seq{std::move(lambdas)} {}

    ConvexBody body;
    RatioSequence seq;
    Mode mode = Mode::Desk;
    double scale = kDeskScale;
    RngSpec rng;
    std::size_t probes = 10000;
    /// Overrides the final net shrink.
    std::optional<double> epsilon;
    std::optional<double> volume_ratio;
};

struct GeneralizedCoverReport {
    Branch branch = Branch::LargeRatios;
    Mode mode = Mode::Desk;
    Thresholds thresholds;
    double volume_ratio = 0.0;
    double power_sum = 0.0;
    double large_power_sum = 0.0;
    bool precondition = false;
    DyadicPlan plan;
    Normalization normalization;
    double symmetry = 0.0;
    bool symmetric_inclusion = false;
    std::size_t tiling_cubes = 0;
    std::size_t patch_points = 0;
    std::size_t max_patch_points = 0;
    std::size_t orphan_probes = 0;
    double epsilon = 0.0;
    std::size_t net_size = 0;
    CoveringConstruction construction;
    cover::CoverageVerdict verdict;
};

/// Branch A when the large ratios meet the 4n threshold, branch B otherwise.
/// The verdict comes from covercert on the original body.
GeneralizedCoverReport run_generalized_cover(const GeneralizedCoverConfig& config);

}  // namespace homcover::fnsched
