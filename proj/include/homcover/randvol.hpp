#pragma once

// Uniform sampling in bodies and Minkowski combinations by rejection from the
// bounding box, and hit-or-miss volume estimates with Wilson score intervals.

#include <cstdint>
#include <optional>

#include "homcover/bodies.hpp"
#include "homcover/rng.hpp"

namespace homcover::randvol {

inline constexpr std::size_t kMaxRejectionDim = 6;
inline constexpr double kMinAcceptance = 1e-6;
/// Draws made before the acceptance floor is enforced.
inline constexpr std::uint64_t kProbeDraws = std::uint64_t{1} << 20;
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kZ95);

struct VolumeEstimate {
    double mean = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    double box_volume = 0.0;

    double width() const { return ci95_high - ci95_low; }
    bool covers(double v) const { return ci95_low <= v && v <= ci95_high; }
};

/// i.i.d. uniform points of the combo. The stream is consumed sequentially,
/// dim words per candidate. Throws RejectionTooSlow above kMaxRejectionDim or
/// when acceptance stays below kMinAcceptance after kProbeDraws candidates.
PointSet sample_uniform(const MinkowskiCombo& combo, RngSpec rng, std::size_t count);
PointSet sample_uniform(const ConvexBody& body, RngSpec rng, std::size_t count);

/// Box volume times hit fraction. Sample i reads words [i*dim, (i+1)*dim), so the
/// result does not depend on how the work is split across threads.
VolumeEstimate mc_volume(const MinkowskiCombo& combo, RngSpec rng, std::uint64_t samples);

/// Closed forms for the special bodies scaled by `scale`; Unsupported for VRep.
double exact_volume(BodyKind kind, std::size_t dim, double scale = 1.0);
double exact_volume(const ConvexBody& body, double scale = 1.0);

/// Vol(K - K) / Vol(K) when known in closed form: 2^n for centrally symmetric
/// bodies, C(2n, n) for the simplex.
std::optional<double> exact_difference_ratio(const ConvexBody& body);

struct RatioEstimate {
    double value = 0.0;
    bool exact = false;
    /// Propagated from the two volume intervals when estimated.
    Interval ci95;
};

/// Exact when available, otherwise the ratio of two Monte Carlo estimates.
RatioEstimate difference_ratio(const ConvexBody& body, RngSpec rng, std::uint64_t samples = 200000);

/// `count` points uniform on the unit sphere, recentered at their centroid.
ConvexBody random_vrep(std::size_t dim, std::size_t count, RngSpec rng);

}  // namespace homcover::randvol
