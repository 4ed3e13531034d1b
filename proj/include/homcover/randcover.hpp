#pragma once

// Random homothet covering experiments: draw centers X_i uniform in K - lambda_i K,
// decide whether {X_i + lambda_i K} covers K, and tally verdicts over trials.

#include <optional>
#include <string>
#include <vector>

#include "homcover/covercert.hpp"
#include "homcover/randvol.hpp"

namespace homcover::randcover {

/// (n ln n + n ln ln n + c n) * volume_ratio with natural logarithms.
/// Throws InputError for n < 2.
double threshold_sum(std::size_t n, double volume_ratio, double c);

/// Sum of lambda_i^n.
double power_sum(const std::vector<double>& ratios, std::size_t n);

/// Smallest m with m * lambda^n >= threshold.
std::size_t count_for_threshold(double threshold, double lambda, std::size_t n);

/// Where centers are drawn: K - lambda_i K, or K - K for every ratio.
enum class Domain { KMinusLambdaK, KMinusK };

std::string to_string(Domain d);

struct CoverExperimentConfig {
    CoverExperimentConfig(ConvexBody k, std::vector<double> lambdas)
        : body(std::move(k)), ratios(std::move(lambdas)) {}

    ConvexBody body;
    std::vector<double> ratios;
    std::size_t trials = 1;
    /// Net shrink; nets::default_epsilon(n) when unset.
    std::optional<double> epsilon;
    RngSpec rng;
    /// Vol(K - K) / Vol(K); exact or estimated when unset.
    std::optional<double> volume_ratio;
    std::size_t probes = 10000;
    Domain domain = Domain::KMinusLambdaK;
    /// Keep placements and full verdicts per trial.
    bool keep_details = false;
};

struct TrialRecord {
    std::size_t trial = 0;
    cover::Status verdict = cover::Status::Unknown;
    std::optional<Point> witness;
    std::vector<HomothetPlacement> placements;
    std::vector<cover::Assignment> assignment;
};

struct CoverExperimentReport {
    std::size_t dim = 0;
    std::size_t trials = 0;
    std::size_t certified = 0;
    std::size_t refuted = 0;
    std::size_t unknown = 0;
    /// certified / trials; Unknown counts as a failure.
    double empirical_lower_bound = 0.0;
    /// 1 - e^{-0.3 n}, a reference line only.
    double asymptotic_bound = 0.0;
    double power_sum = 0.0;
    /// threshold_sum(n, volume_ratio, 4).
    double threshold = 0.0;
    bool threshold_satisfied = false;
    double epsilon = 0.0;
    double volume_ratio = 0.0;
    bool volume_ratio_exact = false;
    std::optional<randvol::Interval> volume_ratio_ci;
    /// Some ratio is at most e^{-n}.
    bool ratio_warning = false;
    std::size_t net_size = 0;
    std::vector<TrialRecord> rows;
};

/// Stream for the center of homothet i in a trial, and for the trial's probes.
RngSpec placement_stream(RngSpec rng, std::size_t trial, std::size_t index);
RngSpec probe_stream(RngSpec rng, std::size_t trial);

std::vector<HomothetPlacement> draw_trial_placements(const ConvexBody& body, const std::vector<double>& ratios,
                                                     Domain domain, RngSpec rng, std::size_t trial);

/// Validates ratios, resolves epsilon and the volume ratio.
struct ResolvedExperiment {
    double epsilon = 0.0;
    randvol::RatioEstimate volume_ratio;
};
ResolvedExperiment resolve(const CoverExperimentConfig& config);

/// Deterministic in config.rng. Rethrows RejectionTooSlow with the trial index.
CoverExperimentReport run_cover_experiment(const CoverExperimentConfig& config);

struct NamedBound {
    std::string name;
    double value = 0.0;
};

/// Comparison table of known covering and illumination bounds.
std::vector<NamedBound> reference_bounds(std::size_t n, double volume_ratio, bool symmetric);

}  // namespace homcover::randcover
