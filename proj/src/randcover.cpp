#include "homcover/randcover.hpp"

#include <cmath>

namespace homcover::randcover {

namespace {

// Child tags of the experiment stream. Trial streams use 2t and 2t + 1.
constexpr std::uint64_t kVolumeTag = 0xffff'ffff'ffff'fff0ULL;

double binomial(std::size_t n, std::size_t k) {
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

}  // namespace

double threshold_sum(std::size_t n, double volume_ratio, double c) {
    if (n < 2) throw InputError("threshold_sum: n must be >= 2");
    const double dn = static_cast<double>(n);
    return (dn * std::log(dn) + dn * std::log(std::log(dn)) + c * dn) * volume_ratio;
}

double power_sum(const std::vector<double>& ratios, std::size_t n) {
    double s = 0.0;
    for (double r : ratios) s += std::pow(r, static_cast<double>(n));
    return s;
}

std::size_t count_for_threshold(double threshold, double lambda, std::size_t n) {
    if (!(lambda > 0.0)) throw InputError("count_for_threshold: lambda must be positive");
    const double per = std::pow(lambda, static_cast<double>(n));
    auto m = static_cast<std::size_t>(std::max(0.0, std::ceil(threshold / per)));
    // Guard against the ceiling landing one short after rounding.
    while (static_cast<double>(m) * per < threshold) ++m;
    return m;
}

std::string to_string(Domain d) { return d == Domain::KMinusK ? "k-minus-k" : "k-minus-lambda-k"; }

RngSpec placement_stream(RngSpec rng, std::size_t trial, std::size_t index) {
    return rng.child(2 * static_cast<std::uint64_t>(trial)).child(index);
}

RngSpec probe_stream(RngSpec rng, std::size_t trial) { return rng.child(2 * static_cast<std::uint64_t>(trial) + 1); }

std::vector<HomothetPlacement> draw_trial_placements(const ConvexBody& body, const std::vector<double>& ratios,
                                                     Domain domain, RngSpec rng, std::size_t trial) {
    std::vector<HomothetPlacement> out;
    out.reserve(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double minus = domain == Domain::KMinusK ? 1.0 : ratios[i];
        const MinkowskiCombo combo(body, 1.0, minus);
        const auto pts = randvol::sample_uniform(combo, placement_stream(rng, trial, i), 1);
        out.push_back({pts.point(0), ratios[i]});
    }
    return out;
}

ResolvedExperiment resolve(const CoverExperimentConfig& config) {
    const std::size_t n = config.body.dim();
    if (n < 2) throw InputError("cover experiment: dimension must be >= 2");
    if (config.ratios.empty()) throw InputError("cover experiment: no ratios");
    if (config.trials == 0) throw InputError("cover experiment: trials must be >= 1");
    if (config.probes == 0) throw InputError("cover experiment: probes must be >= 1");
    for (double r : config.ratios) {
        if (!(r > 0.0 && r < 1.0)) throw InputError("cover experiment: every ratio must lie in (0, 1)");
    }
    ResolvedExperiment out;
    out.epsilon = config.epsilon.value_or(nets::default_epsilon(n));
    if (!(out.epsilon > 0.0 && out.epsilon < 1.0)) throw InputError("cover experiment: epsilon must lie in (0, 1)");
    if (config.volume_ratio) {
        if (!(*config.volume_ratio > 0.0)) throw InputError("cover experiment: volume ratio must be positive");
        out.volume_ratio = {*config.volume_ratio, true, {*config.volume_ratio, *config.volume_ratio}};
    } else {
        out.volume_ratio = randvol::difference_ratio(config.body, config.rng.child(kVolumeTag));
    }
    return out;
}

CoverExperimentReport run_cover_experiment(const CoverExperimentConfig& config) {
    const ResolvedExperiment setup = resolve(config);
    const std::size_t n = config.body.dim();
    const double dn = static_cast<double>(n);

    CoverExperimentReport rep;
    rep.dim = n;
    rep.trials = config.trials;
    rep.epsilon = setup.epsilon;
    rep.volume_ratio = setup.volume_ratio.value;
    rep.volume_ratio_exact = setup.volume_ratio.exact;
    if (!setup.volume_ratio.exact) rep.volume_ratio_ci = setup.volume_ratio.ci95;
    rep.asymptotic_bound = 1.0 - std::exp(-0.3 * dn);
    rep.power_sum = power_sum(config.ratios, n);
    rep.threshold = threshold_sum(n, rep.volume_ratio, 4.0);
    rep.threshold_satisfied = rep.power_sum >= rep.threshold;
    for (double r : config.ratios) rep.ratio_warning = rep.ratio_warning || r <= std::exp(-dn);

    const auto net = nets::build_net(config.body, setup.epsilon);
    rep.net_size = net.size();

    for (std::size_t t = 0; t < config.trials; ++t) {
        TrialRecord row;
        row.trial = t;
        try {
            auto ps = draw_trial_placements(config.body, config.ratios, config.domain, config.rng, t);
            auto v = cover::decide_cover(config.body, ps, net, probe_stream(config.rng, t), config.probes);
            row.verdict = v.status;
            row.witness = std::move(v.witness);
            if (config.keep_details) {
                row.placements = std::move(ps);
                row.assignment = std::move(v.assignment);
            }
        } catch (const RejectionTooSlow& e) {
            throw RejectionTooSlow("trial " + std::to_string(t) + ": " + e.what());
        }
        switch (row.verdict) {
            case cover::Status::Certified: ++rep.certified; break;
            case cover::Status::Refuted: ++rep.refuted; break;
            case cover::Status::Unknown: ++rep.unknown; break;
        }
        rep.rows.push_back(std::move(row));
    }
    rep.empirical_lower_bound = static_cast<double>(rep.certified) / static_cast<double>(rep.trials);
    return rep;
}

std::vector<NamedBound> reference_bounds(std::size_t n, double volume_ratio, bool symmetric) {
    if (n < 2) throw InputError("reference_bounds: n must be >= 2");
    const double dn = static_cast<double>(n);
    const double t5 = threshold_sum(n, 1.0, 5.0);
    const double central = binomial(2 * n, n);
    return {
        {"illumination_threshold", t5 * volume_ratio},
        {"central_binomial", central},
        {"binomial_threshold", t5 * central},
        {"binomial_asymptotic", central * dn * std::log(dn)},
        {"cube_covering_value", std::pow(2.0, dn) - 1.0},
        {"translative_general", std::pow(dn + 1.0, dn) - 1.0},
        {"generalized_illumination", std::pow(symmetric ? 3.0 : 6.0, dn)},
        {"generalized_covering_count", std::ceil(t5 * volume_ratio)},
    };
}

}  // namespace homcover::randcover
