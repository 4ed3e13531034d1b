// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "homcover/cli.hpp"
#include "homcover/fnsched.hpp"
#include "homcover/illum.hpp"
#include "homcover/parallel.hpp"
#include "homcover/randcover.hpp"
#include "homcover/serialize.hpp"
#include "support/oracles.hpp"

using namespace homcover;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double oracle_volume(BodyKind kind, int n) {
    switch (kind) {
        case BodyKind::Cube: return std::pow(2.0, n);
        case BodyKind::Simplex: return 1.0 / oracle::factorial(n);
        case BodyKind::CrossPolytope: return std::pow(2.0, n) / oracle::factorial(n);
        case BodyKind::VRep: break;
    }
    return 0.0;
}

randvol::VolumeEstimate mc(const ConvexBody& k, double plus, double minus, RngSpec rng, std::uint64_t samples) {
    return randvol::mc_volume(MinkowskiCombo(k, plus, minus), rng, samples);
}

// Points of `body` covered by no homothet among `probes` uniform samples.
std::size_t uncovered_probes(const ConvexBody& body, const std::vector<HomothetPlacement>& ps, RngSpec rng,
                             std::size_t probes) {
    const cover::HomothetIndex index(body, ps, 0.0);
    const auto pts = randvol::sample_uniform(body, rng, probes);
    std::vector<std::size_t> missed(thread_count(), 0);
    parallel_for(pts.size(), [&](std::size_t b, std::size_t e, std::size_t w) {
        for (std::size_t i = b; i < e; ++i) missed[w] += index.first_containing(pts[i]) ? 0 : 1;
    });
    std::size_t total = 0;
    for (auto m : missed) total += m;
    return total;
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "homcover");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    return cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("homcover_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Outcome volume_oracles() {
    bool ok = true;
    std::string worst;
    int lowest = 100;
    double slowest = 0.0;
    for (BodyKind kind : {BodyKind::Cube, BodyKind::Simplex, BodyKind::CrossPolytope}) {
        for (int n : {2, 3}) {
            const auto t0 = Clock::now();
            const auto body = ConvexBody::special(kind, static_cast<std::size_t>(n));
            const double exact = oracle_volume(kind, n);
            ok = ok && std::abs(randvol::exact_volume(body) - exact) <= 1e-12 * exact;
            int hits = 0;
            for (std::uint64_t r = 0; r < 100; ++r) {
                hits += mc(body, 1.0, 0.0, RngSpec{1001, r}, 100000).covers(exact) ? 1 : 0;
            }
            const double dt = seconds_since(t0);
            slowest = std::max(slowest, dt);
            if (hits < lowest) {
                lowest = hits;
                worst = to_string(kind) + " n=" + std::to_string(n);
            }
            ok = ok && hits >= 93 && dt < 10.0;
        }
    }
    return {ok, fmt("lowest coverage %d/100 (%s), slowest body %.1fs", lowest, worst.c_str(), slowest)};
}

Outcome difference_ratios() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    auto check = [&](const ConvexBody& body, double expected, RngSpec rng) {
        const auto diff = mc(body, 1.0, 1.0, rng.child(1), 400000);
        const auto base = mc(body, 1.0, 0.0, rng.child(2), 400000);
        const double lo = diff.ci95_low / base.ci95_high;
        const double hi = diff.ci95_high / base.ci95_low;
        const bool in = lo <= expected && expected <= hi;
        ok = ok && in;
        detail += fmt("%s%s n=%zu %.3f in [%.3f, %.3f]", detail.empty() ? "" : "; ", to_string(body.kind()).c_str(),
                      body.dim(), expected, lo, hi);
    };
    check(ConvexBody::cube(2), 4.0, RngSpec{2001, 0});
    check(ConvexBody::cube(3), 8.0, RngSpec{2001, 1});
    // Hexagon area over triangle area from the planar hull oracle.
    const std::vector<oracle::P2> tri{{0, 0}, {1, 0}, {0, 1}};
    const double hexagon = oracle::shoelace(oracle::difference_hull(tri, tri));
    check(ConvexBody::simplex(2), hexagon / oracle::shoelace(oracle::hull2d(tri)), RngSpec{2001, 2});
    const double dt = seconds_since(t0);
    return {ok && dt < 30.0, detail + fmt(" (%.1fs)", dt)};
}

Outcome difference_inequality() {
    const auto t0 = Clock::now();
    bool ok = true;
    double worst_slack = std::numeric_limits<double>::infinity();
    int cases = 0;
    for (BodyKind kind : {BodyKind::Cube, BodyKind::Simplex}) {
        for (std::size_t n : {2u, 3u}) {
            const auto body = ConvexBody::special(kind, n);
            const RngSpec rng{3001, n * 10 + static_cast<std::size_t>(kind)};
            const auto full = mc(body, 1.0, 1.0, rng.child(99), 100000);
            for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                const auto part = mc(body, 1.0, lambda, rng.child(static_cast<std::uint64_t>(lambda * 100)), 100000);
                const double coef = std::pow(1.0 + lambda, static_cast<double>(n)) * std::pow(2.0, -static_cast<double>(n));
                const double bound = coef * full.mean;
                const double widths = part.width() + coef * full.width();
                ok = ok && part.mean <= bound + 3.0 * widths;
                worst_slack = std::min(worst_slack, (bound + 3.0 * widths - part.mean) / widths);
                if (lambda == 1.0 || kind == BodyKind::Cube) ok = ok && std::abs(part.mean - bound) <= widths / 2.0;
                ++cases;
            }
        }
    }
    const double dt = seconds_since(t0);
    return {ok && dt < 120.0, fmt("%d cases, least slack %.2f combined widths (%.1fs)", cases, worst_slack, dt)};
}

Outcome certificate_soundness() {
    const auto t0 = Clock::now();
    RandomStream s(RngSpec{4001, 0});
    std::size_t trials = 0;
    std::size_t certified = 0;
    std::size_t refuted = 0;
    std::size_t unknown = 0;
    std::size_t bad = 0;
    for (std::uint64_t config = 0; trials < 500; ++config) {
        const std::size_t n = 2 + config % 2;
        const auto kind = config % 4 < 2 ? BodyKind::Cube : BodyKind::Simplex;
        const auto body = ConvexBody::special(kind, n);
        const double lambda = s.uniform(0.5, 0.95);
        const double vr = *randvol::exact_difference_ratio(body);
        const double c = s.uniform(-5.0, 4.0);
        const double threshold = std::max(1.0, randcover::threshold_sum(n, vr, c));
        randcover::CoverExperimentConfig cfg(body, std::vector<double>(randcover::count_for_threshold(threshold, lambda, n), lambda));
        cfg.trials = 20;
        cfg.epsilon = n == 2 ? 0.02 : 0.05;
        cfg.rng = RngSpec{4002, config};
        cfg.keep_details = true;
        const auto rep = randcover::run_cover_experiment(cfg);
        for (const auto& row : rep.rows) {
            ++trials;
            if (row.verdict == cover::Status::Certified) {
                ++certified;
                bad += uncovered_probes(body, row.placements, cfg.rng.child(1000 + row.trial), 100000) > 0 ? 1 : 0;
            } else if (row.verdict == cover::Status::Refuted) {
                ++refuted;
                bad += cover::check_witness(body, row.placements, *row.witness).empty() ? 0 : 1;
            } else {
                ++unknown;
            }
        }
    }
    const double dt = seconds_since(t0);
    return {bad == 0 && dt < 600.0, fmt("%zu trials: %zu certified, %zu refuted, %zu unknown, %zu unsound (%.1fs)",
                                        trials, certified, refuted, unknown, bad, dt)};
}

Outcome coverage_monotonicity() {
    const auto t0 = Clock::now();
    const auto body = ConvexBody::cube(2);
    const double threshold = randcover::threshold_sum(2, 4.0, 4.0);
    const std::size_t top = randcover::count_for_threshold(threshold, 0.9, 2);
    const std::vector<std::size_t> ms{(top + 3) / 4, (top + 1) / 2, top};
    std::vector<double> frac;
    for (std::size_t m : ms) {
        randcover::CoverExperimentConfig cfg(body, std::vector<double>(m, 0.9));
        cfg.trials = 200;
        cfg.epsilon = 0.02;
        cfg.rng = RngSpec{5001, m};
        frac.push_back(randcover::run_cover_experiment(cfg).empirical_lower_bound);
    }
    bool ok = true;
    for (std::size_t i = 1; i < frac.size(); ++i) {
        const double se = std::sqrt((frac[i] * (1 - frac[i]) + frac[i - 1] * (1 - frac[i - 1])) / 200.0);
        ok = ok && frac[i] >= frac[i - 1] - 2.0 * se;
    }
    return {ok, fmt("m = %zu, %zu, %zu certified %.3f, %.3f, %.3f (%.1fs)", ms[0], ms[1], ms[2], frac[0], frac[1],
                    frac[2], seconds_since(t0))};
}

Outcome net_certification() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& body : {ConvexBody::cube(2), ConvexBody::simplex(2)}) {
        for (double eps : {0.5, 0.25, 0.1}) {
            const auto net = nets::build_net(body, eps);
            std::vector<HomothetPlacement> cells;
            for (std::size_t i = 0; i < net.size(); ++i) cells.push_back({net.points.point(i), eps});
            const auto missed = uncovered_probes(body, cells, RngSpec{6001, net.size()}, 100000);
            ok = ok && missed == 0;
            detail += fmt("%s%s eps=%.2f size %zu vs %.0f", detail.empty() ? "" : "; ", to_string(body.kind()).c_str(), eps,
                          net.size(), net.reference_bound());
            if (missed) detail += fmt(" (%zu uncovered)", missed);
        }
    }
    const double dt = seconds_since(t0);
    return {ok && dt < 60.0, detail + fmt(" (%.1fs)", dt)};
}

Outcome illumination_ground_truth() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (std::size_t n : {2u, 3u}) {
        const auto body = ConvexBody::cube(n);
        std::vector<illum::LightSource> all;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Point p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = (mask >> j & 1) ? 2.0 : -2.0;
            all.emplace_back(body, p);
        }
        const auto full = illum::verify_illumination(body, all, RngSpec{7001, n}, 100000);
        const bool accepted = !full.witness.has_value();
        std::size_t falsified = 0;
        for (std::size_t drop = 0; drop < all.size(); ++drop) {
            auto some = all;
            some.erase(some.begin() + static_cast<std::ptrdiff_t>(drop));
            const auto v = illum::verify_illumination(body, some, RngSpec{7002, n * 100 + drop}, 100000);
            if (v.status == illum::IllumStatus::FalsifiedWitness &&
                illum::check_illumination_witness(body, some, *v.witness).empty()) {
                ++falsified;
            }
        }
        ok = ok && accepted && falsified == all.size();
        detail += fmt("%sn=%zu: %zu sources %s, %zu/%zu subsets falsified", detail.empty() ? "" : "; ", n, all.size(),
                      accepted ? "accepted" : "rejected", falsified, all.size());
    }
    const double dt = seconds_since(t0);
    return {ok && dt < 300.0, detail + fmt(" (%.1fs)", dt)};
}

Outcome illumination_from_coverings() {
    const auto t0 = Clock::now();
    illum::IlluminationExperimentConfig cfg(ConvexBody::cube(2));
    cfg.trials = 50;
    cfg.rng = RngSpec{8001, 0};
    cfg.net_epsilon = 0.02;
    cfg.illumination_probes = 100000;
    const auto rep = illum::run_illumination_experiment(cfg);
    const auto expected_m = static_cast<std::size_t>(std::ceil(randcover::threshold_sum(2, 4.0, 5.0)));
    const double dt = seconds_since(t0);
    const bool ok = rep.m == expected_m && rep.certified > 0 && rep.falsified == 0 &&
                    rep.converted_verified == rep.certified && dt < 600.0;
    return {ok, fmt("m = %zu, %zu/50 certified, %zu converted and verified, %zu witnesses (%.1fs)", rep.m, rep.certified,
                    rep.converted_verified, rep.falsified, dt)};
}

Outcome generalized_cover_end_to_end() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    struct Case {
        const char* name;
        const char* lambda;
        const char* count;
        const char* branch;
    };
    for (const Case& c : {Case{"A", "0.9", "300", "large-ratios"}, Case{"B", "0.02", "80001", "dyadic"}}) {
        const auto dir = scratch(std::string("fn_") + c.name);
        const int code = run_cli({"fn-schedule", "--body", "cube", "--dim", "2", "--lambda", c.lambda, "--count", c.count,
                                  "--mode", "desk", "--seed", "9001", "--out", dir.string()});
        if (code != cli::kExitOk) {
            ok = false;
            detail += fmt("%sbranch %s exit %d", detail.empty() ? "" : "; ", c.name, code);
            continue;
        }
        const auto result = io::read_json_file((dir / "result.json").string());
        const auto verdict = io::verify_certificate_files((dir / "certificate.json").string(), "cube");
        const bool certified = result["verdict"] == "certified";
        ok = ok && certified && verdict.valid && result["branch"] == c.branch;
        detail += fmt("%sbranch %s %s, %s, certificate %s", detail.empty() ? "" : "; ", c.name,
                      result["branch"].get<std::string>().c_str(), result["verdict"].get<std::string>().c_str(),
                      verdict.valid ? "verified" : verdict.detail.c_str());
    }
    const double dt = seconds_since(t0);
    return {ok && dt < 900.0, detail + fmt(" (%.1fs)", dt)};
}

Outcome determinism() {
    const auto t0 = Clock::now();
    const auto cert_dir = scratch("det_cert");
    run_cli({"cover", "--body", "simplex", "--dim", "2", "--lambda", "0.85", "--count", "90", "--seed", "3", "--out",
             cert_dir.string()});
    const std::string cert = (cert_dir / "certificate.json").string();
    const std::vector<std::vector<std::string>> commands{
        {"volume", "--body", "crosspolytope", "--dim", "3", "--lambda", "0.5"},
        {"net", "--body", "simplex", "--dim", "2", "--epsilon", "0.1", "--probes", "20000"},
        {"cover", "--body", "cube", "--dim", "3", "--lambda", "0.9", "--count", "160", "--trials", "5", "--epsilon", "0.05"},
        {"illuminate", "--body", "cube", "--dim", "2", "--trials", "4", "--epsilon", "0.05"},
        {"fn-schedule", "--body", "cube", "--dim", "2", "--lambda", "0.6", "--count", "120"},
        {"verify", "--certificate", cert},
        {"bounds", "--body", "simplex", "--dim", "3"}};
    auto digests = [](const fs::path& dir) {
        const auto manifest = io::read_json_file((dir / "manifest.json").string());
        std::vector<std::string> out;
        for (const auto& f : manifest["files"]) out.push_back(f["sha256"].get<std::string>());
        return out;
    };
    bool ok = true;
    std::size_t matched = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::vector<std::vector<std::string>> runs;
        for (const char* threads : {"1", "3"}) {
            const auto dir = scratch("det_" + std::to_string(i) + "_" + threads);
            auto args = commands[i];
            args.insert(args.end(), {"--seed", "17", "--threads", threads, "--out", dir.string()});
            const int code = run_cli(args);
            runs.push_back(code == cli::kExitOk ? digests(dir) : std::vector<std::string>{});
        }
        const bool same = !runs[0].empty() && runs[0] == runs[1];
        matched += same ? 1 : 0;
        ok = ok && same;
    }
    set_thread_count(std::max(1u, std::thread::hardware_concurrency()));
    return {ok, fmt("%zu/%zu subcommands byte-identical across repeated runs (%.1fs)", matched, commands.size(),
                    seconds_since(t0))};
}

}  // namespace

int main() {
    set_thread_count(std::max(1u, std::thread::hardware_concurrency()));
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"volume oracles", volume_oracles},
        {"difference body ratios", difference_ratios},
        {"K - lambda K volume inequality", difference_inequality},
        {"certificate soundness", certificate_soundness},
        {"coverage monotonicity", coverage_monotonicity},
        {"net certification", net_certification},
        {"illumination ground truth", illumination_ground_truth},
        {"illumination from coverings", illumination_from_coverings},
        {"generalized covering end to end", generalized_cover_end_to_end},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
