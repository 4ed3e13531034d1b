#include "homcover/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "CLI11.hpp"

#include "homcover/parallel.hpp"
#include "homcover/serialize.hpp"

namespace homcover::cli {

namespace {

using io::Json;

constexpr std::uint64_t kCertificateTag = 0x5000'0000'0000'0001ULL;
constexpr double kCoverEpsilon = 0.02;

struct Common {
    std::string body = "cube";
    std::size_t dim = 2;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    std::string out;
};

struct RatioArgs {
    double lambda = 0.0;
    std::size_t count = 0;
    std::string file;

    std::vector<double> resolve() const {
        if (!file.empty()) return io::read_ratios(file);
        if (count == 0) throw InputError("give --lambda with --count, or --ratios");
        return std::vector<double>(count, lambda);
    }
};

struct Output {
    Json result;
    std::vector<std::pair<std::string, std::string>> files;
    std::string summary;
    /// Print the summary instead of the JSON when no --out is given.
    bool summary_on_stdout = false;
    int code = kExitOk;
};

void add_common(CLI::App* sub, Common& c, bool body = true) {
    if (body) {
        sub->add_option("--body", c.body, "body name (cube, simplex, crosspolytope) or body JSON file")
            ->capture_default_str();
        sub->add_option("--dim", c.dim, "dimension for named bodies")->capture_default_str()->check(CLI::Range(1, 12));
    }
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads (0: environment or hardware)");
    sub->add_option("--out", c.out, "output directory for result.json, CSV and manifest.json");
}

void add_ratios(CLI::App* sub, RatioArgs& r) {
    auto* lambda = sub->add_option("--lambda", r.lambda, "common ratio")->check(CLI::Range(0.0, 1.0));
    auto* count = sub->add_option("--count", r.count, "number of homothets");
    auto* file = sub->add_option("--ratios", r.file, "ratio file: JSON array or whitespace-separated");
    file->excludes(lambda)->excludes(count);
    count->needs(lambda);
}

Json config_echo(const CLI::App* sub) {
    Json cfg = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
        const auto& name = opt->get_lnames()[0];
        if (opt->count() > 0) {
            const auto& r = opt->results();
            cfg[name] = r.size() == 1 ? Json(r[0]) : Json(r);
        } else if (!opt->get_default_str().empty()) {
            cfg[name] = opt->get_default_str();
        }
    }
    return cfg;
}

void apply_threads(std::size_t flag) {
    std::size_t n = flag;
    if (n == 0) {
        if (const char* env = std::getenv(kThreadsEnv)) {
            try {
                n = static_cast<std::size_t>(std::stoul(env));
            } catch (const std::exception&) {
                throw InputError(std::string(kThreadsEnv) + " must be a positive integer");
            }
        }
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    set_thread_count(n);
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot write '" + p.string() + "'");
    f << bytes;
}

void emit(const Output& o, const Common& c, const std::string& command, const Json& config, double seconds,
          std::ostream& out) {
    if (c.out.empty()) {
        out << (o.summary_on_stdout ? o.summary : o.result.dump(2)) << "\n";
        return;
    }
    const std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);
    Json digests = Json::array();
    auto put = [&](const std::string& name, const std::string& bytes) {
        write_file(dir / name, bytes);
        digests.push_back({{"file", name}, {"sha256", io::sha256_hex(bytes)}});
    };
    put("result.json", o.result.dump(2) + "\n");
    for (const auto& [name, bytes] : o.files) put(name, bytes);
    const Json manifest{{"schemaVersion", io::kSchemaVersion},
                        {"command", command},
                        {"config", config},
                        {"seed", c.seed},
                        {"version", HOMCOVER_VERSION},
                        {"threads", thread_count()},
                        {"durationSeconds", seconds},
                        {"files", std::move(digests)}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    if (!o.summary.empty()) out << o.summary << "\n";
}

Output run_volume(const Common& c, std::uint64_t samples, double lambda) {
    const auto body = io::load_body(c.body, c.dim);
    const RngSpec rng{c.seed, 0};
    Output o;
    const auto est = randvol::mc_volume(MinkowskiCombo(body, 1.0, 0.0), rng.child(1), samples);
    o.result = {{"body", io::body_to_json(body)}, {"samples", samples}, {"estimate", io::report_to_json(est)}};
    if (body.kind() != BodyKind::VRep) {
        const double exact = randvol::exact_volume(body);
        o.result["exact"] = exact;
        o.result["exactInCi95"] = est.covers(exact);
    }
    const auto ratio = randvol::difference_ratio(body, rng.child(2), samples);
    o.result["differenceRatio"] = {{"value", ratio.value}, {"exact", ratio.exact}};
    if (lambda > 0.0) {
        const auto combo = randvol::mc_volume(MinkowskiCombo(body, 1.0, lambda), rng.child(3), samples);
        o.result["lambda"] = lambda;
        o.result["combo"] = io::report_to_json(combo);
    }
    o.summary = "volume " + io::format_number(est.mean) + " [" + io::format_number(est.ci95_low) + ", " +
                io::format_number(est.ci95_high) + "]";
    return o;
}

Output run_net(const Common& c, double epsilon, std::size_t max_points, std::size_t probes) {
    const auto body = io::load_body(c.body, c.dim);
    const auto net = nets::build_net(body, epsilon, max_points);
    Output o;
    o.result = {{"body", io::body_to_json(body)},
                {"epsilon", net.epsilon},
                {"size", net.size()},
                {"gridSpacing", net.grid_spacing},
                {"certifiedInradius", net.certified_inradius},
                {"referenceBound", net.reference_bound()}};
    if (probes > 0) {
        std::vector<HomothetPlacement> cells;
        for (std::size_t i = 0; i < net.size(); ++i) cells.push_back({net.points.point(i), net.epsilon});
        const cover::HomothetIndex index(body, cells, 0.0);
        const auto pts = randvol::sample_uniform(body, RngSpec{c.seed, 0}.child(1), probes);
        std::vector<std::size_t> missed(thread_count(), 0);
        parallel_for(pts.size(), [&](std::size_t b, std::size_t e, std::size_t w) {
            for (std::size_t i = b; i < e; ++i) missed[w] += index.first_containing(pts[i]) ? 0 : 1;
        });
        std::size_t uncovered = 0;
        for (auto m : missed) uncovered += m;
        o.result["probes"] = probes;
        o.result["probesUncovered"] = uncovered;
    }
    o.files.emplace_back("net.csv", io::points_csv(net.points).str());
    o.summary = "net of " + std::to_string(net.size()) + " points, reference bound " +
                io::format_number(net.reference_bound());
    return o;
}

Output run_cover(const Common& c, const RatioArgs& ra, std::size_t trials, double epsilon, std::size_t probes,
                 const std::string& domain) {
    randcover::CoverExperimentConfig cfg(io::load_body(c.body, c.dim), ra.resolve());
    cfg.trials = trials;
    cfg.epsilon = epsilon;
    cfg.rng = RngSpec{c.seed, 0};
    cfg.probes = probes;
    if (domain == randcover::to_string(randcover::Domain::KMinusK)) {
        cfg.domain = randcover::Domain::KMinusK;
    } else if (domain != randcover::to_string(randcover::Domain::KMinusLambdaK)) {
        throw InputError("unknown domain '" + domain + "'");
    }
    const auto rep = randcover::run_cover_experiment(cfg);
    Output o;
    o.result = io::report_to_json(rep);
    o.files.emplace_back("trials.csv", io::trials_csv(rep).str());

    // Trial 0 again with its placements and assignment for the certificate.
    auto first = cfg;
    first.trials = 1;
    first.keep_details = true;
    const auto detail = randcover::run_cover_experiment(first);
    o.files.emplace_back("certificate.json",
                         io::cover_certificate(cfg.body, detail.rows.at(0), detail.epsilon, detail.net_size).dump() + "\n");
    o.summary = "certified " + std::to_string(rep.certified) + "/" + std::to_string(rep.trials) + ", refuted " +
                std::to_string(rep.refuted) + ", unknown " + std::to_string(rep.unknown);
    return o;
}

Output run_illuminate(const Common& c, const std::string& sources_file, std::size_t trials, double net_epsilon,
                      std::size_t cover_probes, std::size_t probes) {
    const auto body = io::load_body(c.body, c.dim);
    const RngSpec rng{c.seed, 0};
    Output o;
    if (!sources_file.empty()) {
        std::vector<illum::LightSource> sources;
        for (const auto& p : io::read_json_file(sources_file)) sources.emplace_back(body, io::point_from_json(p, body.dim()));
        const auto v = illum::verify_illumination(body, sources, rng, probes);
        o.result = {{"body", io::body_to_json(body)},
                    {"sources", sources.size()},
                    {"status", illum::to_string(v.status)},
                    {"probes", v.probes},
                    {"witness", v.witness ? io::to_json(*v.witness) : Json(nullptr)}};
        o.files.emplace_back("certificate.json", io::illumination_certificate(body, sources, v, nullptr).dump() + "\n");
        o.summary = illum::to_string(v.status);
        return o;
    }
    illum::IlluminationExperimentConfig cfg(body);
    cfg.trials = trials;
    cfg.rng = rng;
    cfg.net_epsilon = net_epsilon;
    cfg.cover_probes = cover_probes;
    cfg.illumination_probes = probes;
    const auto rep = illum::run_illumination_experiment(cfg);
    o.result = io::report_to_json(rep);
    o.files.emplace_back("trials.csv", io::trials_csv(rep).str());

    // Certificate for the first trial, rebuilt from the same streams.
    auto first = illum::illumination_cover_config(cfg);
    first.trials = 1;
    const auto prop = randcover::run_cover_experiment(first);
    const auto& row = prop.rows.at(0);
    if (row.verdict == cover::Status::Certified) {
        cover::CoverageVerdict cert;
        cert.status = row.verdict;
        cert.epsilon = prop.epsilon;
        cert.net_size = prop.net_size;
        cert.assignment = row.assignment;
        const auto set = illum::covering_to_illumination(body, row.placements, cert, rep.epsilon_cover);
        const auto v = illum::verify_illumination(body, set, rng.child(kCertificateTag), probes);
        o.files.emplace_back("certificate.json", io::illumination_certificate(body, set.sources, v, &set).dump() + "\n");
    } else {
        o.files.emplace_back("certificate.json", io::cover_certificate(body, row, prop.epsilon, prop.net_size).dump() + "\n");
    }
    o.summary = "covered " + std::to_string(rep.certified) + "/" + std::to_string(rep.rows.size()) +
                ", illumination verified " + std::to_string(rep.converted_verified) + ", falsified " +
                std::to_string(rep.falsified);
    return o;
}

Output run_fn_schedule(const Common& c, const RatioArgs& ra, const std::string& mode, double scale, double epsilon,
                       std::size_t probes) {
    fnsched::GeneralizedCoverConfig cfg(io::load_body(c.body, c.dim), ra.resolve());
    cfg.mode = fnsched::mode_from_string(mode);
    cfg.scale = scale;
    cfg.rng = RngSpec{c.seed, 0};
    cfg.probes = probes;
    if (epsilon > 0.0) cfg.epsilon = epsilon;
    const auto rep = fnsched::run_generalized_cover(cfg);
    Output o;
    o.result = io::report_to_json(rep);
    o.files.emplace_back("placements.csv", io::placements_csv(rep.construction).str());
    o.files.emplace_back("certificate.json",
                         io::cover_certificate(cfg.body, rep.construction.homothets(), rep.verdict).dump() + "\n");
    o.summary = fnsched::to_string(rep.branch) + " branch: " + cover::to_string(rep.verdict.status) + " with " +
                std::to_string(rep.construction.placements.size()) + " homothets";
    return o;
}

Output run_verify(const std::string& certificate, const std::string& body) {
    const auto v = io::verify_certificate_files(certificate, body);
    Output o;
    o.result = {{"valid", v.valid}, {"detail", v.detail}};
    o.summary = (v.valid ? "valid: " : "invalid: ") + v.detail;
    o.code = v.valid ? kExitOk : kExitRefuted;
    return o;
}

Output run_bounds(const Common& c) {
    const auto body = io::load_body(c.body, c.dim);
    const auto ratio = randvol::difference_ratio(body, RngSpec{c.seed, 0});
    const auto bounds = randcover::reference_bounds(body.dim(), ratio.value, body.symmetric());
    Output o;
    o.result = {{"dim", body.dim()},
                {"body", to_string(body.kind())},
                {"volumeRatio", ratio.value},
                {"volumeRatioExact", ratio.exact},
                {"bounds", io::bounds_to_json(bounds)}};
    o.files.emplace_back("bounds.csv", io::bounds_csv(bounds).str());
    std::ostringstream table;
    for (const auto& b : bounds) table << std::left << std::setw(28) << b.name << io::format_number(b.value) << "\n";
    o.summary = table.str();
    if (!o.summary.empty()) o.summary.pop_back();
    o.summary_on_stdout = true;
    return o;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Homothet coverings, illumination and generalized covering schedules"};
    app.require_subcommand(1);
    Common common;

    auto* volume = app.add_subcommand("volume", "Monte Carlo volume of K and K - lambda K");
    add_common(volume, common);
    std::uint64_t samples = 100000;
    double combo_lambda = 0.0;
    volume->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
    volume->add_option("--lambda", combo_lambda, "also estimate Vol(K - lambda K)")->check(CLI::Range(0.0, 1.0));

    auto* net = app.add_subcommand("net", "grid epsilon-net of K in its own gauge");
    add_common(net, common);
    double net_eps = 0.1;
    std::size_t max_points = nets::kMaxNetPoints;
    std::size_t net_probes = 0;
    net->add_option("--epsilon", net_eps, "net shrink")->capture_default_str();
    net->add_option("--max-points", max_points, "refuse nets larger than this")->capture_default_str();
    net->add_option("--probes", net_probes, "uniform probes checked against the net")->capture_default_str();

    auto* cover = app.add_subcommand("cover", "random homothet covering trials");
    add_common(cover, common);
    RatioArgs cover_ratios;
    add_ratios(cover, cover_ratios);
    std::size_t trials = 1;
    double epsilon = kCoverEpsilon;
    std::size_t probes = 10000;
    std::string domain = randcover::to_string(randcover::Domain::KMinusLambdaK);
    cover->add_option("--trials", trials, "independent trials")->capture_default_str();
    cover->add_option("--epsilon", epsilon, "net shrink")->capture_default_str();
    cover->add_option("--probes", probes, "uniform probes when the net fails")->capture_default_str();
    cover->add_option("--domain", domain, "center domain: k-minus-lambda-k or k-minus-k")->capture_default_str();

    auto* illuminate = app.add_subcommand("illuminate", "illumination from a covering, or check given sources");
    add_common(illuminate, common);
    std::string sources;
    std::size_t ill_trials = 1;
    double ill_eps = 0.02;
    std::size_t ill_cover_probes = 10000;
    std::size_t ill_probes = 10000;
    illuminate->add_option("--sources", sources, "JSON array of source positions to check");
    illuminate->add_option("--trials", ill_trials, "covering trials")->capture_default_str();
    illuminate->add_option("--epsilon", ill_eps, "net shrink of the covering certificate")->capture_default_str();
    illuminate->add_option("--cover-probes", ill_cover_probes, "probes when the covering net fails")
        ->capture_default_str();
    illuminate->add_option("--probes", ill_probes, "boundary probes per illumination check")->capture_default_str();

    auto* fn = app.add_subcommand("fn-schedule", "generalized covering by homothets of prescribed ratios");
    add_common(fn, common);
    RatioArgs fn_ratios;
    add_ratios(fn, fn_ratios);
    std::string mode = "desk";
    double scale = fnsched::kDeskScale;
    double fn_eps = 0.0;
    std::size_t fn_probes = 10000;
    fn->add_option("--mode", mode, "desk (scaled) or paper (unscaled) constants")->capture_default_str()->check(CLI::IsMember({"desk", "paper"}));
    fn->add_option("--scale", scale, "desk multiplier")->capture_default_str();
    fn->add_option("--epsilon", fn_eps, "final net shrink (0: automatic)");
    fn->add_option("--probes", fn_probes, "uniform probes when the net fails")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "re-check a cover or illumination certificate");
    add_common(verify, common, false);
    std::string certificate;
    std::string verify_body;
    verify->add_option("--certificate", certificate, "certificate JSON")->required();
    verify->add_option("--body", verify_body, "body name or file (default: the embedded body)");

    auto* bounds = app.add_subcommand("bounds", "reference covering and illumination bounds");
    add_common(bounds, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code != 0 && dynamic_cast<const CLI::CallForHelp*>(&e) == nullptr) {
            err << app.help();
            return kExitInput;
        }
        return kExitOk;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        apply_threads(common.threads);
        const auto start = std::chrono::steady_clock::now();
        Output o;
        if (sub == volume) o = run_volume(common, samples, combo_lambda);
        if (sub == net) o = run_net(common, net_eps, max_points, net_probes);
        if (sub == cover) o = run_cover(common, cover_ratios, trials, epsilon, probes, domain);
        if (sub == illuminate) o = run_illuminate(common, sources, ill_trials, ill_eps, ill_cover_probes, ill_probes);
        if (sub == fn) o = run_fn_schedule(common, fn_ratios, mode, scale, fn_eps, fn_probes);
        if (sub == verify) o = run_verify(certificate, verify_body);
        if (sub == bounds) o = run_bounds(common);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit(o, common, sub->get_name(), config_echo(sub), seconds, out);
        return o.code;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace homcover::cli
