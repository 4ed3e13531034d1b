#include "homcover/serialize.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace homcover::io {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("field '") + key + "': " + e.what());
    }
}

std::vector<HomothetPlacement> placements_from_json(const Json& j, std::size_t dim) {
    std::vector<HomothetPlacement> out;
    if (!j.is_array()) throw InputError("placements must be an array");
    for (const auto& p : j) {
        HomothetPlacement h{point_from_json(field(p, "center"), dim), get<double>(p, "ratio")};
        h.validate(dim);
        out.push_back(std::move(h));
    }
    return out;
}

Json placements_to_json(const std::vector<HomothetPlacement>& ps) {
    Json out = Json::array();
    for (const auto& p : ps) out.push_back({{"center", to_json(p.center)}, {"ratio", p.ratio}});
    return out;
}

Json optional_point(const std::optional<Point>& p) { return p ? to_json(*p) : Json(nullptr); }

std::string csv_cell(const std::optional<Point>& p) {
    if (!p) return "";
    std::string s;
    for (std::size_t j = 0; j < p->size(); ++j) s += (j ? " " : "") + format_number((*p)[j]);
    return s;
}

VerifyOutcome verify_cover(const Json& cert, const ConvexBody& body) {
    const std::size_t n = body.dim();
    if (get<std::size_t>(field(cert, "body"), "dim") != n) return {false, "dimension differs from the body"};
    const auto status = cover::status_from_string(get<std::string>(cert, "status"));
    const auto ps = placements_from_json(field(cert, "placements"), n);
    if (status == cover::Status::Unknown) return {true, "no claims"};
    if (status == cover::Status::Refuted) {
        const Point w = point_from_json(field(cert, "witness"), n);
        const auto why = cover::check_witness(body, ps, w);
        return {why.empty(), why.empty() ? "witness re-verified" : why};
    }
    const double eps = get<double>(cert, "epsilon");
    if (!(eps > 0.0 && eps < 1.0)) return {false, "epsilon outside (0, 1)"};
    const auto net = nets::build_net(body, eps);
    if (net.size() != get<std::size_t>(cert, "netSize")) return {false, "net size differs from the rebuilt net"};
    std::vector<cover::Assignment> assignment;
    for (const auto& pair : field(cert, "assignment")) {
        if (!pair.is_array() || pair.size() != 2) throw InputError("assignment entries must be pairs");
        assignment.push_back({pair[0].get<std::size_t>(), pair[1].get<std::size_t>()});
    }
    const auto why = cover::check_assignment(body, ps, net, assignment);
    return {why.empty(), why.empty() ? "all " + std::to_string(net.size()) + " net points assigned" : why};
}

VerifyOutcome verify_illumination(const Json& cert, const ConvexBody& body) {
    const std::size_t n = body.dim();
    const auto status = illum::illum_status_from_string(get<std::string>(cert, "status"));
    std::vector<illum::LightSource> sources;
    for (const auto& s : field(cert, "sources")) {
        try {
            sources.emplace_back(body, point_from_json(s, n));
        } catch (const InputError& e) {
            return {false, std::string("source rejected: ") + e.what()};
        }
    }
    if (status == illum::IllumStatus::Unknown) return {true, "no claims"};
    if (status == illum::IllumStatus::FalsifiedWitness) {
        const auto why = illum::check_illumination_witness(body, sources, point_from_json(field(cert, "witness"), n));
        return {why.empty(), why.empty() ? "witness re-verified" : why};
    }
    const Json& cover_cert = field(cert, "cover");
    if (get<std::string>(cover_cert, "status") != cover::to_string(cover::Status::Certified)) {
        return {false, "covering certificate is not certified"};
    }
    const auto inner = verify_cover(cover_cert, body);
    if (!inner.valid) return {false, "covering certificate: " + inner.detail};
    cover::CoverageVerdict certified;
    certified.status = cover::Status::Certified;
    illum::IlluminationSet set;
    try {
        set = illum::covering_to_illumination(body, placements_from_json(field(cover_cert, "placements"), n), certified,
                                              get<double>(cert, "epsilonCover"));
    } catch (const InputError& e) {
        return {false, std::string("conversion rejected: ") + e.what()};
    }
    if (set.sources.size() != sources.size()) return {false, "source count differs from the conversion"};
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const double gap = norm_inf(difference(set.sources[i].position(), sources[i].position()));
        if (gap > kMembershipTolerance * std::max(1.0, norm_inf(sources[i].position()))) {
            return {false, "source " + std::to_string(i) + " differs from the conversion"};
        }
    }
    return {true, "sources follow from a verified covering"};
}

}  // namespace

Json to_json(ConstVec p) { return Json(std::vector<double>(p.begin(), p.end())); }

Json to_json(const PointSet& ps) {
    Json out = Json::array();
    for (std::size_t i = 0; i < ps.size(); ++i) out.push_back(to_json(ps[i]));
    return out;
}

Point point_from_json(const Json& j, std::size_t dim) {
    if (!j.is_array() || j.size() != dim) throw InputError("expected a point of dimension " + std::to_string(dim));
    Point p;
    for (const auto& v : j) {
        if (!v.is_number()) throw InputError("point coordinates must be numbers");
        p.push_back(v.get<double>());
    }
    return p;
}

Json body_to_json(const ConvexBody& body) {
    return {{"kind", to_string(body.kind())}, {"dim", body.dim()}, {"vertices", to_json(body.vertices())}};
}

ConvexBody body_from_json(const Json& j) {
    const auto kind = body_kind_from_string(get<std::string>(j, "kind"));
    const auto dim = get<std::size_t>(j, "dim");
    if (kind != BodyKind::VRep) return ConvexBody::special(kind, dim);
    PointSet vs(dim);
    for (const auto& v : field(j, "vertices")) vs.push_back(point_from_json(v, dim));
    return ConvexBody::from_vertices(vs);
}

ConvexBody load_body(const std::string& spec, std::size_t dim) {
    for (const char* name : {"cube", "simplex", "crosspolytope", "cross-polytope", "cross"}) {
        if (spec == name) {
            if (dim < 1) throw InputError("--dim is required for a named body");
            return ConvexBody::special(body_kind_from_string(spec), dim);
        }
    }
    auto body = body_from_json(read_json_file(spec));
    if (dim != 0 && body.dim() != dim) throw InputError("body file dimension differs from --dim");
    return body;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

std::vector<double> read_ratios(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::vector<double> out;
    const Json j = Json::parse(text, nullptr, false);
    if (!j.is_discarded()) {
        if (!j.is_array()) throw InputError("ratio file must hold an array");
        for (const auto& v : j) {
            if (!v.is_number()) throw InputError("ratios must be numbers");
            out.push_back(v.get<double>());
        }
        return out;
    }
    std::istringstream words(text);
    std::string w;
    while (words >> w) {
        double v = 0.0;
        const auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || end != w.data() + w.size()) throw InputError("bad ratio '" + w + "'");
        out.push_back(v);
    }
    return out;
}

Json cover_certificate(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                       const cover::CoverageVerdict& verdict) {
    Json pairs = Json::array();
    for (const auto& a : verdict.assignment) pairs.push_back({a.net_index, a.homothet_index});
    return {{"schemaVersion", kSchemaVersion},
            {"kind", "cover"},
            {"body", body_to_json(body)},
            {"status", cover::to_string(verdict.status)},
            {"epsilon", verdict.epsilon},
            {"netSize", verdict.net_size},
            {"netSpacing", verdict.net_spacing},
            {"placements", placements_to_json(placements)},
            {"assignment", std::move(pairs)},
            {"witness", optional_point(verdict.witness)}};
}

Json cover_certificate(const ConvexBody& body, const randcover::TrialRecord& trial, double epsilon,
                       std::size_t net_size) {
    cover::CoverageVerdict v;
    v.status = trial.verdict;
    v.epsilon = epsilon;
    v.net_size = net_size;
    v.witness = trial.witness;
    v.assignment = trial.assignment;
    return cover_certificate(body, trial.placements, v);
}

Json illumination_certificate(const ConvexBody& body, const std::vector<illum::LightSource>& sources,
                              const illum::IlluminationVerdict& verdict, const illum::IlluminationSet* from_cover) {
    Json src = Json::array();
    for (const auto& s : sources) src.push_back(to_json(s.position()));
    Json out{{"schemaVersion", kSchemaVersion},
             {"kind", "illumination"},
             {"body", body_to_json(body)},
             {"status", illum::to_string(verdict.status)},
             {"sources", std::move(src)},
             {"probes", verdict.probes},
             {"witness", optional_point(verdict.witness)}};
    if (from_cover) {
        out["rUsed"] = from_cover->r_used;
        out["epsilonCover"] = from_cover->epsilon_cover;
        out["cover"] = cover_certificate(body, from_cover->placements, from_cover->certificate);
    }
    return out;
}

VerifyOutcome verify_certificate(const Json& certificate, const ConvexBody& body) {
    if (get<int>(certificate, "schemaVersion") != kSchemaVersion) throw InputError("unsupported schemaVersion");
    const auto kind = get<std::string>(certificate, "kind");
    try {
        if (kind == "cover") return verify_cover(certificate, body);
        if (kind == "illumination") return verify_illumination(certificate, body);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("certificate schema: ") + e.what());
    }
    throw InputError("unknown certificate kind '" + kind + "'");
}

VerifyOutcome verify_certificate(const Json& certificate) {
    return verify_certificate(certificate, body_from_json(field(certificate, "body")));
}

VerifyOutcome verify_certificate_files(const std::string& certificate_path, const std::string& body_path) {
    const Json cert = read_json_file(certificate_path);
    if (body_path.empty()) return verify_certificate(cert);
    const auto dim = get<std::size_t>(field(cert, "body"), "dim");
    return verify_certificate(cert, load_body(body_path, dim));
}

Json report_to_json(const randvol::VolumeEstimate& v) {
    return {{"mean", v.mean},       {"ci95Low", v.ci95_low}, {"ci95High", v.ci95_high},
            {"samples", v.samples}, {"hits", v.hits},        {"boxVolume", v.box_volume}};
}

Json report_to_json(const randcover::CoverExperimentReport& r) {
    Json rows = Json::array();
    for (const auto& t : r.rows) {
        rows.push_back({{"trial", t.trial}, {"verdict", cover::to_string(t.verdict)}, {"witness", optional_point(t.witness)}});
    }
    Json out{{"dim", r.dim},
             {"trials", r.trials},
             {"certified", r.certified},
             {"refuted", r.refuted},
             {"unknown", r.unknown},
             {"empiricalLowerBound", r.empirical_lower_bound},
             {"asymptoticBound", r.asymptotic_bound},
             {"powerSum", r.power_sum},
             {"threshold", r.threshold},
             {"thresholdSatisfied", r.threshold_satisfied},
             {"epsilon", r.epsilon},
             {"volumeRatio", r.volume_ratio},
             {"volumeRatioExact", r.volume_ratio_exact},
             {"ratioWarning", r.ratio_warning},
             {"netSize", r.net_size},
             {"rows", std::move(rows)}};
    if (r.volume_ratio_ci) out["volumeRatioCi95"] = {r.volume_ratio_ci->lo, r.volume_ratio_ci->hi};
    return out;
}

Json report_to_json(const illum::IlluminationExperimentReport& r) {
    Json rows = Json::array();
    for (const auto& t : r.rows) {
        rows.push_back({{"trial", t.trial},
                        {"cover", cover::to_string(t.cover)},
                        {"illumination", t.illumination ? Json(illum::to_string(*t.illumination)) : Json(nullptr)},
                        {"sources", t.sources},
                        {"witness", optional_point(t.witness)}});
    }
    return {{"dim", r.dim},
            {"m", r.m},
            {"epsilonCover", r.epsilon_cover},
            {"rUsed", r.r_used},
            {"volumeRatio", r.volume_ratio},
            {"volumeRatioExact", r.volume_ratio_exact},
            {"certified", r.certified},
            {"convertedVerified", r.converted_verified},
            {"falsified", r.falsified},
            {"rows", std::move(rows)}};
}

Json report_to_json(const fnsched::GeneralizedCoverReport& r) {
    Json classes = Json::array();
    for (const auto& c : r.plan.classes) {
        Json parts = Json::array();
        for (const auto& p : c.partitions) parts.push_back(p);
        classes.push_back({{"k", c.k}, {"size", c.indices.size()}, {"budget", c.budget}, {"partitions", std::move(parts)}});
    }
    Json cubes = Json::array();
    for (const auto& c : r.plan.cubes) {
        cubes.push_back({{"center", to_json(c.center)},
                         {"halfSide", c.half_side},
                         {"k", c.k},
                         {"class", c.class_index},
                         {"partition", c.partition}});
    }
    Json placements = Json::array();
    for (const auto& p : r.construction.placements) {
        placements.push_back(
            {{"index", p.index}, {"center", to_json(p.center)}, {"ratio", p.ratio}, {"phase", fnsched::to_string(p.phase)}});
    }
    return {{"branch", fnsched::to_string(r.branch)},
            {"mode", fnsched::to_string(r.mode)},
            {"thresholds", {{"t4", r.thresholds.t4}, {"t5", r.thresholds.t5}, {"t6", r.thresholds.t6}}},
            {"volumeRatio", r.volume_ratio},
            {"powerSum", r.power_sum},
            {"largePowerSum", r.large_power_sum},
            {"precondition", r.precondition},
            {"normalization",
             {{"shift", to_json(r.normalization.shift)},
              {"scale", r.normalization.scale},
              {"unitCubeInside", r.normalization.unit_cube_inside},
              {"insideOuterCube", r.normalization.inside_outer_cube},
              {"heuristic", true}}},
            {"symmetry", r.symmetry},
            {"symmetricInclusion", r.symmetric_inclusion},
            {"plan",
             {{"large", r.plan.large},
              {"classes", std::move(classes)},
              {"remainder", r.plan.remainder},
              {"cubes", std::move(cubes)},
              {"unassigned", r.plan.unassigned}}},
            {"tilingCubes", r.tiling_cubes},
            {"patchPoints", r.patch_points},
            {"maxPatchPoints", r.max_patch_points},
            {"orphanProbes", r.orphan_probes},
            {"epsilon", r.epsilon},
            {"netSize", r.net_size},
            {"verdict", cover::to_string(r.verdict.status)},
            {"witness", optional_point(r.verdict.witness)},
            {"placements", std::move(placements)}};
}

Json bounds_to_json(const std::vector<randcover::NamedBound>& bounds) {
    Json out = Json::object();
    for (const auto& b : bounds) out[b.name] = b.value;
    return out;
}

std::string format_number(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::string Csv::str() const {
    auto line = [](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
        return s + "\n";
    };
    std::string out = line(header);
    for (const auto& r : rows) out += line(r);
    return out;
}

Csv trials_csv(const randcover::CoverExperimentReport& r) {
    Csv c{{"trial", "verdict", "witness"}, {}};
    for (const auto& t : r.rows) c.rows.push_back({std::to_string(t.trial), cover::to_string(t.verdict), csv_cell(t.witness)});
    return c;
}

Csv trials_csv(const illum::IlluminationExperimentReport& r) {
    Csv c{{"trial", "cover", "illumination", "sources", "witness"}, {}};
    for (const auto& t : r.rows) {
        c.rows.push_back({std::to_string(t.trial), cover::to_string(t.cover),
                          t.illumination ? illum::to_string(*t.illumination) : "", std::to_string(t.sources),
                          csv_cell(t.witness)});
    }
    return c;
}

Csv placements_csv(const fnsched::CoveringConstruction& con) {
    Csv c{{"index", "ratio", "phase", "center"}, {}};
    for (const auto& p : con.placements) {
        c.rows.push_back({std::to_string(p.index), format_number(p.ratio), fnsched::to_string(p.phase), csv_cell(p.center)});
    }
    return c;
}

Csv points_csv(const PointSet& ps) {
    Csv c;
    for (std::size_t j = 0; j < ps.dim(); ++j) c.header.push_back("x" + std::to_string(j));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::vector<std::string> row;
        for (double v : ps[i]) row.push_back(format_number(v));
        c.rows.push_back(std::move(row));
    }
    return c;
}

Csv bounds_csv(const std::vector<randcover::NamedBound>& bounds) {
    Csv c{{"name", "value"}, {}};
    for (const auto& b : bounds) c.rows.push_back({b.name, format_number(b.value)});
    return c;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[md[i] >> 4];
        out += kHex[md[i] & 15];
    }
    return out;
}

}  // namespace homcover::io
