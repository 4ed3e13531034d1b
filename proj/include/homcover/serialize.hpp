#pragma once

// JSON and CSV forms of bodies, reports and certificates, and the independent
// certificate re-checker.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "homcover/fnsched.hpp"
#include "homcover/illum.hpp"
#include "homcover/randcover.hpp"
#include "homcover/randvol.hpp"

namespace homcover::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json to_json(ConstVec p);
Json to_json(const PointSet& ps);
Point point_from_json(const Json& j, std::size_t dim);

/// {"kind", "dim", "vertices"}. Special kinds round-trip to the closed-form bodies.
Json body_to_json(const ConvexBody& body);
ConvexBody body_from_json(const Json& j);

/// A body name (cube, simplex, crosspolytope) in `dim` dimensions, or a path to
/// a body JSON file. A nonzero `dim` must match the file.
ConvexBody load_body(const std::string& spec, std::size_t dim);

/// A JSON array of numbers or whitespace-separated numbers.
std::vector<double> read_ratios(const std::string& path);

Json read_json_file(const std::string& path);

/// Cover certificate: placements, shrink, net size and the [netIndex, homothetIndex]
/// pairs, or a witness when refuted.
Json cover_certificate(const ConvexBody& body, const std::vector<HomothetPlacement>& placements,
                       const cover::CoverageVerdict& verdict);
Json cover_certificate(const ConvexBody& body, const randcover::TrialRecord& trial, double epsilon,
                       std::size_t net_size);

Json illumination_certificate(const ConvexBody& body, const std::vector<illum::LightSource>& sources,
                              const illum::IlluminationVerdict& verdict, const illum::IlluminationSet* from_cover);

struct VerifyOutcome {
    bool valid = false;
    std::string detail;
};

/// Replays every claim of the certificate against `body`. Throws InputError on
/// schema errors. Certificates with status unknown carry no claims and pass.
VerifyOutcome verify_certificate(const Json& certificate, const ConvexBody& body);
/// Uses the body embedded in the certificate.
VerifyOutcome verify_certificate(const Json& certificate);
/// Body file may be empty to use the embedded body.
VerifyOutcome verify_certificate_files(const std::string& certificate_path, const std::string& body_path);

Json report_to_json(const randvol::VolumeEstimate& v);
Json report_to_json(const randcover::CoverExperimentReport& r);
Json report_to_json(const illum::IlluminationExperimentReport& r);
Json report_to_json(const fnsched::GeneralizedCoverReport& r);
Json bounds_to_json(const std::vector<randcover::NamedBound>& bounds);

/// Shortest round-trip decimal form.
std::string format_number(double v);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const;
};

Csv trials_csv(const randcover::CoverExperimentReport& r);
Csv trials_csv(const illum::IlluminationExperimentReport& r);
Csv placements_csv(const fnsched::CoveringConstruction& c);
Csv points_csv(const PointSet& ps);
Csv bounds_csv(const std::vector<randcover::NamedBound>& bounds);

std::string sha256_hex(const std::string& bytes);

}  // namespace homcover::io
