#pragma once

// JSON reports. Key order is fixed and no field depends on wall-clock time
// unless stamping is on, so equal inputs give byte-identical files.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "gridsing/config.hpp"
#include "gridsing/gamma.hpp"
#include "gridsing/integrals.hpp"
#include "gridsing/montecarlo.hpp"
#include "gridsing/sigma.hpp"
#include "gridsing/verification.hpp"

namespace gridsing {

using Json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "0.1.0";

Json to_json(const MeasureEstimate& e);
Json to_json(const RunConfig& c);
Json to_json(const Box& b);
Json to_json(const GridNode& y);
Json to_json(const MSigma& m);
Json to_json(const MembershipReport& r);
Json to_json(const QuadratureResult& q);
Json to_json(const NuIntegral& r);
Json to_json(const MuIntegral& r);
Json to_json(const CubeIntegral& r);
Json to_json(const ShellIntegral& r);
Json to_json(const WitnessReport& r);
Json to_json(const ExhaustionReport& r);
Json to_json(const ResidualReport& r);
Json to_json(const ProbeTable& r);
Json to_json(const MajorantReport& r);
Json to_json(const SampledInequality& q);
Json to_json(const NonIntegrabilityReport& r);
Json to_json(const AConditionsReport& r);
Json to_json(const BConditionsReport& r);
Json to_json(const SandwichProbe& r);

/// Top-level document: command, config echo, provenance, results, and a UTC
/// stamp when enabled.
Json make_report(const std::string& command, const RunConfig& config, GridIndex m, const std::string& profile,
                 Json results);

std::string dump(const Json& j);

/// OUTPUT_DIR from the environment when set, otherwise the configured directory.
std::filesystem::path output_dir(const RunConfig& config);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Comma-separated rows with a header line.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

}  // namespace gridsing
