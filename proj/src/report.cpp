#include "gridsing/report.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "gridsing/error.hpp"

namespace gridsing {

namespace {

Json check_json(const ConditionCheck& c) {
    return Json{{"status", c.status}, {"samples", c.samples}, {"violations", c.violations}, {"detail", c.detail}};
}

Json property_json(const PropertyCheck& c) {
    return Json{{"verdict", to_string(c.verdict)}, {"detail", c.detail}, {"violations", c.violations}};
}

Json rational_vec(const RationalVec& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

}  // namespace

Json to_json(const MeasureEstimate& e) {
    return Json{{"value", e.value},         {"half_width", e.half_width}, {"samples", e.samples},
                {"seed", e.seed},           {"resampled", e.resampled},   {"provenance", e.provenance()}};
}

Json to_json(const RunConfig& c) {
    Json j{{"domain", c.domain.empty() ? "unit cube" : c.domain},
           {"sigma", c.sigma},
           {"n", c.n},
           {"t_max", c.t_max},
           {"s_max", c.s_max},
           {"seed", c.seed},
           {"samples", c.samples},
           {"point_samples", c.point_samples},
           {"quadrature_tol", c.quadrature_tol},
           {"exhaustion_slack", c.exhaustion_slack},
           {"cube_slack", c.cube_slack}};
    if (c.m_sigma_override) j["m_sigma_override"] = *c.m_sigma_override;
    return j;
}

Json to_json(const Box& b) { return Json{{"lower", rational_vec(b.lower)}, {"upper", rational_vec(b.upper)}}; }

Json to_json(const GridNode& y) { return Json{{"t", y.t}, {"coords", rational_vec(y.coords())}}; }

Json to_json(const MSigma& m) {
    return Json{{"value", m.value},
                {"sigma_at_1", m.sigma_at_1},
                {"radial_integral", m.radial_integral},
                {"n", m.n},
                {"provenance", m.provenance}};
}

Json to_json(const MembershipReport& r) {
    return Json{{"profile", r.profile},
                {"n", r.n},
                {"continuity", property_json(r.continuity)},
                {"lower_bound", property_json(r.lower_bound)},
                {"blow_up", property_json(r.blow_up)},
                {"integrable", property_json(r.integrable)},
                {"consistent", r.consistent()},
                {"probe",
                 {{"grid_points", r.probe.grid_points},
                  {"divergence_depth", r.probe.divergence_depth},
                  {"refine_levels", r.probe.refine_levels},
                  {"continuity_tol", r.probe.continuity_tol},
                  {"bound_ladder", r.probe.bound_ladder},
                  {"quadrature_tol", r.probe.quadrature_tol}}}};
}

Json to_json(const QuadratureResult& q) {
    return Json{{"value", q.value},
                {"abs_error_estimate", q.abs_error_estimate},
                {"verdict", to_string(q.verdict)},
                {"panels", q.panels}};
}

Json to_json(const NuIntegral& r) {
    return Json{{"value", r.value},
                {"ball_measure", r.ball_measure},
                {"domain_measure", r.domain_measure},
                {"radial_integral", r.radial},
                {"bound", r.bound},
                {"within_bound", r.within_bound},
                {"provenance", r.provenance}};
}

Json to_json(const MuIntegral& r) {
    return Json{{"value", r.value},
                {"bound", r.bound},
                {"within_bound", r.within_bound},
                {"terms", r.terms},
                {"provenance", r.provenance}};
}

Json to_json(const CubeIntegral& r) {
    return Json{{"total", r.total},
                {"half_width", r.half_width},
                {"exact_part", r.exact_part},
                {"mc_part", to_json(r.mc_part)},
                {"clipped_measure", r.clipped_measure},
                {"inside_balls", r.inside_balls},
                {"straddling_balls", r.straddling_balls},
                {"provenance", r.provenance}};
}

Json to_json(const ShellIntegral& r) {
    return Json{{"value", r.value}, {"abs_error", r.abs_error}, {"provenance", r.provenance}};
}

Json to_json(const WitnessReport& r) {
    return Json{{"target_C", r.target_C},
                {"ball", {{"center", rational_vec(r.center)}, {"radius", to_string(r.rho0)}}},
                {"l", r.l},
                {"node", to_json(r.node)},
                {"delta", r.delta},
                {"threshold", r.threshold},
                {"region_radius", r.region_radius},
                {"core_radius", r.core_radius},
                {"sampled_min", r.sampled_min},
                {"samples", r.samples},
                {"failures", r.failures},
                {"verified", r.verified},
                {"provenance", "exact evaluation at sampled points"}};
}

Json to_json(const ExhaustionReport& r) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.estimates.size(); ++i) {
        Json row = to_json(r.estimates[i]);
        row["t"] = r.t_first + i;
        row["exact_union_measure"] = r.exact[i];
        rows.push_back(row);
    }
    Json j{{"k", r.k},         {"alpha", r.alpha}, {"region_measure", r.region_measure},
           {"bound", r.bound}, {"slack", r.slack}, {"estimates", rows}};
    j["satisfied_from"] = r.satisfied_from ? Json(*r.satisfied_from) : Json(nullptr);
    j["kind"] = "evidence";
    return j;
}

Json to_json(const ResidualReport& r) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.table.size(); ++i) {
        Json row = to_json(r.table[i]);
        row["t_max"] = i + 1;
        rows.push_back(row);
    }
    return Json{{"k", r.k},
                {"exact_first", r.exact_first},
                {"monotone", r.monotone},
                {"final", to_json(r.final())},
                {"table", rows},
                {"kind", "evidence"}};
}

Json to_json(const ProbeTable& r) {
    return Json{{"T", r.T},
                {"ladder", r.ladder},
                {"samples", r.samples},
                {"fractions", r.fractions},
                {"monotone", r.monotone},
                {"kind", "evidence"}};
}

Json to_json(const MajorantReport& r) {
    Json ex = Json::array();
    for (const auto& v : r.examples) ex.push_back(Json{{"t", v.t}, {"x", v.x}, {"field", v.field}, {"candidate", v.candidate}});
    Json j{{"candidate", r.candidate}, {"T", r.T}, {"samples", r.samples}, {"density", r.density}};
    j["first_violation"] = r.first_violation ? Json(*r.first_violation) : Json(nullptr);
    j["examples"] = ex;
    j["kind"] = "evidence";
    return j;
}

Json to_json(const SampledInequality& q) {
    Json j{{"name", q.name}, {"samples", q.samples}, {"violations", q.violations}};
    j["holds_from_log_inv_rho"] = q.holds_from_L ? Json(*q.holds_from_L) : Json(nullptr);
    return j;
}

Json to_json(const NonIntegrabilityReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.ladder) {
        rows.push_back(Json{{"j", row.j}, {"eps", row.eps}, {"value", row.value}, {"increment", row.increment}});
    }
    Json inequalities = Json::array();
    for (const auto& q : r.inequalities) inequalities.push_back(to_json(q));
    return Json{{"transform", r.transform},
                {"lambda", r.lambda},
                {"ladder", rows},
                {"verdict", to_string(r.verdict)},
                {"strictly_increasing", r.strictly_increasing},
                {"chain_samples", r.chain_samples},
                {"chain_violations", r.chain_violations},
                {"inequalities", inequalities},
                {"provenance", "quadrature(1e-08)"}};
}

Json to_json(const AConditionsReport& r) {
    return Json{{"measurability", check_json(r.measurability)},
                {"convexity", check_json(r.convexity)},
                {"lower_bound", check_json(r.lower_bound)},
                {"upper_bound", check_json(r.upper_bound)},
                {"c1", r.c1},
                {"c2", r.c2},
                {"passed", r.passed()}};
}

Json to_json(const BConditionsReport& r) {
    Json cubes = Json::array();
    for (const auto& c : r.cubes) {
        cubes.push_back(Json{{"cube", to_json(c.cube)},
                             {"clipped_measure", c.clipped_measure},
                             {"bound", c.bound},
                             {"values", c.values},
                             {"half_widths", c.half_widths},
                             {"max_value", c.max_value},
                             {"passed", c.passed}});
    }
    return Json{{"nonnegative", check_json(r.nonnegative)},
                {"integrable", check_json(r.integrable)},
                {"m_sigma", r.m_sigma},
                {"slack", r.slack},
                {"s_window", {r.s_first, r.s_last}},
                {"cubes", cubes},
                {"passed", r.passed()}};
}

Json to_json(const SandwichProbe& r) {
    Json hits = Json::array();
    for (const auto& h : r.hits) hits.push_back(Json{{"s", h.s}, {"x", h.x}, {"ratio", h.ratio}});
    Json j{{"lambda", r.lambda}, {"derived_bound", r.derived_bound}, {"hit_count", r.hit_count}};
    j["first_s"] = r.first_s ? Json(*r.first_s) : Json(nullptr);
    j["hits"] = hits;
    j["note"] = r.note;
    return j;
}

Json make_report(const std::string& command, const RunConfig& config, GridIndex m, const std::string& profile,
                 Json results) {
    Json j;
    j["command"] = command;
    j["config"] = to_json(config);
    j["provenance"] = Json{{"seed", config.seed}, {"m", m}, {"profile", profile}, {"artifact_version", kArtifactVersion}};
    j["results"] = std::move(results);
    if (config.stamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        j["stamp"] = buf;
    }
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::filesystem::path output_dir(const RunConfig& config) {
    if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) return env;
    return config.output_dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
    f << text;
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    char buf[32];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            os << (i ? "," : "") << buf;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace gridsing
