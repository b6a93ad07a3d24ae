#include "gridsing/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gridsing/error.hpp"

namespace gridsing {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) throw Error(ErrorCode::ParseError, "'" + key + "' expects a number, got '" + v + "'");
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    int base = 10;
    std::string_view body = v;
    if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
        base = 16;
        body.remove_prefix(2);
    }
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out, base);
    if (ec != std::errc() || ptr != body.data() + body.size() || body.empty()) {
        throw Error(ErrorCode::ParseError, "'" + key + "' expects a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw Error(ErrorCode::ParseError, "'" + key + "' expects on/off, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"run.domain", [](RunConfig& c, const std::string& v) { c.domain = v; }},
        {"run.sigma", [](RunConfig& c, const std::string& v) { c.sigma = v; }},
        {"run.n", [](RunConfig& c, const std::string& v) { c.n = parse_uint("n", v); }},
        {"ranges.t_max", [](RunConfig& c, const std::string& v) { c.t_max = parse_uint("t_max", v); }},
        {"ranges.s_max", [](RunConfig& c, const std::string& v) { c.s_max = parse_uint("s_max", v); }},
        {"sampling.seed", [](RunConfig& c, const std::string& v) { c.seed = parse_uint("seed", v); }},
        {"sampling.samples", [](RunConfig& c, const std::string& v) { c.samples = parse_uint("samples", v); }},
        {"sampling.point_samples",
         [](RunConfig& c, const std::string& v) { c.point_samples = parse_uint("point_samples", v); }},
        {"tolerances.quadrature",
         [](RunConfig& c, const std::string& v) { c.quadrature_tol = parse_double("quadrature", v); }},
        {"tolerances.exhaustion_slack",
         [](RunConfig& c, const std::string& v) { c.exhaustion_slack = parse_double("exhaustion_slack", v); }},
        {"tolerances.cube_slack",
         [](RunConfig& c, const std::string& v) { c.cube_slack = parse_double("cube_slack", v); }},
        {"tolerances.m_sigma_override",
         [](RunConfig& c, const std::string& v) { c.m_sigma_override = parse_double("m_sigma_override", v); }},
        {"output.dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
        {"output.stamp", [](RunConfig& c, const std::string& v) { c.stamp = parse_bool("stamp", v); }},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    if (n < kMinDim || n > kMaxDim) throw Error(ErrorCode::InvalidArgument, "n must lie in [2, 8]");
    if (t_max < 1 || s_max < 1) throw Error(ErrorCode::InvalidArgument, "t_max and s_max must be >= 1");
    if (samples < 100 || point_samples < 1) throw Error(ErrorCode::InvalidArgument, "sample counts too small");
    if (!(quadrature_tol > 0.0) || !(exhaustion_slack > 0.0) || !(cube_slack > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    }
    if (m_sigma_override && !(*m_sigma_override > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "m_sigma_override must be positive");
    }
}

std::string RunConfig::to_text() const {
    std::ostringstream os;
    os << "[run]\n";
    os << "domain = " << domain << "\n";
    os << "sigma = " << sigma << "\n";
    os << "n = " << n << "\n";
    os << "\n[ranges]\n";
    os << "t_max = " << t_max << "\n";
    os << "s_max = " << s_max << "\n";
    os << "\n[sampling]\n";
    os << "seed = " << seed << "\n";
    os << "samples = " << samples << "\n";
    os << "point_samples = " << point_samples << "\n";
    os << "\n[tolerances]\n";
    os << "quadrature = " << format_double(quadrature_tol) << "\n";
    os << "exhaustion_slack = " << format_double(exhaustion_slack) << "\n";
    os << "cube_slack = " << format_double(cube_slack) << "\n";
    if (m_sigma_override) os << "m_sigma_override = " << format_double(*m_sigma_override) << "\n";
    os << "\n[output]\n";
    os << "dir = " << output_dir << "\n";
    os << "stamp = " << (stamp ? "on" : "off") << "\n";
    return os.str();
}

RunConfig RunConfig::parse(std::string_view text) {
    RunConfig c;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad section");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        auto it = setters().find(key);
        if (it == setters().end()) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second(c, value);
    }
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

Domain RunConfig::load_domain() const {
    if (domain.empty()) return Domain::unit_cube(n);
    Domain d = Domain::load(domain);
    if (d.dim() != n) throw Error(ErrorCode::InvalidArgument, "domain dimension does not match n");
    return d;
}

}  // namespace gridsing
