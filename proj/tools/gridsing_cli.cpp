#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gridsing/config.hpp"
#include "gridsing/error.hpp"
#include "gridsing/gamma.hpp"
#include "gridsing/grid.hpp"
#include "gridsing/integrals.hpp"
#include "gridsing/report.hpp"
#include "gridsing/suite.hpp"
#include "gridsing/verification.hpp"

namespace gs = gridsing;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;

// Options shared by every subcommand. Flags given on the command line win
// over the --config file.
struct Common {
    std::string config_path;
    std::string domain;
    std::string sigma;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t point_samples = 0;
    std::uint64_t t_max = 0;
    std::uint64_t s_max = 0;
    double tol = 0.0;
    double m_sigma_override = 0.0;
    std::string out;
    std::string stamp;
    bool csv = false;

    CLI::App* app = nullptr;

    void attach(CLI::App* sub) {
        app = sub;
        sub->add_option("--config", config_path, "run configuration file");
        sub->add_option("--domain", domain, "domain file (default: unit cube)");
        sub->add_option("--sigma", sigma, "sigma1 | loglog | const | power:<s> | file:<path>");
        sub->add_option("--n", n, "dimension")->check(CLI::Range(2, 8));
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--samples", samples, "Monte Carlo samples");
        sub->add_option("--point-samples", point_samples, "sampled points for pointwise checks");
        sub->add_option("--t-max", t_max, "largest grid offset");
        sub->add_option("--s-max", s_max, "largest sequence index");
        sub->add_option("--tol", tol, "quadrature tolerance");
        sub->add_option("--m-sigma-override", m_sigma_override, "use this M_sigma instead of computing it");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--stamp", stamp, "on | off")->check(CLI::IsMember({"on", "off"}));
        sub->add_flag("--csv", csv, "also write CSV plot data");
    }

    bool given(const char* name) const { return app->count(name) > 0; }

    gs::RunConfig resolve() const {
        gs::RunConfig c = config_path.empty() ? gs::RunConfig{} : gs::RunConfig::load(config_path);
        if (given("--domain")) c.domain = domain;
        if (given("--sigma")) c.sigma = sigma;
        if (given("--n")) c.n = n;
        if (given("--seed")) c.seed = seed;
        if (given("--samples")) c.samples = samples;
        if (given("--point-samples")) c.point_samples = point_samples;
        if (given("--t-max")) c.t_max = t_max;
        if (given("--s-max")) c.s_max = s_max;
        if (given("--tol")) c.quadrature_tol = tol;
        if (given("--m-sigma-override")) c.m_sigma_override = m_sigma_override;
        if (given("--out")) c.output_dir = out;
        if (given("--stamp")) c.stamp = stamp == "on";
        c.validate();
        return c;
    }
};

struct Output {
    gs::Json results;
    bool passed = true;
    std::vector<std::string> csv_header;
    std::vector<std::vector<double>> csv_rows;
};

std::vector<double> split_doubles(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw gs::Error(gs::ErrorCode::ParseError, "bad number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<int> split_ints(const std::string& text) {
    std::vector<int> out;
    for (double v : split_doubles(text, ',')) out.push_back(static_cast<int>(v));
    return out;
}

gs::RationalVec split_rationals(const std::string& text) {
    gs::RationalVec out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(gs::parse_rational(tok));
    return out;
}

// Points from a file (one per line, comma or space separated) or inline "x,y;x,y".
std::vector<std::vector<double>> read_points(const std::string& arg, std::size_t dim) {
    std::string text = arg;
    if (std::filesystem::is_regular_file(arg)) {
        std::ifstream f(arg);
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    for (char& ch : text) {
        if (ch == ';') ch = '\n';
        if (ch == ' ' || ch == '\t') ch = ',';
    }
    std::vector<std::vector<double>> pts;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto p = split_doubles(line, ',');
        if (p.empty()) continue;
        if (p.size() != dim) throw gs::Error(gs::ErrorCode::InvalidArgument, "point dimension does not match n");
        pts.push_back(std::move(p));
    }
    return pts;
}

// Cube file: one "box lo.. : hi.." line per cube, as in domain files.
std::vector<gs::Box> read_cubes(const std::string& path, std::size_t dim) {
    std::ifstream f(path);
    if (!f) throw gs::Error(gs::ErrorCode::InvalidArgument, "cannot open cube file '" + path + "'");
    std::stringstream ss;
    ss << "dim " << dim << "\n" << f.rdbuf();
    return gs::Domain::parse(ss.str()).boxes();
}

gs::FieldFamily family_of(const gs::RunConfig& c) {
    return gs::FieldFamily(c.load_domain(), gs::profile_by_name(c.sigma, c.n));
}

double m_sigma_of(const gs::RunConfig& c, const gs::FieldFamily& fam) {
    if (c.m_sigma_override) return *c.m_sigma_override;
    return gs::m_sigma(fam.profile(), fam.dim(), c.quadrature_tol).value;
}

int emit(const std::string& command, const gs::RunConfig& c, bool csv, const Output& out, gs::GridIndex m) {
    const gs::Json report = gs::make_report(command, c, m, c.sigma, out.results);
    const auto dir = gs::output_dir(c);
    gs::write_text(dir / (command + ".json"), gs::dump(report));
    if (csv && !out.csv_header.empty()) gs::write_text(dir / (command + ".csv"), gs::to_csv(out.csv_header, out.csv_rows));
    std::cout << command << ": " << (out.passed ? "ok" : "assertion failed") << " -> " << (dir / (command + ".json")).string()
              << "\n";
    return out.passed ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singular fields on periodic grids: exact integrals, witnesses and Monte Carlo evidence"};
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Common>> commons;
    auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        commons.push_back(std::make_unique<Common>());
        commons.back()->attach(s);
        return std::pair<CLI::App*, Common*>{s, commons.back().get()};
    };

    std::function<int()> action;

    {
        auto [s, cm] = sub("nodes", "enumerate X_t");
        static std::uint64_t t = 2;
        s->add_option("--t", t, "grid index")->required();
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto dom = c.load_domain();
                const auto set = gs::enumerate_nodes(dom, t);
                Output out;
                gs::Json nodes = gs::Json::array();
                for (const auto& y : set.nodes()) {
                    nodes.push_back(gs::to_json(y)["coords"]);
                    out.csv_rows.push_back(y.coords_double());
                }
                for (std::size_t d = 0; d < dom.dim(); ++d) out.csv_header.push_back("x" + std::to_string(d + 1));
                const auto m = gs::minimal_m(dom);
                out.results = gs::Json{{"t", t}, {"count", set.count()}, {"m", m}, {"provenance", "exact"}, {"nodes", nodes}};
                return emit("nodes", c, cm->csv, out, m);
            };
        });
    }
    {
        auto [s, cm] = sub("constants", "unit ball constants and M_sigma");
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto k = gs::unit_ball_constants(c.n);
                const auto prof = gs::profile_by_name(c.sigma, c.n);
                Output out;
                out.results = gs::Json{{"n", c.n}, {"ball", k.ball_volume}, {"kappa", k.sphere_area}, {"alpha", k.alpha}};
                try {
                    out.results["m_sigma"] = gs::to_json(gs::m_sigma(prof, c.n, c.quadrature_tol));
                } catch (const gs::Error& e) {
                    out.results["m_sigma"] = gs::Json{{"error", e.what()}};
                }
                out.results["class_K"] = gs::to_json(gs::check_class_K(prof, c.n));
                return emit("constants", c, cm->csv, out, 0);
            };
        });
    }
    {
        auto [s, cm] = sub("eval", "evaluate nu_t or mu_t at points");
        static std::string field = "nu", points;
        static std::uint64_t t = 1;
        s->add_option("--field", field, "nu | mu")->check(CLI::IsMember({"nu", "mu"}));
        s->add_option("--t", t, "nu: grid index (> m); mu: number of terms")->required();
        s->add_option("--points", points, "point file or inline x,y;x,y")->required();
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto fam = family_of(c);
                const auto pts = read_points(points, fam.dim());
                std::optional<gs::NuField> nu;
                std::optional<gs::MuField> mu;
                if (field == "nu") nu.emplace(fam, t);
                else mu.emplace(fam, t);
                Output out;
                for (std::size_t d = 0; d < fam.dim(); ++d) out.csv_header.push_back("x" + std::to_string(d + 1));
                out.csv_header.push_back("value");
                out.csv_header.push_back("singular");
                gs::Json rows = gs::Json::array();
                for (const auto& x : pts) {
                    const gs::FieldValue v = nu ? nu->eval(x) : mu->eval(x);
                    auto row = x;
                    row.push_back(v.value);
                    row.push_back(v.singular ? 1.0 : 0.0);
                    out.csv_rows.push_back(row);
                    rows.push_back(gs::Json{{"x", x}, {"value", v.value}, {"singular", v.singular}});
                }
                std::cout << gs::to_csv(out.csv_header, out.csv_rows);
                out.results = gs::Json{{"field", field}, {"t", t}, {"provenance", "exact"}, {"values", rows}};
                return emit("eval", c, cm->csv, out, fam.m());
            };
        });
    }
    {
        auto [s, cm] = sub("integrate", "integral of nu_t or mu_t over the domain or a cube");
        static std::string field = "nu", method = "exact", cube_center;
        static std::string cube_side = "1/2";
        static std::uint64_t t = 0;
        s->add_option("--field", field, "nu | mu")->check(CLI::IsMember({"nu", "mu"}));
        s->add_option("--t", t, "grid index for nu (> m), number of terms for mu")->required();
        s->add_option("--method", method, "exact | mc | both")->check(CLI::IsMember({"exact", "mc", "both"}));
        s->add_option("--cube", cube_center, "restrict nu to the cube with this centre (comma separated rationals)");
        s->add_option("--side", cube_side, "cube side");
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto fam = family_of(c);
                Output out;
                if (!cube_center.empty()) {
                    if (field != "nu") throw gs::Error(gs::ErrorCode::InvalidArgument, "--cube needs --field nu");
                    const auto center = split_rationals(cube_center);
                    if (center.size() != fam.dim()) throw gs::Error(gs::ErrorCode::InvalidArgument, "cube centre dimension");
                    gs::CubeIntegralOptions opts;
                    opts.seed = c.seed;
                    opts.tol = c.quadrature_tol;
                    const auto q = gs::make_cube(center, gs::parse_rational(cube_side));
                    const auto r = gs::integral_over_cube(gs::NuField(fam, t), q, opts);
                    const double bound = m_sigma_of(c, fam) * r.clipped_measure;
                    out.results = gs::to_json(r);
                    out.results["value"] = r.total;
                    out.results["error"] = r.half_width;
                    out.results["seed"] = c.seed;
                    out.results["m_sigma_bound"] = bound;
                    return emit("integrate", c, cm->csv, out, fam.m());
                }
                gs::Json res{{"field", field}, {"t", t}, {"method", method}};
                std::optional<double> exact;
                if (method != "mc") {
                    if (field == "nu") {
                        const auto r = gs::integral_nu_exact(gs::NuField(fam, t), c.quadrature_tol);
                        exact = r.value;
                        res["exact"] = gs::to_json(r);
                        out.passed = out.passed && r.within_bound;
                    } else {
                        const auto r = gs::integral_mu_exact(gs::MuField(fam, t), c.quadrature_tol);
                        exact = r.value;
                        res["exact"] = gs::to_json(r);
                        out.passed = out.passed && r.within_bound;
                    }
                    res["value"] = *exact;
                    res["error"] = 0.0;
                    res["verdict"] = "exact";
                }
                if (method != "exact") {
                    gs::MeasureEstimate e;
                    if (field == "nu") {
                        e = gs::mc_integrate_nu(gs::NuField(fam, t), c.samples, c.seed);
                    } else {
                        const gs::MuField mu(fam, t);
                        e = gs::mc_integrate(
                            gs::BatchField([&mu](const gs::simd::PointBatch& b, std::vector<double>& v,
                                                 std::vector<std::uint8_t>& sg) { mu.eval_batch(b, v, sg); }),
                            fam.domain(), c.samples, c.seed);
                    }
                    res["mc"] = gs::to_json(e);
                    if (exact) {
                        res["mc_covers_exact"] = e.covers(*exact);
                        out.passed = out.passed && e.covers(*exact);
                    } else {
                        res["value"] = e.value;
                        res["error"] = e.half_width;
                        res["verdict"] = "mc";
                    }
                }
                res["seed"] = c.seed;
                out.results = res;
                return emit("integrate", c, cm->csv, out, fam.m());
            };
        });
    }
    {
        auto [s, cm] = sub("witness", "constructive local unboundedness witness");
        static std::string center, rho0 = "1/5";
        static std::string levels = "1,10,100,1000";
        s->add_option("--center", center, "ball centre (comma separated rationals; default: bounding box centre)");
        s->add_option("--rho0", rho0, "ball radius");
        s->add_option("--C", levels, "comma separated levels");
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto fam = family_of(c);
                gs::RationalVec z;
                if (center.empty()) {
                    const auto bb = fam.domain().bounding_box();
                    for (std::size_t i = 0; i < fam.dim(); ++i) z.push_back((bb.lower[i] + bb.upper[i]) / 2);
                } else {
                    z = split_rationals(center);
                }
                gs::WitnessOptions opts;
                opts.samples = c.point_samples;
                opts.seed = c.seed;
                Output out;
                gs::Json rows = gs::Json::array();
                out.csv_header = {"C", "l", "delta", "sampled_min"};
                for (double C : split_doubles(levels, ',')) {
                    const auto w = gs::witness_unboundedness(fam, z, gs::parse_rational(rho0), C, opts);
                    out.passed = out.passed && w.verified;
                    rows.push_back(gs::to_json(w));
                    out.csv_rows.push_back({C, static_cast<double>(w.l), w.delta, w.sampled_min});
                }
                out.results = gs::Json{{"witnesses", rows}};
                return emit("witness", c, cm->csv, out, fam.m());
            };
        });
    }
    {
        auto [s, cm] = sub("exhaustion", "measure of shrunk ball unions");
        static std::uint64_t k = 1, t_first = 1;
        static double slack = 0.0;
        s->add_option("--k", k, "shrink factor");
        s->add_option("--t-first", t_first, "first grid offset");
        s->add_option("--slack", slack, "relative slack (default from config)");
        s->callback([&action, cm, s] {
            action = [cm, s] {
                const auto c = cm->resolve();
                const auto fam = family_of(c);
                const double sl = s->count("--slack") ? slack : c.exhaustion_slack;
                const auto r = gs::exhaustion_estimate(fam, k, fam.domain(), c.t_max, c.samples, c.seed, sl, t_first);
                Output out;
                out.results = gs::to_json(r);
                out.passed = r.satisfied_from.has_value();
                out.csv_header = {"t", "estimate", "half_width", "exact_union_measure", "bound"};
                for (std::size_t i = 0; i < r.estimates.size(); ++i) {
                    out.csv_rows.push_back({static_cast<double>(r.t_first + i), r.estimates[i].value,
                                            r.estimates[i].half_width, r.exact[i], r.bound});
                }
                return emit("exhaustion", c, cm->csv, out, fam.m());
            };
        });
    }
    {
        auto [s, cm] = sub("residual", "measure left uncovered by the shrunk ball unions");
        static std::uint64_t k = 1;
        s->add_option("--k", k, "shrink factor");
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto fam = family_of(c);
                const auto r = gs::exhaustion_residual(fam, k, c.t_max, c.samples, c.seed);
                Output out;
                out.results = gs::to_json(r);
                out.passed = r.monotone;
                out.csv_header = {"t_max", "residual", "half_width"};
                for (std::size_t i = 0; i < r.table.size(); ++i) {
                    out.csv_rows.push_back({static_cast<double>(i + 1), r.table[i].value, r.table[i].half_width});
                }
                return emit("residual", c, cm->csv, out, fam.m());
            };
        });
    }
    {
        auto [s, cm] = sub("probe", "share of points where max_{s<=t} nu_{m+s} exceeds a ladder");
        static std::string ladder = "10,100,1000";
        s->add_option("--ladder", ladder, "comma separated thresholds");
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto fam = family_of(c);
                const auto lad = split_doubles(ladder, ',');
                const auto r = gs::pointwise_unboundedness_probe(fam, c.point_samples, c.t_max, lad, c.seed);
                Output out;
                out.results = gs::to_json(r);
                out.passed = r.monotone;
                out.csv_header = {"t"};
                for (double v : lad) out.csv_header.push_back("above_" + std::to_string(static_cast<long long>(v)));
                for (std::size_t t = 0; t < r.fractions.size(); ++t) {
                    std::vector<double> row{static_cast<double>(t + 1)};
                    row.insert(row.end(), r.fractions[t].begin(), r.fractions[t].end());
                    out.csv_rows.push_back(row);
                }
                return emit("probe", c, cm->csv, out, fam.m());
            };
        });
    }
    {
        auto [s, cm] = sub("majorant", "search for points where nu_{m+t} exceeds a candidate majorant");
        static std::string candidate = "max:5";
        s->add_option("--candidate", candidate, "max:<T0> (pointwise max of the first T0 fields) | const:<c>");
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto fam = family_of(c);
                gs::Majorant psi;
                const auto colon = candidate.find(':');
                const std::string kind = candidate.substr(0, colon);
                const std::string arg = colon == std::string::npos ? "" : candidate.substr(colon + 1);
                if (kind == "max") {
                    psi = gs::max_of_fields(fam, arg.empty() ? 5 : std::stoull(arg));
                } else if (kind == "const") {
                    const double level = arg.empty() ? 1e3 : std::stod(arg);
                    psi = [level](std::span<const double>) { return level; };
                } else {
                    throw gs::Error(gs::ErrorCode::InvalidArgument, "unknown candidate '" + candidate + "'");
                }
                const auto r = gs::majorant_nonexistence_report(fam, psi, candidate, c.point_samples, c.t_max, c.seed);
                Output out;
                out.results = gs::to_json(r);
                out.passed = r.first_violation.has_value();
                out.csv_header = {"t", "density"};
                for (std::size_t t = 0; t < r.density.size(); ++t) {
                    out.csv_rows.push_back({static_cast<double>(t + 1), r.density[t]});
                }
                return emit("majorant", c, cm->csv, out, fam.m());
            };
        });
    }
    {
        auto [s, cm] = sub("nonllambda", "shell-integral ladder for sigma F(sigma)");
        static double lambda = 1.0;
        static std::string transform = "logpow", ladder = "10,20,30,40";
        static std::uint64_t chain = 1000;
        s->add_option("--lambda", lambda, "exponent");
        s->add_option("--transform", transform, "logpow | power")->check(CLI::IsMember({"logpow", "power"}));
        s->add_option("--ladder", ladder, "comma separated j, eps = 2^-j");
        s->add_option("--chain-samples", chain, "points for the sampled chain inequality (lambda > 1)");
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto fam = family_of(c);
                const auto kind = transform == "power" ? gs::TransformKind::Power : gs::TransformKind::LogPower;
                const auto r = gs::non_Llambda_witness(fam, lambda, kind, split_ints(ladder), chain, 5, c.seed);
                Output out;
                out.results = gs::to_json(r);
                out.passed = r.strictly_increasing && r.verdict != gs::QuadratureVerdict::Converged && r.chain_violations == 0;
                for (const auto& q : r.inequalities) out.passed = out.passed && q.violations == 0;
                out.csv_header = {"j", "eps", "value", "increment"};
                for (const auto& row : r.ladder) {
                    out.csv_rows.push_back({static_cast<double>(row.j), row.eps, row.value, row.increment});
                }
                return emit("nonllambda", c, cm->csv, out, fam.m());
            };
        });
    }
    {
        auto [s, cm] = sub("gamma-check", "growth conditions, cube bounds and sandwich search");
        static double p = 2.0;
        static std::string lambdas = "0.5,1,2", cubes;
        static std::uint64_t nu_t0 = 5;
        s->add_option("--p", p, "growth exponent (> 1)");
        s->add_option("--lambda-ladder", lambdas, "comma separated lambdas for the sandwich search");
        s->add_option("--cubes", cubes, "cube file (box lines); default: centred cube of side 1/2");
        s->add_option("--nu-t0", nu_t0, "terms of the weight mu_{t0}");
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto fam = family_of(c);
                const auto f = gs::field_integrand_family(fam, nu_t0, p);
                gs::SampleOptions opts;
                opts.s_last = c.s_max;
                opts.x_samples = c.point_samples;
                opts.seed = c.seed;
                const auto a = gs::check_a_conditions(f, opts);
                std::vector<gs::Box> qs;
                if (cubes.empty()) {
                    const auto bb = fam.domain().bounding_box();
                    gs::RationalVec z;
                    for (std::size_t i = 0; i < fam.dim(); ++i) z.push_back((bb.lower[i] + bb.upper[i]) / 2);
                    qs.push_back(gs::make_cube(z, gs::Rational(1, 2)));
                } else {
                    qs = read_cubes(cubes, fam.dim());
                }
                gs::CubeIntegralOptions copts;
                copts.seed = c.seed;
                copts.tol = c.quadrature_tol;
                const auto b = gs::check_b_conditions(fam, qs, c.s_max, c.cube_slack, copts);
                const auto sw = gs::sandwich_violation(f, split_doubles(lambdas, ','), opts, true);
                Output out;
                gs::Json probes = gs::Json::array();
                for (const auto& pr : sw) probes.push_back(gs::to_json(pr));
                out.results = gs::Json{{"nu", f.nu_description},
                                       {"p", p},
                                       {"a_conditions", gs::to_json(a)},
                                       {"b_conditions", gs::to_json(b)},
                                       {"sandwich", probes}};
                out.passed = a.passed() && b.passed();
                out.csv_header = {"lambda", "derived_bound", "hit_count"};
                for (const auto& pr : sw) out.csv_rows.push_back({pr.lambda, pr.derived_bound, static_cast<double>(pr.hit_count)});
                return emit("gamma-check", c, cm->csv, out, fam.m());
            };
        });
    }
    {
        auto [s, cm] = sub("verify-all", "run the full acceptance suite");
        s->callback([&action, cm] {
            action = [cm] {
                const auto c = cm->resolve();
                const auto r = gs::verify_all(c);
                for (const auto& cr : r.criteria) {
                    std::cout << (cr.status == gs::Status::Pass ? "PASS" : cr.status == gs::Status::Fail ? "FAIL" : "SKIP")
                              << (cr.id < 10 ? "   " : "  ") << cr.id << "  " << cr.name << "\n";
                    for (const auto& w : cr.warnings) std::cout << "      warning: " << w << "\n";
                }
                const auto dir = gs::output_dir(c);
                gs::write_text(dir / "verify-all.json", gs::dump(r.report));
                std::cout << "verify-all: " << (r.passed() ? "ok" : "assertion failed") << " -> "
                          << (dir / "verify-all.json").string() << "\n";
                return r.passed() ? kExitOk : kExitFailed;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        return action();
    } catch (const gs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const bool usage = e.code() == gs::ErrorCode::ParseError || e.code() == gs::ErrorCode::InvalidArgument;
        return usage ? kExitUsage : kExitFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
