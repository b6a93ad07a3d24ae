#include "gridsing/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "gridsing/error.hpp"
#include "gridsing/grid.hpp"

namespace gridsing {

const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Skipped: return "skipped";
    }
    return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

Status status_of(bool ok) { return ok ? Status::Pass : Status::Fail; }

FieldFamily config_family(const RunConfig& c) {
    return FieldFamily(c.load_domain(), profile_by_name(c.sigma, c.n));
}

RationalVec domain_center(const Domain& d) {
    const Box bb = d.bounding_box();
    RationalVec z;
    for (std::size_t i = 0; i < d.dim(); ++i) z.push_back((bb.lower[i] + bb.upper[i]) / 2);
    return z;
}

bool horizon_short(CriterionResult& r, GridIndex needed, const RunConfig& c) {
    if (c.t_max >= needed) return false;
    r.status = Status::Skipped;
    r.warnings.push_back("insufficient horizon: t_max = " + std::to_string(c.t_max) + " < " + std::to_string(needed));
    return true;
}

// Brute force over candidate index pairs of the unit square.
std::set<std::pair<std::int64_t, std::int64_t>> square_nodes_oracle(std::int64_t t) {
    std::set<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t i = -1; i <= t + 1; ++i) {
        for (std::int64_t j = -1; j <= t + 1; ++j) {
            // Q = (i/t - 1/2t, i/t + 1/2t) x ..., inside (0,1)^2 iff 2i - 1 >= 0 and 2i + 1 <= 2t.
            if (2 * i - 1 >= 0 && 2 * i + 1 <= 2 * t && 2 * j - 1 >= 0 && 2 * j + 1 <= 2 * t) out.insert({i, j});
        }
    }
    return out;
}

CriterionResult node_counts(const RunConfig&) {
    CriterionResult r;
    const Domain sq = Domain::unit_cube(2);
    bool ok = true;
    Json rows = Json::array();
    for (std::int64_t t = 2; t <= 30; ++t) {
        const NodeSet set = enumerate_nodes(sq, static_cast<GridIndex>(t));
        std::set<std::pair<std::int64_t, std::int64_t>> got;
        for (const auto& y : set.nodes()) got.insert({y.index[0], y.index[1]});
        const auto oracle = square_nodes_oracle(t);
        const bool match = got == oracle && set.count() == static_cast<std::size_t>((t - 1) * (t - 1));
        ok = ok && match;
        rows.push_back(Json{{"t", t}, {"count", set.count()}, {"oracle", oracle.size()}, {"match", match}});
    }
    r.status = status_of(ok);
    r.details = Json{{"rows", rows}, {"provenance", "exact"}};
    return r;
}

CriterionResult uniform_bound(const RunConfig& c) {
    CriterionResult r;
    r.evidence = true;
    bool ok = true;
    std::uint64_t misses = 0;
    Json rows = Json::array();
    const std::vector<std::string> profiles{"sigma1", "loglog"};
    for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
        const std::string& name = profiles[pi];
        for (std::size_t n : {2u, 3u}) {
            const FieldFamily fam(Domain::unit_cube(n), profile_by_name(name, n));
            const double M = c.m_sigma_override ? *c.m_sigma_override : m_sigma(fam.profile(), n, c.quadrature_tol).value;
            for (GridIndex t = fam.m() + 1; t <= fam.m() + 10; ++t) {
                const NuField field(fam, t);
                const NuIntegral ex = integral_nu_exact(field, c.quadrature_tol);
                const double bound = M * fam.domain_measure();
                const auto stream = static_cast<std::uint32_t>((pi << 16) | (n << 8) | t);
                const MeasureEstimate mc = mc_integrate_nu(field, c.samples, c.seed, stream);
                const bool within = ex.value <= bound;
                const bool covered = mc.covers(ex.value);
                ok = ok && within && covered;
                misses += !covered;
                rows.push_back(Json{{"profile", name},
                                    {"n", n},
                                    {"t", t},
                                    {"exact", ex.value},
                                    {"bound", bound},
                                    {"within_bound", within},
                                    {"mc", to_json(mc)},
                                    {"mc_covers_exact", covered}});
            }
        }
    }
    r.status = status_of(ok);
    r.details = Json{{"rows", rows}, {"misses", misses}, {"expected_misses", 0.05 * static_cast<double>(rows.size())}};
    return r;
}

CriterionResult m_sigma_one(const RunConfig&) {
    CriterionResult r;
    const SigmaProfile s1 = builtin_sigma1();
    const MSigma closed = m_sigma(s1, 2);
    QuadratureOptions opts;
    opts.tol = 1e-12;
    const QuadratureResult q = radial_quadrature(s1, 2, 0.0, opts);
    const double via_quadrature = s1(1.0) + 2.0 * q.value;
    const bool ok = closed.value == 3.0 && std::abs(via_quadrature - 3.0) <= 1e-10 &&
                    q.verdict == QuadratureVerdict::Converged;
    r.status = status_of(ok);
    r.details = Json{{"closed_form", to_json(closed)},
                     {"quadrature", to_json(q)},
                     {"m_sigma_quadrature", via_quadrature},
                     {"difference", via_quadrature - 3.0}};
    return r;
}

CriterionResult mu_monotone(const RunConfig& c) {
    CriterionResult r;
    r.evidence = true;
    const FieldFamily fam = config_family(c);
    constexpr GridIndex kT = 10;
    const MuField mu(fam, kT + 1);
    RegionSampler sampler(fam.domain());
    const CounterRng rng(c.seed, 0x34);
    std::uint64_t below_one = 0, not_increasing = 0, singular = 0;
    std::vector<double> x(fam.dim());
    for (std::uint64_t i = 0; i < c.point_samples; ++i) {
        std::uint32_t attempt = 0;
        do {
            sampler.draw(x, rng, i, attempt++);
        } while (!sampler.inside(x) && attempt < 1024);
        RationalVec q;
        for (double v : x) q.push_back(from_double(v));
        double partial = 0.0;
        bool sing = false;
        for (GridIndex k = 1; k <= kT + 1; ++k) {
            const FieldValue v = mu.terms()[k - 1].eval(std::span<const Rational>(q));
            sing = sing || v.singular;
            const double kk = static_cast<double>(k);
            const double next = partial + v.value / (kk * kk);
            if (k >= 2 && !(next > partial)) ++not_increasing;
            if (k <= kT && !(next >= 1.0)) ++below_one;
            partial = next;
        }
        singular += sing;
    }
    bool norms_ok = true;
    Json norms = Json::array();
    for (GridIndex t = 1; t <= kT; ++t) {
        const MuIntegral in = integral_mu_exact(MuField(fam, t), c.quadrature_tol);
        norms_ok = norms_ok && in.within_bound;
        norms.push_back(Json{{"t", t}, {"value", in.value}, {"bound", in.bound}, {"within_bound", in.within_bound}});
    }
    r.status = status_of(below_one == 0 && not_increasing == 0 && norms_ok);
    r.details = Json{{"points", c.point_samples}, {"below_one", below_one}, {"not_increasing", not_increasing},
                     {"singular_points", singular}, {"norms", norms}};
    return r;
}

CriterionResult witness(const RunConfig& c) {
    CriterionResult r;
    r.evidence = true;
    const FieldFamily fam = config_family(c);
    const RationalVec z = domain_center(fam.domain());
    const Rational rho0(1, 5);
    const GridIndex expected_l =
        static_cast<GridIndex>(floor(Rational(Rational(static_cast<unsigned long>(fam.dim())) / rho0)).get_ui()) + 1;
    WitnessOptions opts;
    opts.samples = c.point_samples;
    opts.seed = c.seed;
    bool ok = true;
    Json rows = Json::array();
    for (double C : {1.0, 10.0, 100.0, 1000.0}) {
        try {
            const WitnessReport w = witness_unboundedness(fam, z, rho0, C, opts);
            ok = ok && w.verified && w.l == expected_l && w.sampled_min > C + 1.0;
            rows.push_back(to_json(w));
        } catch (const Error& e) {
            ok = false;
            rows.push_back(Json{{"target_C", C}, {"error", e.what()}});
        }
    }
    r.status = status_of(ok);
    r.details = Json{{"expected_l", expected_l}, {"witnesses", rows}};
    return r;
}

CriterionResult exhaustion(const RunConfig& c) {
    CriterionResult r;
    r.evidence = true;
    constexpr GridIndex kFrom = 20;
    if (horizon_short(r, kFrom, c)) return r;
    const FieldFamily fam = config_family(c);
    bool ok = true;
    Json rows = Json::array();
    for (std::uint64_t k : {1u, 2u}) {
        const ExhaustionReport ex =
            exhaustion_estimate(fam, k, fam.domain(), c.t_max, c.samples, c.seed, c.exhaustion_slack, kFrom);
        const double target = ex.bound * (1.0 - c.exhaustion_slack);
        std::vector<GridIndex> failing;
        for (std::size_t i = 0; i < ex.estimates.size(); ++i) {
            if (!(ex.estimates[i].value > target - ex.estimates[i].half_width)) failing.push_back(kFrom + i);
        }
        ok = ok && failing.empty();
        Json j = to_json(ex);
        j["target"] = target;
        j["failing_t"] = failing;
        rows.push_back(j);
    }
    r.status = status_of(ok);
    r.details = Json{{"reports", rows}};
    return r;
}

CriterionResult residual(const RunConfig& c) {
    CriterionResult r;
    r.evidence = true;
    constexpr GridIndex kHorizon = 50;
    if (horizon_short(r, kHorizon, c)) return r;
    const FieldFamily fam = config_family(c);
    const ResidualReport res = exhaustion_residual(fam, 1, kHorizon, c.samples, c.seed);
    const bool ok = res.monotone && res.final().value < 0.02;
    r.status = status_of(ok);
    r.details = to_json(res);
    r.details["threshold"] = 0.02;
    return r;
}

CriterionResult probe(const RunConfig& c) {
    CriterionResult r;
    r.evidence = true;
    constexpr GridIndex kT = 50;
    if (horizon_short(r, kT, c)) return r;
    const FieldFamily fam = config_family(c);
    const ProbeTable p = pointwise_unboundedness_probe(fam, c.point_samples, kT, {1e3}, c.seed);
    const double last = p.fractions.back().front();
    r.status = status_of(p.monotone && last > 0.9);
    r.details = to_json(p);
    r.details["fraction_at_T"] = last;
    r.details["threshold"] = 0.9;
    return r;
}

CriterionResult cube_bound(const RunConfig& c) {
    CriterionResult r;
    r.evidence = true;
    constexpr GridIndex kLo = 20, kHi = 40;
    if (horizon_short(r, kHi, c)) return r;
    const FieldFamily fam = config_family(c);
    const Box q = make_cube(domain_center(fam.domain()), Rational(1, 2));
    const double M = c.m_sigma_override ? *c.m_sigma_override : m_sigma(fam.profile(), fam.dim(), c.quadrature_tol).value;
    CubeIntegralOptions opts;
    opts.seed = c.seed;
    opts.tol = c.quadrature_tol;
    double best = 0.0;
    double clipped = 0.0;
    Json rows = Json::array();
    for (GridIndex t = kLo + 1; t <= kHi; ++t) {
        const CubeIntegral ci = integral_over_cube(NuField(fam, fam.m() + t), q, opts);
        best = std::max(best, ci.total);
        clipped = ci.clipped_measure;
        Json j = to_json(ci);
        j["t"] = t;
        rows.push_back(j);
    }
    const double bound = M * clipped * (1.0 + c.cube_slack);
    r.status = status_of(best <= bound);
    r.details = Json{{"cube", to_json(q)}, {"max", best}, {"bound", bound}, {"series", rows}};
    return r;
}

CriterionResult shell_ladder(const RunConfig&) {
    CriterionResult r;
    const FieldFamily fam(Domain::unit_cube(2), builtin_loglog(2));
    const std::vector<int> js{10, 20, 30, 40};
    const NonIntegrabilityReport star = non_Llambda_witness(fam, 1.0, TransformKind::LogPower, js, 0);
    bool diverging = star.strictly_increasing;
    const double first_inc = star.ladder[1].increment;
    for (std::size_t i = 1; i < star.ladder.size(); ++i) {
        diverging = diverging && star.ladder[i].increment >= std::max(1e-6, 0.25 * first_inc);
    }
    const NuField field(fam, fam.m() + 1);
    Json plain = Json::array();
    double prev = 0.0, last_inc = 0.0;
    for (std::size_t i = 0; i < js.size(); ++i) {
        const ShellIntegral s = shell_integral(field, ProfileTransform::identity(), std::ldexp(1.0, -js[i]));
        last_inc = i == 0 ? 0.0 : s.value - prev;
        prev = s.value;
        plain.push_back(Json{{"j", js[i]}, {"value", s.value}, {"increment", last_inc}});
    }
    const bool converging = std::abs(last_inc) < 1e-6;
    r.status = status_of(diverging && converging);
    r.details = Json{{"transformed", to_json(star)},
                     {"plain", plain},
                     {"transformed_diverges", diverging},
                     {"plain_flattens", converging},
                     {"plain_last_increment", last_inc}};
    return r;
}

CriterionResult gamma_checks(const RunConfig& c) {
    CriterionResult r;
    r.evidence = true;
    const FieldFamily fam = config_family(c);
    const IntegrandFamily f = field_integrand_family(fam, 5, 2.0);
    SampleOptions opts;
    opts.x_samples = c.point_samples;
    opts.s_last = c.s_max;
    opts.seed = c.seed;
    const AConditionsReport a = check_a_conditions(f, opts);
    const auto probes = sandwich_violation(f, {1.0}, opts, true);
    const bool ok = a.lower_bound.violations == 0 && a.upper_bound.violations == 0 && probes.front().hit_count > 0;
    r.status = status_of(ok);
    r.details = Json{{"a_conditions", to_json(a)}, {"sandwich", to_json(probes.front())}, {"nu", f.nu_description}};
    return r;
}

struct CriterionInfo {
    const char* name;
    const char* anchor;
    CriterionResult (*run)(const RunConfig&);
};

const CriterionInfo kInfo[] = {
    {"node counts", "node sets X_t of the open unit square", node_counts},
    {"uniform L1 bound", "integral of nu_t bounded by M_sigma meas Omega", uniform_bound},
    {"M_sigma of sigma1", "M_sigma = sigma(1) + n int_0^1 sigma r^{n-1} dr", m_sigma_one},
    {"monotone partial sums", "mu_t >= 1, increasing in t, L1 norm <= 2 M_sigma meas Omega", mu_monotone},
    {"local unboundedness witness", "mu_l > C + 1 on a punctured ball inside G", witness},
    {"shrunk ball lower bound", "meas(G cap B_t^(k)) >= alpha k^-n meas G eventually", exhaustion},
    {"exhaustion residual", "shrunk ball unions exhaust Omega up to measure zero", residual},
    {"pointwise unboundedness", "nu_{m+t}(x) unbounded in t for almost every x", probe},
    {"cube limsup bound", "limsup of cube integrals <= M_sigma meas(Q cap Omega)", cube_bound},
    {"non-integrability ladder", "sigma F(sigma) r^{n-1} not integrable for the loglog profile", shell_ladder},
    {"growth conditions and sandwich", "two-sided growth bounds hold, psi_s <= (4 lambda)^p nu fails", gamma_checks},
    {"determinism", "identical configuration and seed give identical reports", nullptr},
};

}  // namespace

CriterionResult run_criterion(int id, const RunConfig& config) {
    if (id < 1 || id > kCriteria - 1) throw Error(ErrorCode::InvalidArgument, "criterion id must lie in 1..11");
    const CriterionInfo& info = kInfo[id - 1];
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
        r = info.run(config);
    } catch (const Error& e) {
        r.status = Status::Fail;
        r.details = Json{{"error", e.what()}, {"code", to_string(e.code())}};
    }
    r.id = id;
    r.name = info.name;
    r.anchor = info.anchor;
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

Json to_json(const CriterionResult& r) {
    return Json{{"id", r.id},
                {"name", r.name},
                {"anchor", r.anchor},
                {"status", to_string(r.status)},
                {"kind", r.evidence ? "evidence" : "exact"},
                {"warnings", r.warnings},
                {"details", r.details}};
}

bool SuiteResult::passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.ok(); });
}

namespace {

Json results_json(const std::vector<CriterionResult>& rs) {
    Json a = Json::array();
    for (const auto& r : rs) a.push_back(to_json(r));
    return a;
}

}  // namespace

SuiteResult verify_all(const RunConfig& config) {
    config.validate();
    SuiteResult out;
    for (int id = 1; id < kCriteria; ++id) out.criteria.push_back(run_criterion(id, config));

    CriterionResult det;
    det.id = kCriteria;
    det.name = kInfo[kCriteria - 1].name;
    det.anchor = kInfo[kCriteria - 1].anchor;
    const auto t0 = Clock::now();
    std::vector<CriterionResult> again;
    for (int id = 1; id < kCriteria; ++id) again.push_back(run_criterion(id, config));
    const std::string first = dump(results_json(out.criteria));
    const std::string second = dump(results_json(again));
    det.status = status_of(first == second);
    det.details = Json{{"bytes", first.size()}, {"identical", first == second}};
    det.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.criteria.push_back(det);

    GridIndex m = 0;
    std::string profile = config.sigma;
    try {
        m = minimal_m(config.load_domain());
    } catch (const Error&) {
    }
    Json results{{"passed", out.passed()}, {"criteria", results_json(out.criteria)}};
    out.report = make_report("verify-all", config, m, profile, std::move(results));
    return out;
}

}  // namespace gridsing
