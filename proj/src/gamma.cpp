#include "gridsing/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "gridsing/error.hpp"
#include "gridsing/montecarlo.hpp"
#include "gridsing/rng.hpp"

namespace gridsing {

void IntegrandFamily::validate() const {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "c1 and c2 must be positive");
    if (form == IntegrandForm::FieldPower) {
        if (!(p >= 2.0)) throw Error(ErrorCode::InvalidArgument, "this integrand family needs p >= 2");
        if (!nu || !psi) throw Error(ErrorCode::InvalidArgument, "weight and sequence must be set");
    } else if (!custom) {
        throw Error(ErrorCode::InvalidArgument, "custom integrand is not set");
    }
}

IntegrandFamily field_integrand_family(const FieldFamily& family, GridIndex nu_t0, double p) {
    IntegrandFamily f;
    f.form = IntegrandForm::FieldPower;
    f.p = p;
    f.region = family.domain();
    f.grid = family;
    auto mu = std::make_shared<const MuField>(family, nu_t0);
    f.nu = [mu](std::span<const double> x) { return mu->eval(x).value; };
    auto cache = std::make_shared<std::vector<std::unique_ptr<NuField>>>();
    auto lock = std::make_shared<std::mutex>();
    f.psi = [family, cache, lock](std::uint64_t s, std::span<const double> x) {
        const NuField* field = nullptr;
        {
            std::lock_guard g(*lock);
            if (cache->size() < s + 1) cache->resize(s + 1);
            auto& slot = (*cache)[s];
            if (!slot) slot = std::make_unique<NuField>(family, family.m() + s);
            field = slot.get();
        }
        return field->eval(x).value;
    };
    f.nu_description = "mu_" + std::to_string(nu_t0);
    f.validate();
    return f;
}

namespace {

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double field_integrand_value(double nu, double psi, double r, double p) {
    if (r == 0.0) return 0.0;
    return nu * std::pow(r, p) + std::pow(nu, (p - 1.0) / p) * std::pow(psi, 1.0 / p) * std::pow(r, p - 1.0);
}

}  // namespace

double eval_f(const IntegrandFamily& family, std::uint64_t s, std::span<const double> x, std::span<const double> xi) {
    if (!family.region.contains(x)) throw Error(ErrorCode::OutsideDomain, "integrand evaluated outside the domain");
    if (family.form == IntegrandForm::Custom) return family.custom(s, x, xi);
    return field_integrand_value(family.nu(x), family.psi(s, x), norm(xi), family.p);
}

namespace {

void draw_in_region(const RegionSampler& sampler, const CounterRng& rng, std::uint64_t i, std::vector<double>& x) {
    std::uint32_t attempt = 0;
    do {
        sampler.draw(x, rng, i, attempt++);
    } while (!sampler.inside(x) && attempt < 1024);
}

void draw_xi(const CounterRng& rng, std::uint64_t i, std::uint32_t base, double lo, double hi, std::vector<double>& xi) {
    double nrm = 0.0;
    for (std::size_t d = 0; d < xi.size(); ++d) {
        xi[d] = rng.normal(i, base + static_cast<std::uint32_t>(d));
        nrm += xi[d] * xi[d];
    }
    nrm = std::sqrt(nrm);
    const double mag = lo * std::pow(hi / lo, rng.uniform(i, 2 * base + 99));
    for (auto& v : xi) v *= mag / nrm;
}

std::string verdict(std::uint64_t violations) { return violations == 0 ? "consistent" : "violated"; }

}  // namespace

AConditionsReport check_a_conditions(const IntegrandFamily& family, const SampleOptions& opts) {
    family.validate();
    const std::size_t n = family.region.dim();
    AConditionsReport r;
    r.c1 = family.c1;
    r.c2 = family.c2;
    r.measurability.status = "by construction";
    r.measurability.detail = "f is a composition of measurable pieces; not testable by sampling";

    RegionSampler sampler(family.region);
    const CounterRng rng(opts.seed, 0x61);
    const std::uint64_t span = opts.s_last - opts.s_first + 1;
    std::vector<double> x(n), xi1(n), xi2(n), mid(n);
    for (std::uint64_t i = 0; i < opts.x_samples; ++i) {
        const std::uint64_t s = opts.s_first + i % span;
        draw_in_region(sampler, rng, i, x);
        draw_xi(rng, i, 40, opts.xi_min, opts.xi_max, xi1);
        draw_xi(rng, i, 60, opts.xi_min, opts.xi_max, xi2);
        for (std::size_t d = 0; d < n; ++d) mid[d] = 0.5 * (xi1[d] + xi2[d]);

        double nu = 0.0, psi = 0.0;
        if (family.form == IntegrandForm::FieldPower) {
            nu = family.nu(x);
            psi = family.psi(s, x);
        } else {
            nu = family.nu ? family.nu(x) : 1.0;
            psi = family.psi ? family.psi(s, x) : 1.0;
        }
        auto f = [&](const std::vector<double>& v) {
            if (family.form == IntegrandForm::Custom) return family.custom(s, x, v);
            return field_integrand_value(nu, psi, norm(v), family.p);
        };
        const double f1 = f(xi1), f2 = f(xi2), fm = f(mid);
        const double avg = 0.5 * (f1 + f2);
        r.convexity.samples++;
        if (fm > avg + 1e-12 * std::abs(avg)) r.convexity.violations++;

        for (const auto* v : {&xi1, &xi2, &mid}) {
            const double fv = v == &xi1 ? f1 : (v == &xi2 ? f2 : fm);
            const double power = nu * std::pow(norm(*v), family.p);
            r.lower_bound.samples++;
            r.upper_bound.samples++;
            if (fv < family.c1 * power - psi) r.lower_bound.violations++;
            if (fv > family.c2 * power + psi) r.upper_bound.violations++;
        }
    }
    r.convexity.status = verdict(r.convexity.violations);
    r.convexity.detail = "midpoint convexity in xi";
    r.lower_bound.status = verdict(r.lower_bound.violations);
    r.lower_bound.detail = "f >= c1 nu |xi|^p - psi_s";
    r.upper_bound.status = verdict(r.upper_bound.violations);
    r.upper_bound.detail = "f <= c2 nu |xi|^p + psi_s";
    return r;
}

bool BConditionsReport::passed() const {
    if (nonnegative.violations != 0 || integrable.violations != 0) return false;
    return std::all_of(cubes.begin(), cubes.end(), [](const CubeSeries& c) { return c.passed; });
}

BConditionsReport check_b_conditions(const FieldFamily& family, const std::vector<Box>& cubes, std::uint64_t s_max,
                                     double slack, const CubeIntegralOptions& opts) {
    if (s_max < 1) throw Error(ErrorCode::InvalidArgument, "s_max must be >= 1");
    BConditionsReport r;
    r.slack = slack;
    const MSigma ms = m_sigma(family.profile(), family.dim(), opts.tol);
    r.m_sigma = ms.value;

    const MembershipReport membership = check_class_K(family.profile(), family.dim());
    r.nonnegative.samples = membership.probe.grid_points;
    r.nonnegative.violations = membership.lower_bound.violations.size() +
                               (membership.lower_bound.verdict == Evidence::Violated && membership.lower_bound.violations.empty());
    r.nonnegative.status = verdict(r.nonnegative.violations);
    r.nonnegative.detail = "psi_s >= 1 since sigma >= 1 on [0,1]: " + membership.lower_bound.detail;

    for (std::uint64_t s = 1; s <= s_max; ++s) {
        const NuIntegral in = integral_nu_exact(NuField(family, family.m() + s), opts.tol);
        r.integrable.samples++;
        if (!std::isfinite(in.value) || !in.within_bound) r.integrable.violations++;
    }
    r.integrable.status = verdict(r.integrable.violations);
    r.integrable.detail = "closed-form L1 norm <= M_sigma meas Omega";

    r.s_first = s_max / 2 + 1;
    r.s_last = s_max;
    for (const auto& q : cubes) {
        CubeSeries cs;
        cs.cube = q;
        cs.clipped_measure = to_double(family.domain().clipped_to(q).measure());
        cs.bound = ms.value * cs.clipped_measure * (1.0 + slack);
        for (std::uint64_t s = r.s_first; s <= r.s_last; ++s) {
            const CubeIntegral ci = integral_over_cube(NuField(family, family.m() + s), q, opts);
            cs.values.push_back(ci.total);
            cs.half_widths.push_back(ci.half_width);
            cs.max_value = std::max(cs.max_value, ci.total);
        }
        cs.passed = cs.max_value <= cs.bound;
        r.cubes.push_back(std::move(cs));
    }
    return r;
}

std::vector<SandwichProbe> sandwich_violation(const IntegrandFamily& family, const std::vector<double>& lambdas,
                                              const SampleOptions& opts, bool node_biased) {
    family.validate();
    if (family.form != IntegrandForm::FieldPower) {
        throw Error(ErrorCode::InvalidArgument, "sandwich search needs the nu/psi integrand family");
    }
    constexpr std::size_t kMaxHits = 16;
    const std::size_t n = family.region.dim();
    std::vector<SandwichProbe> out;
    for (double lam : lambdas) {
        SandwichProbe p;
        p.lambda = lam;
        p.derived_bound = std::pow(4.0 * lam, family.p);
        out.push_back(p);
    }
    const bool biased = node_biased && family.grid.has_value();
    RegionSampler sampler(family.region);
    const CounterRng rng(opts.seed, 0x53);
    const std::uint64_t span = opts.s_last - opts.s_first + 1;
    double max_ratio = 0.0;
    std::vector<double> x(n), theta(n);
    for (std::uint64_t i = 0; i < opts.x_samples; ++i) {
        const std::uint64_t s = opts.s_first + i % span;
        if (biased) {
            const GridIndex T = family.grid->m() + s;
            const auto nodes = family.grid->nodes(T);
            const auto pick = static_cast<std::size_t>(rng.uniform(i, 0) * static_cast<double>(nodes->count()));
            const auto y = nodes->nodes()[std::min(pick, nodes->count() - 1)].coords_double();
            double nrm = 0.0;
            for (std::size_t d = 0; d < n; ++d) {
                theta[d] = rng.normal(i, static_cast<std::uint32_t>(d + 1));
                nrm += theta[d] * theta[d];
            }
            nrm = std::sqrt(nrm);
            const double radius = 0.5 / static_cast<double>(T) * std::pow(10.0, -6.0 * rng.uniform(i, 1));
            for (std::size_t d = 0; d < n; ++d) x[d] = y[d] + radius * theta[d] / nrm;
            if (!family.region.contains(std::span<const double>(x))) continue;
        } else {
            draw_in_region(sampler, rng, i, x);
        }
        const double ratio = family.psi(s, x) / family.nu(x);
        max_ratio = std::max(max_ratio, ratio);
        for (auto& p : out) {
            if (!(ratio > p.derived_bound)) continue;
            ++p.hit_count;
            if (!p.first_s || s < *p.first_s) p.first_s = s;
            if (p.hits.size() < kMaxHits) p.hits.push_back({s, x, ratio});
        }
    }
    for (auto& p : out) {
        if (p.hit_count > 0) {
            p.note = "violations found";
        } else if (max_ratio <= 1.0) {
            p.note = "psi_s never exceeded nu on the samples; the sequence shows no unboundedness";
        } else {
            p.note = "not found at horizon s <= " + std::to_string(opts.s_last);
        }
    }
    return out;
}

}  // namespace gridsing
