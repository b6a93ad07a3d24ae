#include "gridsing/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "gridsing/error.hpp"
#include "gridsing/grid.hpp"

namespace gridsing {

namespace {

double pow_int(double x, std::size_t n) {
    double r = 1.0;
    for (std::size_t i = 0; i < n; ++i) r *= x;
    return r;
}

// Estimate of scale * P(hit) from an exact hit count.
MeasureEstimate indicator_estimate(std::uint64_t hits, std::uint64_t total, double scale, std::uint64_t seed) {
    MeasureEstimate e;
    e.samples = total;
    e.seed = seed;
    if (total == 0) return e;
    const double p = static_cast<double>(hits) / static_cast<double>(total);
    e.value = scale * p;
    if (total > 1) {
        const double var = p * (1.0 - p) * static_cast<double>(total) / static_cast<double>(total - 1);
        e.half_width = 1.96 * scale * std::sqrt(var / static_cast<double>(total));
    }
    return e;
}

std::vector<NuField> fields_for(const FieldFamily& family, GridIndex first, GridIndex last) {
    std::vector<NuField> out;
    for (GridIndex t = first; t <= last; ++t) out.emplace_back(family, family.m() + t);
    return out;
}

}  // namespace

WitnessReport witness_unboundedness(const FieldFamily& family, std::span<const Rational> z, const Rational& rho0,
                                    double C, const WitnessOptions& opts) {
    const std::size_t n = family.dim();
    if (z.size() != n) throw Error(ErrorCode::InvalidArgument, "ball centre has the wrong dimension");
    if (rho0 <= 0) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
    if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "target level C must be positive");
    if (!family.domain().contains_open_box(make_cube(z, Rational(2 * rho0)))) {
        throw Error(ErrorCode::InvalidArgument, "ball is not contained in the domain");
    }

    WitnessReport r;
    r.target_C = C;
    r.center.assign(z.begin(), z.end());
    r.rho0 = rho0;
    r.l = static_cast<GridIndex>(floor(Rational(Rational(static_cast<unsigned long>(n)) / rho0)).get_ui()) + 1;
    const GridIndex T = family.m() + r.l;
    const Rational tt(static_cast<unsigned long>(T));

    r.node.t = T;
    for (std::size_t d = 0; d < n; ++d) r.node.index.push_back(round_half_up(Rational(z[d] * tt)).get_si());
    const RationalVec y = r.node.coords();
    const Rational h(1, 2 * static_cast<unsigned long>(T));
    Rational far_sq = 0;
    for (std::size_t d = 0; d < n; ++d) {
        const Rational a = y[d] - h - z[d];
        const Rational b = y[d] + h - z[d];
        far_sq += std::max(Rational(a * a), Rational(b * b));
    }
    if (far_sq > rho0 * rho0) throw Error(ErrorCode::ContainmentFailure, "grid cube around the centre is not inside G");
    if (!family.nodes(T)->contains(r.node.index)) {
        throw Error(ErrorCode::ContainmentFailure, "grid node of the witness is not in X_{m+l}");
    }

    const SigmaProfile& sigma = family.profile();
    const double ld = static_cast<double>(r.l);
    r.threshold = (C + 1.0) * ld * ld;
    const double log_span = std::log(opts.delta_span);
    auto passes = [&](double delta) {
        const std::size_t S = std::max<std::size_t>(opts.delta_samples, 2);
        for (std::size_t i = 0; i < S; ++i) {
            const double rho = delta * (1.0 - 1e-9) * std::exp(-log_span * static_cast<double>(i) / static_cast<double>(S - 1));
            if (!(sigma(rho) > r.threshold)) return false;
        }
        return true;
    };
    double delta = 0.5;
    std::size_t halvings = 1;
    while (!passes(delta)) {
        delta *= 0.5;
        if (++halvings > opts.probe_floor) {
            throw Error(ErrorCode::DeltaNotFound, "profile does not exceed (C+1) l^2 down to the probe floor");
        }
    }
    if (halvings > 1) {
        double lo = delta, hi = 2.0 * delta;
        for (std::size_t i = 0; i < opts.refine_steps; ++i) {
            const double mid = std::sqrt(lo * hi);
            (passes(mid) ? lo : hi) = mid;
        }
        delta = lo;
    }
    // Report the largest depth actually checked.
    r.delta = delta * (1.0 - 1e-9);
    r.region_radius = delta / (2.0 * static_cast<double>(T));
    r.core_radius = 1e-12 * r.region_radius;

    const MuField mu(family, r.l);
    const CounterRng rng(opts.seed, 0x57);
    const double limit = C + 1.0;
    struct Part {
        double min = std::numeric_limits<double>::infinity();
        std::uint64_t failures = 0;
    };
    auto parts = map_chunks<Part>(
        opts.samples,
        [&](std::uint64_t, std::uint64_t first, std::uint64_t last) {
            Part p;
            std::vector<double> theta(n);
            RationalVec x(n);
            for (std::uint64_t s = first; s < last; ++s) {
                double norm = 0.0;
                for (std::size_t d = 0; d < n; ++d) {
                    theta[d] = rng.normal(s, static_cast<std::uint32_t>(d + 1));
                    norm += theta[d] * theta[d];
                }
                norm = std::sqrt(norm);
                double rad = r.region_radius * std::pow(rng.uniform(s, 0), 1.0 / static_cast<double>(n));
                rad = std::clamp(rad, r.core_radius, r.region_radius * (1.0 - 1e-9));
                for (std::size_t d = 0; d < n; ++d) x[d] = y[d] + from_double(rad * theta[d] / norm);
                const FieldValue v = mu.eval(std::span<const Rational>(x));
                p.min = std::min(p.min, v.value);
                if (v.singular || !(v.value > limit)) ++p.failures;
            }
            return p;
        },
        256);
    r.sampled_min = std::numeric_limits<double>::infinity();
    for (const auto& p : parts) {
        r.sampled_min = std::min(r.sampled_min, p.min);
        r.failures += p.failures;
    }
    r.samples = opts.samples;
    r.verified = r.samples > 0 && r.failures == 0 && r.sampled_min > limit;
    return r;
}

ExhaustionReport exhaustion_estimate(const FieldFamily& family, std::uint64_t k, const Domain& region,
                                     GridIndex t_max, std::uint64_t samples, std::uint64_t seed, double slack,
                                     GridIndex t_first) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    if (t_first < 1 || t_max < t_first) throw Error(ErrorCode::InvalidArgument, "empty t range");
    const std::size_t n = family.dim();
    const auto consts = unit_ball_constants(n);
    ExhaustionReport r;
    r.k = k;
    r.alpha = consts.alpha;
    r.region_measure = region.empty() ? 0.0 : to_double(region.measure());
    r.bound = consts.alpha * r.region_measure / pow_int(static_cast<double>(k), n);
    r.slack = slack;
    r.t_first = t_first;

    const auto fields = fields_for(family, t_first, t_max);
    for (const auto& f : fields) {
        r.exact.push_back(static_cast<double>(f.nodes().count()) * consts.ball_volume /
                          pow_int(2.0 * static_cast<double>(f.t() * k), n));
    }
    RegionSampler sampler(region);
    const double cutoff = 1.0 / static_cast<double>(k);
    const CounterRng rng(seed, 0x45);
    using Hits = std::vector<std::uint64_t>;
    auto parts = map_chunks<Hits>(samples, [&](std::uint64_t, std::uint64_t first, std::uint64_t last) {
        Hits hits(fields.size(), 0);
        if (sampler.empty()) return hits;
        simd::PointBatch batch(n, last - first);
        sampler.fill(batch, rng, first);
        std::vector<std::uint8_t> inside(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i) inside[i] = sampler.inside(batch, i);
        std::vector<double> u;
        for (std::size_t j = 0; j < fields.size(); ++j) {
            fields[j].scaled_radius_batch(batch, u);
            for (std::size_t i = 0; i < batch.count; ++i) hits[j] += inside[i] && u[i] < cutoff;
        }
        return hits;
    });
    Hits total(fields.size(), 0);
    for (const auto& h : parts) {
        for (std::size_t j = 0; j < h.size(); ++j) total[j] += h[j];
    }
    const double scale = sampler.empty() ? 0.0 : sampler.box_volume();
    for (std::size_t j = 0; j < fields.size(); ++j) r.estimates.push_back(indicator_estimate(total[j], samples, scale, seed));

    const double target = r.bound * (1.0 - slack);
    for (std::size_t j = fields.size(); j-- > 0;) {
        if (r.estimates[j].value - r.estimates[j].half_width >= target) {
            r.satisfied_from = t_first + j;
        } else {
            break;
        }
    }
    return r;
}

ResidualReport exhaustion_residual(const FieldFamily& family, std::uint64_t k, GridIndex t_max,
                                   std::uint64_t samples, std::uint64_t seed) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    if (t_max < 1) throw Error(ErrorCode::InvalidArgument, "t_max must be >= 1");
    const std::size_t n = family.dim();
    const auto consts = unit_ball_constants(n);
    ResidualReport r;
    r.k = k;
    const auto fields = fields_for(family, 1, t_max);
    r.exact_first = family.domain_measure() - static_cast<double>(fields.front().nodes().count()) * consts.ball_volume /
                                                  pow_int(2.0 * static_cast<double>(fields.front().t() * k), n);

    RegionSampler sampler(family.domain());
    const double cutoff = 1.0 / static_cast<double>(k);
    const CounterRng rng(seed, 0x52);
    struct Part {
        std::vector<std::uint64_t> uncovered;
        bool monotone = true;
    };
    auto parts = map_chunks<Part>(samples, [&](std::uint64_t, std::uint64_t first, std::uint64_t last) {
        Part p;
        p.uncovered.assign(fields.size(), 0);
        simd::PointBatch batch(n, last - first);
        sampler.fill(batch, rng, first);
        std::vector<std::uint8_t> inside(batch.count), covered(batch.count, 0);
        for (std::size_t i = 0; i < batch.count; ++i) inside[i] = sampler.inside(batch, i);
        std::vector<double> u;
        for (std::size_t j = 0; j < fields.size(); ++j) {
            fields[j].scaled_radius_batch(batch, u);
            for (std::size_t i = 0; i < batch.count; ++i) {
                const std::uint8_t now = covered[i] | static_cast<std::uint8_t>(u[i] < cutoff);
                if (now < covered[i]) p.monotone = false;
                covered[i] = now;
                p.uncovered[j] += inside[i] && !now;
            }
        }
        return p;
    });
    std::vector<std::uint64_t> total(fields.size(), 0);
    for (const auto& p : parts) {
        r.monotone = r.monotone && p.monotone;
        for (std::size_t j = 0; j < total.size(); ++j) total[j] += p.uncovered[j];
    }
    for (std::size_t j = 0; j < total.size(); ++j) {
        if (j > 0 && total[j] > total[j - 1]) r.monotone = false;
        r.table.push_back(indicator_estimate(total[j], samples, sampler.box_volume(), seed));
    }
    return r;
}

ProbeTable pointwise_unboundedness_probe(const FieldFamily& family, std::uint64_t samples, GridIndex T,
                                         const std::vector<double>& ladder, std::uint64_t seed) {
    if (T < 1) throw Error(ErrorCode::InvalidArgument, "T must be >= 1");
    const std::size_t n = family.dim();
    ProbeTable r;
    r.T = T;
    r.ladder = ladder;
    r.samples = samples;
    const auto fields = fields_for(family, 1, T);
    RegionSampler sampler(family.domain());
    const CounterRng rng(seed, 0x50);
    using Counts = std::vector<std::uint64_t>;  // [t * rungs + rung]
    const std::size_t rungs = ladder.size();
    auto parts = map_chunks<Counts>(samples, [&](std::uint64_t, std::uint64_t first, std::uint64_t last) {
        Counts c(fields.size() * rungs, 0);
        simd::PointBatch batch(n, last - first);
        std::vector<std::uint8_t> inside(batch.count);
        sampler.fill(batch, rng, first);
        for (std::size_t i = 0; i < batch.count; ++i) {
            // Points of the bounding box outside the domain are redrawn.
            for (std::uint32_t attempt = 1; !sampler.inside(batch, i) && attempt < 1024; ++attempt) {
                std::vector<double> x(n);
                sampler.draw(x, rng, first + i, attempt);
                for (std::size_t d = 0; d < n; ++d) batch.coord(d)[i] = x[d];
            }
        }
        std::vector<double> running(batch.count, 0.0), values;
        std::vector<std::uint8_t> singular;
        for (std::size_t j = 0; j < fields.size(); ++j) {
            fields[j].eval_batch(batch, values, singular);
            for (std::size_t i = 0; i < batch.count; ++i) {
                running[i] = std::max(running[i], values[i]);
                for (std::size_t q = 0; q < rungs; ++q) c[j * rungs + q] += running[i] > ladder[q];
            }
        }
        return c;
    });
    Counts total(fields.size() * rungs, 0);
    for (const auto& c : parts) {
        for (std::size_t i = 0; i < c.size(); ++i) total[i] += c[i];
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
        std::vector<double> row;
        for (std::size_t q = 0; q < rungs; ++q) {
            if (j > 0 && total[j * rungs + q] < total[(j - 1) * rungs + q]) r.monotone = false;
            row.push_back(static_cast<double>(total[j * rungs + q]) / static_cast<double>(samples));
        }
        r.fractions.push_back(std::move(row));
    }
    return r;
}

MajorantReport majorant_nonexistence_report(const FieldFamily& family, const Majorant& psi, std::string name,
                                            std::uint64_t samples, GridIndex T, std::uint64_t seed) {
    if (T < 1) throw Error(ErrorCode::InvalidArgument, "T must be >= 1");
    const std::size_t n = family.dim();
    constexpr std::size_t kMaxExamples = 8;
    MajorantReport r;
    r.candidate = std::move(name);
    r.T = T;
    r.samples = samples;
    const auto fields = fields_for(family, 1, T);
    RegionSampler sampler(family.domain());
    const CounterRng rng(seed, 0x4D);

    simd::PointBatch batch(n, samples);
    std::vector<double> bound(samples);
    std::vector<double> x(n);
    for (std::uint64_t i = 0; i < samples; ++i) {
        std::uint32_t attempt = 0;
        do {
            sampler.draw(x, rng, i, attempt++);
        } while (!sampler.inside(x) && attempt < 1024);
        for (std::size_t d = 0; d < n; ++d) batch.coord(d)[i] = x[d];
        bound[i] = psi(x);
    }
    std::vector<double> values;
    std::vector<std::uint8_t> singular;
    for (std::size_t j = 0; j < fields.size(); ++j) {
        fields[j].eval_batch(batch, values, singular);
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < samples; ++i) {
            if (!(values[i] > bound[i])) continue;
            ++hits;
            if (r.examples.size() < kMaxExamples) {
                MajorantViolation v;
                v.t = j + 1;
                for (std::size_t d = 0; d < n; ++d) v.x.push_back(batch.coord(d)[i]);
                v.field = values[i];
                v.candidate = bound[i];
                r.examples.push_back(std::move(v));
            }
        }
        if (hits > 0 && !r.first_violation) r.first_violation = j + 1;
        r.density.push_back(static_cast<double>(hits) / static_cast<double>(samples));
    }
    return r;
}

Majorant max_of_fields(const FieldFamily& family, GridIndex T0) {
    auto fields = std::make_shared<const std::vector<NuField>>(fields_for(family, 1, T0));
    return [fields](std::span<const double> x) {
        double best = 0.0;
        for (const auto& f : *fields) best = std::max(best, f.eval(x).value);
        return best;
    };
}

std::vector<SampledInequality> loglog_transform_inequalities(std::size_t n, double lambda, std::uint64_t samples) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
    if (samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
    const SigmaProfile sigma = builtin_loglog(n);
    const ProfileTransform F = ProfileTransform::log_power(lambda);
    const double c = 1.0 - 2.0 / std::numbers::e;
    constexpr double kMaxLogL = 600.0;

    std::vector<SampledInequality> out(4);
    out[0].name = "F(sigma) > ln(1/(4 rho))^lambda";
    out[1].name = "ln(1/(4 rho)) > (1 - 2/e) ln(1/rho)";
    out[2].name = "(ln ln 1/rho)^2 < (4/lambda^2) (ln 1/rho)^lambda";
    out[3].name = "sigma F(sigma) rho^(n-1) > (lambda^2/rho) (1 - 2/e)^lambda / ln(1/rho)";
    std::vector<std::vector<bool>> ok(out.size(), std::vector<bool>(samples));
    std::vector<double> depth(samples);
    for (std::uint64_t i = 0; i < samples; ++i) {
        // ln L uniform on (1, 1 + kMaxLogL), so L > e.
        const double lnL = 1.0 + kMaxLogL * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
        const double L = std::exp(lnL);
        depth[i] = L;
        const double log_sigma = sigma.log_value_at_log(L);
        const double log_f = F.log_apply_log(log_sigma);
        const double log_quarter = L - std::log(4.0);
        ok[0][i] = log_f > lambda * std::log(log_quarter);
        ok[1][i] = log_quarter > c * L;
        ok[2][i] = 2.0 * std::log(lnL) < std::log(4.0 / (lambda * lambda)) + lambda * lnL;
        // Both sides multiplied by rho, in logs.
        const double lhs = sigma.log_radial_at_log(L, n) + log_f;
        const double rhs = 2.0 * std::log(lambda) + lambda * std::log(c) - lnL;
        ok[3][i] = lhs > rhs;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].samples = samples;
        for (std::uint64_t i = 0; i < samples; ++i) out[k].violations += !ok[k][i];
        std::optional<double> from;
        for (std::uint64_t i = samples; i-- > 0;) {
            if (!ok[k][i]) break;
            from = depth[i];
        }
        out[k].holds_from_L = from;
    }
    return out;
}

NonIntegrabilityReport non_Llambda_witness(const FieldFamily& family, double lambda, TransformKind kind,
                                           const std::vector<int>& ladder_j, std::uint64_t chain_samples,
                                           GridIndex chain_t, std::uint64_t seed) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
    if (kind == TransformKind::Power && !(lambda > 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "power transform needs lambda > 1");
    }
    NonIntegrabilityReport r;
    r.lambda = lambda;
    const ProfileTransform F =
        kind == TransformKind::LogPower ? ProfileTransform::log_power(lambda) : ProfileTransform::power(lambda - 1.0);
    r.transform = F.name();
    const NuField field(family, family.m() + 1);
    double prev = 0.0;
    r.strictly_increasing = true;
    for (std::size_t i = 0; i < ladder_j.size(); ++i) {
        LadderRow row;
        row.j = ladder_j[i];
        row.eps = std::ldexp(1.0, -ladder_j[i]);
        row.value = shell_integral(field, F, row.eps).value;
        row.increment = i == 0 ? 0.0 : row.value - prev;
        if (i > 0 && !(row.increment > 0.0)) r.strictly_increasing = false;
        prev = row.value;
        r.ladder.push_back(row);
    }
    r.verdict = radial_quadrature(transformed_profile(family.profile(), F), family.dim(), 0.0).verdict;
    if (kind == TransformKind::LogPower && family.profile().name() == "loglog") {
        r.inequalities = loglog_transform_inequalities(family.dim(), lambda);
    }

    if (lambda > 1.0 && chain_samples > 0) {
        const MuField mu(family, chain_t);
        RegionSampler sampler(family.domain());
        const CounterRng rng(seed, 0x4C);
        simd::PointBatch batch(family.dim(), chain_samples);
        std::vector<double> x(family.dim());
        for (std::uint64_t i = 0; i < chain_samples; ++i) {
            std::uint32_t attempt = 0;
            do {
                sampler.draw(x, rng, i, attempt++);
            } while (!sampler.inside(x) && attempt < 1024);
            for (std::size_t d = 0; d < x.size(); ++d) batch.coord(d)[i] = x[d];
        }
        std::vector<double> values;
        std::vector<std::uint8_t> singular;
        mu.eval_batch(batch, values, singular);
        for (double v : values) {
            if (!((lambda - 1.0) * std::log(v) < std::pow(v, lambda - 1.0))) ++r.chain_violations;
        }
        r.chain_samples = chain_samples;
    }
    return r;
}

}  // namespace gridsing
