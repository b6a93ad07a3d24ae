#include "gridsing/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gridsing/error.hpp"
#include "gridsing/grid.hpp"

namespace gridsing {

std::string MeasureEstimate::provenance() const {
    std::ostringstream os;
    os.precision(6);
    os << "mc(" << samples << ", " << seed << ", " << half_width << ")";
    return os.str();
}

void SampleStats::add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void SampleStats::merge(const SampleStats& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(o.count_);
    const double delta = o.mean_ - mean_;
    const double n = na + nb;
    mean_ += delta * nb / n;
    m2_ += o.m2_ + delta * delta * na * nb / n;
    count_ += o.count_;
}

double SampleStats::variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }

MeasureEstimate make_estimate(const SampleStats& stats, double scale, std::uint64_t seed) {
    MeasureEstimate e;
    e.samples = stats.count();
    e.seed = seed;
    e.value = scale * stats.mean();
    if (stats.count() > 0) {
        e.half_width = 1.96 * std::abs(scale) * std::sqrt(stats.variance() / static_cast<double>(stats.count()));
    }
    return e;
}

namespace {
std::atomic<std::size_t> g_workers{0};
}

std::size_t worker_count() {
    if (const std::size_t w = g_workers.load(); w > 0) return w;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void set_worker_count(std::size_t workers) { g_workers.store(workers); }

RegionSampler::RegionSampler(const Domain& region)
    : dim_(region.dim()), empty_(region.empty()), membership_(region) {
    if (empty_) return;
    const Box bb = region.bounding_box();
    volume_ = 1.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        lo_.push_back(to_double(bb.lower[d]));
        width_.push_back(to_double(bb.upper[d]) - lo_.back());
        volume_ *= width_.back();
    }
}

namespace {

constexpr std::uint32_t kPointComponentBase = 16;

std::uint32_t point_component(std::size_t dim, std::uint32_t attempt, std::size_t d) {
    return kPointComponentBase + attempt * static_cast<std::uint32_t>(dim) + static_cast<std::uint32_t>(d);
}

}  // namespace

void RegionSampler::fill(simd::PointBatch& batch, const CounterRng& rng, std::uint64_t first,
                         std::uint32_t attempt) const {
    for (std::size_t d = 0; d < dim_; ++d) {
        double* c = batch.coord(d);
        const auto comp = point_component(dim_, attempt, d);
        for (std::size_t i = 0; i < batch.count; ++i) c[i] = lo_[d] + width_[d] * rng.uniform(first + i, comp);
    }
}

void RegionSampler::draw(std::span<double> x, const CounterRng& rng, std::uint64_t sample,
                         std::uint32_t attempt) const {
    for (std::size_t d = 0; d < dim_; ++d) x[d] = lo_[d] + width_[d] * rng.uniform(sample, point_component(dim_, attempt, d));
}

namespace {

constexpr std::uint32_t kMaxRedraws = 64;

struct ChunkResult {
    SampleStats stats;
    std::uint64_t resampled = 0;
};

}  // namespace

MeasureEstimate mc_integrate(const BatchField& f, const Domain& region, std::uint64_t samples, std::uint64_t seed,
                             std::uint32_t stream) {
    if (samples < 100) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least 100 samples");
    RegionSampler sampler(region);
    if (sampler.empty()) {
        MeasureEstimate e;
        e.samples = samples;
        e.seed = seed;
        return e;
    }
    const CounterRng rng(seed, stream);
    const std::size_t dim = sampler.dim();
    auto chunks = map_chunks<ChunkResult>(samples, [&](std::uint64_t, std::uint64_t first, std::uint64_t last) {
        ChunkResult r;
        simd::PointBatch batch(dim, last - first);
        sampler.fill(batch, rng, first);
        std::vector<std::uint8_t> inside(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i) inside[i] = sampler.inside(batch, i);
        std::vector<double> values;
        std::vector<std::uint8_t> singular;
        f(batch, values, singular);
        simd::PointBatch one(dim, 1);
        std::vector<double> v1;
        std::vector<std::uint8_t> s1;
        for (std::size_t i = 0; i < batch.count; ++i) {
            if (!inside[i]) {
                r.stats.add(0.0);
                continue;
            }
            double v = values[i];
            bool sing = singular[i] != 0;
            for (std::uint32_t attempt = 1; sing && attempt <= kMaxRedraws; ++attempt) {
                ++r.resampled;
                sampler.draw(std::span<double>(one.data), rng, first + i, attempt);
                if (!sampler.inside(one, 0)) {
                    v = 0.0;
                    sing = false;
                    break;
                }
                f(one, v1, s1);
                v = v1[0];
                sing = s1[0] != 0;
            }
            r.stats.add(v);
        }
        return r;
    });
    SampleStats total;
    std::uint64_t resampled = 0;
    for (const auto& c : chunks) {
        total.merge(c.stats);
        resampled += c.resampled;
    }
    MeasureEstimate e = make_estimate(total, sampler.box_volume(), seed);
    e.resampled = resampled;
    return e;
}

MeasureEstimate mc_integrate(const PointField& f, const Domain& region, std::uint64_t samples, std::uint64_t seed,
                             std::uint32_t stream) {
    BatchField batch_f = [&](const simd::PointBatch& pts, std::vector<double>& values,
                             std::vector<std::uint8_t>& singular) {
        values.resize(pts.count);
        singular.resize(pts.count);
        std::vector<double> x(pts.dim);
        for (std::size_t i = 0; i < pts.count; ++i) {
            for (std::size_t d = 0; d < pts.dim; ++d) x[d] = pts.coord(d)[i];
            const FieldValue v = f(x);
            values[i] = v.value;
            singular[i] = v.singular;
        }
    };
    return mc_integrate(batch_f, region, samples, seed, stream);
}

namespace {

double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

// Heavy radial proposal on u in (0, 1), parametrised by L = ln(1/u):
// g = 1/2 g_tail + 1/2 n u^{n-1}, with g_tail(u) = 1/(u L (ln L)^2) on
// e < L <= L_max (renormalised), the density whose tail mass below depth L is
// 1/ln L.
class HeavyRadial {
  public:
    static constexpr double kLogLogMax = 700.0;  // L = e^{1/w} stays finite

    explicit HeavyRadial(std::size_t n) : n_(static_cast<double>(n)), tail_norm_(-std::log1p(-1.0 / kLogLogMax)) {}

    /// log g(L) - L, free of terms that grow with L.
    double log_density_scaled(double L) const {
        const double poly = std::log(0.5) + std::log(n_) - n_ * L;
        if (!(L > std::numbers::e) || std::log(L) > kLogLogMax) return poly;
        const double tail = std::log(0.5) - std::log(L) - 2.0 * std::log(std::log(L)) + tail_norm_;
        return log_add_exp(tail, poly);
    }

    double sample_L(double pick, double v) const {
        if (pick < 0.5) {
            const double lo = 1.0 / kLogLogMax;
            const double w = lo + (1.0 - lo) * v;
            return std::exp(1.0 / w);
        }
        return -std::log(v) / n_;
    }

  private:
    double n_;
    double tail_norm_;
};

}  // namespace

MeasureEstimate mc_integrate_nu(const NuField& field, std::uint64_t samples, std::uint64_t seed,
                                std::uint32_t stream) {
    if (samples < 100) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least 100 samples");
    const FieldFamily& fam = field.family();
    const std::size_t n = fam.dim();
    const double nd = static_cast<double>(n);
    const double omega = fam.domain_measure();
    const double count = static_cast<double>(field.nodes().count());
    const auto consts = unit_ball_constants(n);
    const double two_t = 2.0 * static_cast<double>(field.t());
    const SigmaProfile& sigma = fam.profile();
    const double sigma1 = sigma(1.0);
    const HeavyRadial radial(n);

    const double log_uniform = std::log(0.5 / omega);
    const double log_heavy_const = std::log(0.5) + nd * std::log(two_t) - std::log(count) - std::log(consts.sphere_area);
    // log of the weight sigma / q at scaled radius u = e^-L inside a node ball,
    // with e^{nL} divided out of numerator and mixture density alike.
    auto log_weight_ball = [&](double L) {
        const double log_q = log_add_exp(log_uniform - nd * L, log_heavy_const + radial.log_density_scaled(L));
        return sigma.log_radial_at_log(L, n) - log_q;
    };
    const double off_ball_weight = sigma1 / (0.5 / omega);

    RegionSampler sampler(fam.domain());
    const CounterRng rng(seed, stream);
    auto chunks = map_chunks<ChunkResult>(samples, [&](std::uint64_t, std::uint64_t first, std::uint64_t last) {
        ChunkResult r;
        const std::size_t len = last - first;
        std::vector<double> weight(len);
        std::vector<std::size_t> pending;
        simd::PointBatch pts(n, len);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < len; ++i) {
            const std::uint64_t s = first + i;
            if (rng.uniform(s, 0) < 0.5) {
                std::uint32_t attempt = 0;
                do {
                    sampler.draw(x, rng, s, attempt++);
                } while (!sampler.inside(x) && attempt < 1024);
                for (std::size_t d = 0; d < n; ++d) pts.coord(d)[pending.size()] = x[d];
                pending.push_back(i);
            } else {
                const double L = radial.sample_L(rng.uniform(s, 1), rng.uniform(s, 2));
                weight[i] = std::exp(log_weight_ball(L));
            }
        }
        if (!pending.empty()) {
            simd::PointBatch batch(n, pending.size());
            for (std::size_t d = 0; d < n; ++d) std::copy_n(pts.coord(d), pending.size(), batch.coord(d));
            std::vector<double> u;
            field.scaled_radius_batch(batch, u);
            for (std::size_t j = 0; j < pending.size(); ++j) {
                double uj = u[j];
                if (uj == 0.0) {
                    // Exactly on a node: redraw this sample's point.
                    simd::PointBatch one(n, 1);
                    std::vector<double> u1;
                    for (std::uint32_t attempt = 1024; uj == 0.0; ++attempt) {
                        ++r.resampled;
                        sampler.draw(std::span<double>(one.data), rng, first + pending[j], attempt);
                        if (!sampler.inside(one, 0)) continue;
                        field.scaled_radius_batch(one, u1);
                        uj = u1[0];
                    }
                }
                weight[pending[j]] = uj < 1.0 ? std::exp(log_weight_ball(-std::log(uj))) : off_ball_weight;
            }
        }
        for (double w : weight) r.stats.add(w);
        return r;
    });
    SampleStats total;
    std::uint64_t resampled = 0;
    for (const auto& c : chunks) {
        total.merge(c.stats);
        resampled += c.resampled;
    }
    MeasureEstimate e = make_estimate(total, 1.0, seed);
    e.resampled = resampled;
    return e;
}

}  // namespace gridsing
