#pragma once

// Seeded Monte Carlo estimators. Samples are split into fixed-size chunks whose
// statistics are merged in chunk order, so results do not depend on the
// number of worker threads.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "gridsing/domain.hpp"
#include "gridsing/fields.hpp"
#include "gridsing/rng.hpp"
#include "gridsing/simd/kernels.hpp"

namespace gridsing {

struct MeasureEstimate {
    double value = 0.0;
    double half_width = 0.0;  ///< 95% normal interval, 1.96 sd / sqrt(N)
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t resampled = 0;  ///< singular evaluations replaced by a fresh draw

    bool covers(double x) const { return x >= value - half_width && x <= value + half_width; }
    std::string provenance() const;
};

/// Running mean and second central moment (Chan et al. merge).
class SampleStats {
  public:
    void add(double x);
    void merge(const SampleStats& other);

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const;  ///< unbiased

  private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// value = scale * mean, half width from the sample variance.
MeasureEstimate make_estimate(const SampleStats& stats, double scale, std::uint64_t seed);

inline constexpr std::uint64_t kChunkSize = 1u << 14;

std::size_t worker_count();
/// Caps the pool size; 0 restores the hardware default.
void set_worker_count(std::size_t workers);

/// Calls f(chunk, first, last) for every chunk of [0, total) on a pool of
/// threads; results come back in chunk order.
template <class T, class F>
std::vector<T> map_chunks(std::uint64_t total, F&& f, std::uint64_t chunk = kChunkSize) {
    const std::uint64_t chunks = (total + chunk - 1) / chunk;
    std::vector<T> out(chunks);
    const std::size_t workers = std::min<std::size_t>(worker_count(), chunks);
    auto run = [&](std::size_t w) {
        for (std::uint64_t c = w; c < chunks; c += workers) {
            const std::uint64_t first = c * chunk;
            out[c] = f(c, first, std::min(total, first + chunk));
        }
    };
    if (workers <= 1) {
        if (chunks > 0) run(0);
        return out;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
    return out;
}

/// Uniform points in the bounding box of a region, with exact membership.
class RegionSampler {
  public:
    explicit RegionSampler(const Domain& region);

    std::size_t dim() const { return dim_; }
    double box_volume() const { return volume_; }
    bool empty() const { return empty_; }

    /// Fills points [first, first + batch.count) of the stream; `attempt`
    /// selects an independent redraw of the same sample index.
    void fill(simd::PointBatch& batch, const CounterRng& rng, std::uint64_t first, std::uint32_t attempt = 0) const;
    void draw(std::span<double> x, const CounterRng& rng, std::uint64_t sample, std::uint32_t attempt) const;
    bool inside(const simd::PointBatch& batch, std::size_t i) const {
        return membership_.contains(batch.data.data() + i, batch.count);
    }
    bool inside(std::span<const double> x) const { return membership_.contains(x.data(), 1); }

  private:
    std::size_t dim_;
    bool empty_;
    std::vector<double> lo_, width_;
    double volume_ = 0.0;
    DoubleMembership membership_;
};

using BatchField = std::function<void(const simd::PointBatch&, std::vector<double>&, std::vector<std::uint8_t>&)>;
using PointField = std::function<FieldValue(std::span<const double>)>;

/// Uniform-sampling estimate of the integral of f over the region (Domain or
/// cube-clipped Domain). Singular evaluations are redrawn and counted.
MeasureEstimate mc_integrate(const BatchField& f, const Domain& region, std::uint64_t samples,
                             std::uint64_t seed = kDefaultSeed, std::uint32_t stream = 0);
MeasureEstimate mc_integrate(const PointField& f, const Domain& region, std::uint64_t samples,
                             std::uint64_t seed = kDefaultSeed, std::uint32_t stream = 0);

/// Independent oracle for the integral of nu_t over the domain: defensive
/// importance sampling from 1/2 uniform + 1/2 node-centred heavy-tailed
/// radial proposal, weighted in log space. Finite variance for every profile
/// whose sigma(u) u^{n-1} is O(1 / (u ln(1/u) (ln ln(1/u))^2)).
MeasureEstimate mc_integrate_nu(const NuField& field, std::uint64_t samples, std::uint64_t seed = kDefaultSeed,
                                std::uint32_t stream = 0);

}  // namespace gridsing
