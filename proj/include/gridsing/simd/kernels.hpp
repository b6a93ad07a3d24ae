#pragma once

// Batch lattice kernels. Every kernel has a scalar reference implementation and
// optional vector variants selected at runtime; variants are bit-identical to
// the reference (same operation order, no FMA, round-half-even everywhere).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace gridsing::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Points in structure-of-arrays layout: coordinate d of point i lives at
/// data[d * count + i].
struct PointBatch {
    std::size_t dim = 0;
    std::size_t count = 0;
    std::vector<double> data;

    PointBatch() = default;
    PointBatch(std::size_t dim_, std::size_t count_) : dim(dim_), count(count_), data(dim_ * count_) {}

    double* coord(std::size_t d) { return data.data() + d * count; }
    const double* coord(std::size_t d) const { return data.data() + d * count; }
};

/// Output of the nearest-node kernel, same SoA layout for node indices.
struct NearestNodes {
    std::vector<double> index;   ///< round(t * x_d), integer-valued
    std::vector<double> scaled;  ///< 2 t |x - y|, in units of the ball radius 1/(2t)
};

using NearestNodeFn = void (*)(const double* data, std::size_t dim, std::size_t count, double t,
                               double* index_out, double* scaled_out);

namespace scalar {
void nearest_node(const double* data, std::size_t dim, std::size_t count, double t, double* index_out,
                  double* scaled_out);
}

namespace avx2 {
bool compiled();
void nearest_node(const double* data, std::size_t dim, std::size_t count, double t, double* index_out,
                  double* scaled_out);
}

/// Best variant supported by this CPU (overridable by GRIDSING_ISA=scalar|avx2).
Isa detected_isa();
Isa active_isa();
/// Pins the variant for the rest of the process (tests, benchmarks).
void force_isa(Isa isa);

/// Nearest node of the grid of spacing 1/t and the scaled distance to it.
void nearest_node(const PointBatch& points, double t, NearestNodes& out);

}  // namespace gridsing::simd
