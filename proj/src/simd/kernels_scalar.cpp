#include <cmath>

#include "gridsing/simd/kernels.hpp"

namespace gridsing::simd::scalar {

void nearest_node(const double* data, std::size_t dim, std::size_t count, double t, double* index_out,
                  double* scaled_out) {
    for (std::size_t i = 0; i < count; ++i) {
        double acc = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double s = data[d * count + i] * t;
            const double k = std::nearbyint(s);
            index_out[d * count + i] = k;
            const double diff = s - k;
            acc = acc + diff * diff;
        }
        scaled_out[i] = 2.0 * std::sqrt(acc);
    }
}

}  // namespace gridsing::simd::scalar
