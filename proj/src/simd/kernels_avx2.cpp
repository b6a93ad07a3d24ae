// Compiled with -mavx2 only; callers must check detected_isa() first.

#include <immintrin.h>

#include "gridsing/simd/kernels.hpp"

namespace gridsing::simd::avx2 {

bool compiled() { return true; }

void nearest_node(const double* data, std::size_t dim, std::size_t count, double t, double* index_out,
                  double* scaled_out) {
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dim; ++d) {
            const __m256d s = _mm256_mul_pd(_mm256_loadu_pd(data + d * count + i), vt);
            const __m256d k = _mm256_round_pd(s, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
            _mm256_storeu_pd(index_out + d * count + i, k);
            const __m256d diff = _mm256_sub_pd(s, k);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
        }
        _mm256_storeu_pd(scaled_out + i, _mm256_mul_pd(two, _mm256_sqrt_pd(acc)));
    }
    if (i < count) {
        // Tail: the scalar reference on the remaining lanes, addressed in the full batch.
        for (; i < count; ++i) {
            double acc = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const __m128d s = _mm_mul_sd(_mm_set_sd(data[d * count + i]), _mm_set_sd(t));
                const __m128d k = _mm_round_sd(s, s, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
                index_out[d * count + i] = _mm_cvtsd_f64(k);
                const double diff = _mm_cvtsd_f64(s) - _mm_cvtsd_f64(k);
                acc = acc + diff * diff;
            }
            scaled_out[i] = 2.0 * _mm_cvtsd_f64(_mm_sqrt_sd(_mm_setzero_pd(), _mm_set_sd(acc)));
        }
    }
}

}  // namespace gridsing::simd::avx2
