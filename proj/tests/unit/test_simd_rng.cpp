#include <cmath>
#include <cstring>

#include "doctest.h"
#include "gen.hpp"

#include "gridsing/rng.hpp"
#include "gridsing/simd/kernels.hpp"

using namespace gridsing;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

simd::PointBatch random_batch(gen::Rng& rng, std::size_t dim, std::size_t count, double t) {
    simd::PointBatch b(dim, count);
    for (std::size_t i = 0; i < b.data.size(); ++i) {
        // Mix generic points with points exactly between two grid lines.
        if (i % 7 == 3) {
            b.data[i] = (static_cast<double>(gen::integer(rng, -40, 40)) + 0.5) / t;
        } else {
            b.data[i] = gen::real(rng, -2.0, 3.0);
        }
    }
    return b;
}

}  // namespace

TEST_SUITE("simd_rng") {
    TEST_CASE("Philox4x32-10 known answers") {
        using A4 = std::array<std::uint32_t, 4>;
        using A2 = std::array<std::uint32_t, 2>;
        CHECK(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(philox4x32(A4{~0u, ~0u, ~0u, ~0u}, A2{~0u, ~0u}) == A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
              A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }

    TEST_CASE("uniforms are open, addressable and roughly uniform") {
        const CounterRng rng(kDefaultSeed, 3);
        double sum = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform(static_cast<std::uint64_t>(i), 0);
            CHECK_UNARY(u > 0.0);
            CHECK_UNARY(u < 1.0);
            sum += u;
        }
        CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
        CHECK(rng.uniform(17, 5) == CounterRng(kDefaultSeed, 3).uniform(17, 5));
        CHECK(rng.uniform(17, 5) != CounterRng(kDefaultSeed, 4).uniform(17, 5));
        CHECK(rng.uniform(17, 4) != rng.uniform(17, 5));
        double m = 0.0, v = 0.0;
        for (int i = 0; i < n; ++i) {
            const double z = rng.normal(static_cast<std::uint64_t>(i), 9);
            m += z;
            v += z * z;
        }
        CHECK(std::abs(m / n) < 0.02);
        CHECK(v / n == doctest::Approx(1.0).epsilon(0.02));
    }

    TEST_CASE("scalar nearest node matches the definition") {
        gen::Rng rng(61);
        const double t = 7.0;
        const simd::PointBatch b = random_batch(rng, 3, 101, t);
        std::vector<double> idx(b.data.size()), scaled(b.count);
        simd::scalar::nearest_node(b.data.data(), 3, b.count, t, idx.data(), scaled.data());
        for (std::size_t i = 0; i < b.count; ++i) {
            double d2 = 0.0;
            for (std::size_t d = 0; d < 3; ++d) {
                const double x = b.coord(d)[i];
                CHECK(idx[d * b.count + i] == std::nearbyint(t * x));
                const double diff = x - idx[d * b.count + i] / t;
                d2 += diff * diff;
            }
            CHECK(scaled[i] == doctest::Approx(2.0 * t * std::sqrt(d2)).epsilon(1e-12));
        }
    }

    TEST_CASE("AVX2 nearest node is bit-identical to scalar") {
        if (!simd::avx2::compiled() || simd::detected_isa() != simd::Isa::Avx2) {
            MESSAGE("AVX2 not available; equivalence not exercised");
            return;
        }
        gen::Rng rng(62);
        for (std::size_t dim = 2; dim <= 8; ++dim) {
            for (std::size_t count : {1u, 3u, 4u, 5u, 64u, 1001u}) {
                for (double t : {2.0, 3.0, 17.0, 1000.0}) {
                    const simd::PointBatch b = random_batch(rng, dim, count, t);
                    std::vector<double> i0(b.data.size()), s0(count), i1(b.data.size()), s1(count);
                    simd::scalar::nearest_node(b.data.data(), dim, count, t, i0.data(), s0.data());
                    simd::avx2::nearest_node(b.data.data(), dim, count, t, i1.data(), s1.data());
                    CHECK(same_bits(i0, i1));
                    CHECK(same_bits(s0, s1));
                }
            }
        }
    }

    TEST_CASE("dispatch respects the forced variant") {
        gen::Rng rng(63);
        const simd::PointBatch b = random_batch(rng, 2, 333, 5.0);
        const simd::Isa before = simd::active_isa();
        simd::NearestNodes a, c;
        simd::force_isa(simd::Isa::Scalar);
        CHECK(simd::active_isa() == simd::Isa::Scalar);
        simd::nearest_node(b, 5.0, a);
        if (simd::avx2::compiled() && simd::detected_isa() == simd::Isa::Avx2) {
            simd::force_isa(simd::Isa::Avx2);
            CHECK(simd::active_isa() == simd::Isa::Avx2);
        }
        simd::nearest_node(b, 5.0, c);
        CHECK(same_bits(a.index, c.index));
        CHECK(same_bits(a.scaled, c.scaled));
        simd::force_isa(before);
        CHECK(simd::to_string(simd::Isa::Scalar) == "scalar");
    }
}
