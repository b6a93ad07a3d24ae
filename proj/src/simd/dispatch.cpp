#include <atomic>
#include <cstdlib>
#include <string>

#include "gridsing/error.hpp"
#include "gridsing/simd/kernels.hpp"

namespace gridsing::simd {

#ifndef GRIDSING_BUILD_AVX2
namespace avx2 {
bool compiled() { return false; }
void nearest_node(const double*, std::size_t, std::size_t, double, double*, double*) {
    throw Error(ErrorCode::InvalidArgument, "AVX2 kernels not built");
}
}  // namespace avx2
#endif

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return avx2::compiled() && __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char* env = std::getenv("GRIDSING_ISA")) {
        std::string v(env);
        if (v == "scalar") return Isa::Scalar;
        if (v == "avx2" && cpu_has_avx2()) return Isa::Avx2;
    }
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& isa_slot() {
    static std::atomic<int> slot{static_cast<int>(initial_isa())};
    return slot;
}

}  // namespace

Isa detected_isa() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return static_cast<Isa>(isa_slot().load(std::memory_order_relaxed)); }

void force_isa(Isa isa) {
    if (isa == Isa::Avx2 && !cpu_has_avx2()) throw Error(ErrorCode::InvalidArgument, "AVX2 not available");
    isa_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

void nearest_node(const PointBatch& points, double t, NearestNodes& out) {
    out.index.resize(points.dim * points.count);
    out.scaled.resize(points.count);
    NearestNodeFn fn = active_isa() == Isa::Avx2 ? &avx2::nearest_node : &scalar::nearest_node;
    fn(points.data.data(), points.dim, points.count, t, out.index.data(), out.scaled.data());
}

}  // namespace gridsing::simd
