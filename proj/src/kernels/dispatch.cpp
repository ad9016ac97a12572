#include <atomic>
#include <stdexcept>

#include "bifprob/kernels.hpp"

namespace bifprob::kernels {
namespace {

Isa detect() {
#if defined(BIFPROB_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
#if defined(BIFPROB_HAVE_NEON)
    return Isa::Neon;
#endif
    return Isa::Scalar;
}

std::atomic<int> g_forced{-1};

}  // namespace

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#if defined(BIFPROB_HAVE_AVX2)
            __builtin_cpu_init();
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(BIFPROB_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() {
    const int f = g_forced.load(std::memory_order_relaxed);
    if (f >= 0) return static_cast<Isa>(f);
    static const Isa detected = detect();
    return detected;
}

void force_isa(Isa isa) {
    if (!isa_available(isa)) throw std::invalid_argument("kernels: " + isa_name(isa) + " not available");
    g_forced.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset_isa() { g_forced.store(-1, std::memory_order_relaxed); }

const Table& table_for(Isa isa) {
    switch (isa) {
#if defined(BIFPROB_HAVE_AVX2)
        case Isa::Avx2:
            return avx2_table();
#endif
#if defined(BIFPROB_HAVE_NEON)
        case Isa::Neon:
            return neon_table();
#endif
        default:
            return scalar_table();
    }
}

const Table& active() { return table_for(active_isa()); }

std::string isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
        case Isa::Neon:
            return "neon";
    }
    return "unknown";
}

}  // namespace bifprob::kernels
