#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Data-parallel inner loops of the Monte Carlo and grid paths. Each kernel has
// a scalar reference implementation and, where the CPU allows, a vectorized
// variant chosen once at runtime.

namespace bifprob::kernels {

enum class Isa { Scalar, Avx2, Neon };

enum class ModelKernel { Lorenz, Pitchfork, WattSign };

struct Table {
    /// out[k-1] += sum_i x[i]^k for k = 1..K.
    void (*power_sums)(const double* x, std::size_t n, int K, double* out);
    /// Number of x[i] < thr (below = true) or x[i] > thr (below = false).
    std::size_t (*count_strict)(const double* x, std::size_t n, double thr, bool below);
    /// out[i] = sum_k c[k] x[i]^k (Horner), deg >= 0.
    void (*polyval)(const double* c, int deg, const double* x, std::size_t n, double* out);
    /// out[i] = model(a[i], b[i]).
    void (*model_eval)(ModelKernel m, const double* a, const double* b, std::size_t n, double* out);
};

const Table& scalar_table();
#if defined(BIFPROB_HAVE_AVX2)
const Table& avx2_table();
#endif
#if defined(BIFPROB_HAVE_NEON)
const Table& neon_table();
#endif

bool isa_available(Isa isa);
Isa active_isa();
/// Pins the dispatch (tests and benchmarking). Throws if unavailable.
void force_isa(Isa isa);
/// Returns to automatic CPU detection.
void reset_isa();
const Table& table_for(Isa isa);
const Table& active();
std::string isa_name(Isa isa);

constexpr int kMaxPowerSums = 24;

}  // namespace bifprob::kernels
