#include <arm_neon.h>

#include "bifprob/kernels.hpp"

namespace bifprob::kernels {
namespace {

void power_sums(const double* x, std::size_t n, int K, double* out) {
    float64x2_t acc[kMaxPowerSums];
    for (int k = 0; k < K; ++k) acc[k] = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xv = vld1q_f64(x + i);
        float64x2_t p = xv;
        for (int k = 0; k < K; ++k) {
            acc[k] = vaddq_f64(acc[k], p);
            p = vmulq_f64(p, xv);
        }
    }
    for (int k = 0; k < K; ++k) out[k] += vaddvq_f64(acc[k]);
    for (; i < n; ++i) {
        double p = x[i];
        for (int k = 0; k < K; ++k) {
            out[k] += p;
            p *= x[i];
        }
    }
}

std::size_t count_strict(const double* x, std::size_t n, double thr, bool below) {
    const float64x2_t t = vdupq_n_f64(thr);
    std::size_t c = 0, i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xv = vld1q_f64(x + i);
        const uint64x2_t m = below ? vcltq_f64(xv, t) : vcgtq_f64(xv, t);
        c += (vgetq_lane_u64(m, 0) & 1) + (vgetq_lane_u64(m, 1) & 1);
    }
    for (; i < n; ++i) c += below ? (x[i] < thr) : (x[i] > thr);
    return c;
}

void polyval(const double* c, int deg, const double* x, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xv = vld1q_f64(x + i);
        float64x2_t v = vdupq_n_f64(c[deg]);
        for (int k = deg - 1; k >= 0; --k) v = vfmaq_f64(vdupq_n_f64(c[k]), v, xv);
        vst1q_f64(out + i, v);
    }
    for (; i < n; ++i) {
        double v = c[deg];
        for (int k = deg - 1; k >= 0; --k) v = v * x[i] + c[k];
        out[i] = v;
    }
}

void model_eval(ModelKernel m, const double* a, const double* b, std::size_t n, double* out) {
    std::size_t i = 0;
    switch (m) {
        case ModelKernel::Lorenz:
            for (; i + 2 <= n; i += 2) {
                const float64x2_t av = vld1q_f64(a + i);
                const float64x2_t bv = vld1q_f64(b + i);
                vst1q_f64(out + i, vdivq_f64(av, vmulq_f64(bv, vaddq_f64(vdupq_n_f64(1.0), av))));
            }
            for (; i < n; ++i) out[i] = a[i] / (b[i] * (1.0 + a[i]));
            break;
        case ModelKernel::Pitchfork:
            for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
            for (; i < n; ++i) out[i] = a[i] * b[i];
            break;
        case ModelKernel::WattSign:
            for (; i + 2 <= n; i += 2) {
                const float64x2_t be = vld1q_f64(a + i);
                const float64x2_t al = vld1q_f64(b + i);
                const float64x2_t b2 = vmulq_f64(be, be);
                const float64x2_t al2 = vmulq_f64(al, al);
                const float64x2_t t1 = vmulq_f64(vsubq_f64(al2, vdupq_n_f64(5.0)), b2);
                const float64x2_t t2 = vmulq_f64(vmulq_f64(vmulq_f64(al2, al2), vmulq_f64(b2, b2)), b2);
                vst1q_f64(out + i, vnegq_f64(vaddq_f64(vaddq_f64(vdupq_n_f64(3.0), t1), t2)));
            }
            for (; i < n; ++i) {
                const double b2 = a[i] * a[i];
                const double al2 = b[i] * b[i];
                out[i] = -(3.0 + (al2 - 5.0) * b2 + (al2 * al2) * (b2 * b2) * b2);
            }
            break;
    }
}

const Table kTable{power_sums, count_strict, polyval, model_eval};

}  // namespace

const Table& neon_table() { return kTable; }

}  // namespace bifprob::kernels
