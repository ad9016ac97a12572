#include <immintrin.h>

#include "bifprob/kernels.hpp"

namespace bifprob::kernels {
namespace {

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void power_sums(const double* x, std::size_t n, int K, double* out) {
    __m256d acc[kMaxPowerSums];
    for (int k = 0; k < K; ++k) acc[k] = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        __m256d p = xv;
        for (int k = 0; k < K; ++k) {
            acc[k] = _mm256_add_pd(acc[k], p);
            p = _mm256_mul_pd(p, xv);
        }
    }
    for (int k = 0; k < K; ++k) out[k] += hsum(acc[k]);
    for (; i < n; ++i) {
        double p = x[i];
        for (int k = 0; k < K; ++k) {
            out[k] += p;
            p *= x[i];
        }
    }
}

std::size_t count_strict(const double* x, std::size_t n, double thr, bool below) {
    const __m256d t = _mm256_set1_pd(thr);
    std::size_t c = 0, i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d m = below ? _mm256_cmp_pd(xv, t, _CMP_LT_OQ) : _mm256_cmp_pd(xv, t, _CMP_GT_OQ);
        c += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(m)));
    }
    for (; i < n; ++i) c += below ? (x[i] < thr) : (x[i] > thr);
    return c;
}

void polyval(const double* c, int deg, const double* x, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        __m256d v = _mm256_set1_pd(c[deg]);
        for (int k = deg - 1; k >= 0; --k) v = _mm256_fmadd_pd(v, xv, _mm256_set1_pd(c[k]));
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) {
        double v = c[deg];
        for (int k = deg - 1; k >= 0; --k) v = v * x[i] + c[k];
        out[i] = v;
    }
}

void model_eval(ModelKernel m, const double* a, const double* b, std::size_t n, double* out) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    switch (m) {
        case ModelKernel::Lorenz:
            for (; i + 4 <= n; i += 4) {
                const __m256d av = _mm256_loadu_pd(a + i);
                const __m256d bv = _mm256_loadu_pd(b + i);
                _mm256_storeu_pd(out + i, _mm256_div_pd(av, _mm256_mul_pd(bv, _mm256_add_pd(one, av))));
            }
            for (; i < n; ++i) out[i] = a[i] / (b[i] * (1.0 + a[i]));
            break;
        case ModelKernel::Pitchfork:
            for (; i + 4 <= n; i += 4)
                _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
            for (; i < n; ++i) out[i] = a[i] * b[i];
            break;
        case ModelKernel::WattSign: {
            const __m256d three = _mm256_set1_pd(3.0), five = _mm256_set1_pd(5.0);
            const __m256d neg = _mm256_set1_pd(-0.0);
            for (; i + 4 <= n; i += 4) {
                const __m256d be = _mm256_loadu_pd(a + i);
                const __m256d al = _mm256_loadu_pd(b + i);
                const __m256d b2 = _mm256_mul_pd(be, be);
                const __m256d al2 = _mm256_mul_pd(al, al);
                const __m256d t1 = _mm256_mul_pd(_mm256_sub_pd(al2, five), b2);
                const __m256d t2 = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(al2, al2), _mm256_mul_pd(b2, b2)), b2);
                const __m256d s = _mm256_add_pd(_mm256_add_pd(three, t1), t2);
                _mm256_storeu_pd(out + i, _mm256_xor_pd(s, neg));
            }
            for (; i < n; ++i) {
                const double b2 = a[i] * a[i];
                const double al2 = b[i] * b[i];
                out[i] = -(3.0 + (al2 - 5.0) * b2 + (al2 * al2) * (b2 * b2) * b2);
            }
            break;
        }
    }
}

const Table kTable{power_sums, count_strict, polyval, model_eval};

}  // namespace

const Table& avx2_table() { return kTable; }

}  // namespace bifprob::kernels
