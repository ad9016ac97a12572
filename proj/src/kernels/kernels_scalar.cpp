#include "bifprob/kernels.hpp"

namespace bifprob::kernels {
namespace {

void power_sums(const double* x, std::size_t n, int K, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double p = x[i];
        for (int k = 0; k < K; ++k) {
            out[k] += p;
            p *= x[i];
        }
    }
}

std::size_t count_strict(const double* x, std::size_t n, double thr, bool below) {
    std::size_t c = 0;
    if (below) {
        for (std::size_t i = 0; i < n; ++i) c += x[i] < thr;
    } else {
        for (std::size_t i = 0; i < n; ++i) c += x[i] > thr;
    }
    return c;
}

void polyval(const double* c, int deg, const double* x, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = c[deg];
        for (int k = deg - 1; k >= 0; --k) v = v * x[i] + c[k];
        out[i] = v;
    }
}

void model_eval(ModelKernel m, const double* a, const double* b, std::size_t n, double* out) {
    switch (m) {
        case ModelKernel::Lorenz:
            for (std::size_t i = 0; i < n; ++i) out[i] = a[i] / (b[i] * (1.0 + a[i]));
            break;
        case ModelKernel::Pitchfork:
            for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
            break;
        case ModelKernel::WattSign:
            // a = beta, b = alpha
            for (std::size_t i = 0; i < n; ++i) {
                const double b2 = a[i] * a[i];
                const double al2 = b[i] * b[i];
                out[i] = -(3.0 + (al2 - 5.0) * b2 + (al2 * al2) * (b2 * b2) * b2);
            }
            break;
    }
}

const Table kTable{power_sums, count_strict, polyval, model_eval};

}  // namespace

const Table& scalar_table() { return kTable; }

}  // namespace bifprob::kernels
