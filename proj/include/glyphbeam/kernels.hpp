#pragma once

// Double-precision inner loops behind the tensor and optimizer code.
//
// Every kernel exists twice: a scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The active set is picked once at startup from CPUID and
// can be overridden with GLYPHBEAM_KERNELS=scalar|avx2. The two sets are
// equivalence-tested against each other; differences are rounding only.

#include <cstddef>

namespace glyphbeam::kern {

struct Ops {
    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x[i] *= a
    void (*scale)(double a, double* x, std::size_t n);
    // y[i] += x[i]
    void (*vadd)(const double* x, double* y, std::size_t n);
    // sum_i x[i]^2
    double (*sumsq)(const double* x, std::size_t n);
    // Adam update with bias correction factors bc1 = 1-beta1^t, bc2 = 1-beta2^t:
    //   m = beta1*m + (1-beta1)*g;  v = beta2*v + (1-beta2)*g^2
    //   w -= lr * (m/bc1) / (sqrt(v/bc2) + eps)
    void (*adam_step)(double* w, const double* g, double* m, double* v, std::size_t n,
                      double lr, double beta1, double beta2, double eps, double bc1, double bc2);
};

// Scalar reference set. Always available.
const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
// AVX2+FMA set. Call only when avx2_available().
const Ops& avx2_ops();
bool avx2_available();
#endif

// Runtime-selected set (CPUID + GLYPHBEAM_KERNELS override, resolved once).
const Ops& active();

// Name of the selected set: "scalar" or "avx2".
const char* active_name();

inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void scale(double a, double* x, std::size_t n) { active().scale(a, x, n); }
inline void vadd(const double* x, double* y, std::size_t n) { active().vadd(x, y, n); }
inline double sumsq(const double* x, std::size_t n) { return active().sumsq(x, n); }
inline void adam_step(double* w, const double* g, double* m, double* v, std::size_t n,
                      double lr, double beta1, double beta2, double eps, double bc1, double bc2) {
    active().adam_step(w, g, m, v, n, lr, beta1, beta2, eps, bc1, bc2);
}

} // namespace glyphbeam::kern
