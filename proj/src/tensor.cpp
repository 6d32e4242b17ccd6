#include "glyphbeam/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "glyphbeam/kernels.hpp"

namespace glyphbeam {
namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

void require_matrix(const Tensor& t, const char* what) {
    if (t.rank() != 2) {
        throw shape_error(std::string(what) + " must be rank-2, got " + shape_str(t.shape()));
    }
}

} // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_product(shape_) != data_.size()) {
        throw shape_error("tensor shape " + shape_str(shape_) + " does not match data length " +
                          std::to_string(data_.size()));
    }
}

Tensor Tensor::uniform(std::vector<std::size_t> shape, double s, std::mt19937_64& rng) {
    Tensor t(std::move(shape));
    std::uniform_real_distribution<double> dist(-s, s);
    for (double& v : t.data_) v = dist(rng);
    return t;
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_matrix(a, "matmul lhs");
    require_matrix(b, "matmul rhs");
    if (a.dim(1) != b.dim(0)) {
        throw shape_error("matmul shape mismatch: [" + std::to_string(a.dim(0)) + "x" +
                          std::to_string(a.dim(1)) + "] * [" + std::to_string(b.dim(0)) + "x" +
                          std::to_string(b.dim(1)) + "]");
    }
    Tensor c({a.dim(0), b.dim(1)});
    matmul_acc(a, b, c);
    return c;
}

void matmul_acc(const Tensor& a, const Tensor& b, Tensor& c) {
    const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (std::size_t p = 0; p < k; ++p) {
            kern::axpy(ai[p], b.row(p), ci, n);
        }
    }
}

void matmul_tn_acc(const Tensor& a, const Tensor& b, Tensor& c) {
    // c(k x n) += a(m x k)^T * b(m x n)
    const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
    for (std::size_t p = 0; p < m; ++p) {
        const double* ap = a.row(p);
        const double* bp = b.row(p);
        for (std::size_t i = 0; i < k; ++i) {
            kern::axpy(ap[i], bp, c.row(i), n);
        }
    }
}

void matmul_nt_acc(const Tensor& a, const Tensor& b, Tensor& c) {
    // c(m x p) += a(m x n) * b(p x n)^T
    const std::size_t m = a.dim(0), n = a.dim(1), p = b.dim(0);
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (std::size_t j = 0; j < p; ++j) {
            ci[j] += kern::dot(ai, b.row(j), n);
        }
    }
}

void matvec_acc(const Tensor& a, std::span<const double> x, std::span<double> y) {
    const std::size_t m = a.dim(0), n = a.dim(1);
    for (std::size_t i = 0; i < m; ++i) {
        y[i] += kern::dot(a.row(i), x.data(), n);
    }
}

void matvec_t_acc(const Tensor& a, std::span<const double> x, std::span<double> y) {
    const std::size_t m = a.dim(0), n = a.dim(1);
    for (std::size_t i = 0; i < m; ++i) {
        kern::axpy(x[i], a.row(i), y.data(), n);
    }
}

Tensor softmax(const Tensor& v) {
    if (v.empty()) throw shape_error("softmax of an empty tensor");
    Tensor out = v;
    softmax_inplace(out.span());
    return out;
}

void softmax_inplace(std::span<double> v) {
    if (v.empty()) throw shape_error("softmax of an empty vector");
    const double mx = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double& x : v) {
        x = std::exp(x - mx);
        sum += x;
    }
    kern::scale(1.0 / sum, v.data(), v.size());
}

double log_sum_exp(std::span<const double> v) {
    if (v.empty()) throw shape_error("log_sum_exp of an empty vector");
    const double mx = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(mx)) return mx;
    double sum = 0.0;
    for (double x : v) sum += std::exp(x - mx);
    return mx + std::log(sum);
}

Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f, const Tensor& x, double eps) {
    if (eps <= 0.0) throw input_error("finite_diff_grad requires eps > 0");
    Tensor grad(x.shape());
    Tensor probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = probe[i];
        probe[i] = orig + eps;
        const double fp = f(probe);
        probe[i] = orig - eps;
        const double fm = f(probe);
        probe[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw numeric_error("finite_diff_grad: function returned a non-finite value at coordinate " +
                                std::to_string(i));
        }
        grad[i] = (fp - fm) / (2.0 * eps);
    }
    return grad;
}

} // namespace glyphbeam
