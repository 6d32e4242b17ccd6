#pragma once

// Minimal dense numeric core: double-precision tensors in row-major flat
// storage, the matrix products the model needs, stable softmax / log-sum-exp,
// and the central-difference gradient oracle the tests lean on.

#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "glyphbeam/common.hpp"

namespace glyphbeam {

class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }

    // Entries drawn i.i.d. uniform from [-s, s].
    static Tensor uniform(std::vector<std::size_t> shape, double s, std::mt19937_64& rng);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t i) const { return shape_[i]; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<double> span() { return {data_.data(), data_.size()}; }
    std::span<const double> span() const { return {data_.data(), data_.size()}; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    // Row pointer into a rank-2 tensor.
    double* row(std::size_t i) { return data_.data() + i * shape_[1]; }
    const double* row(std::size_t i) const { return data_.data() + i * shape_[1]; }

    void fill(double v);
    bool all_finite() const;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

// C = A(m x k) * B(k x n). Throws shape_error naming both shapes on mismatch.
Tensor matmul(const Tensor& a, const Tensor& b);

// C += A * B, C += A^T * B, C += A * B^T. Shapes must already agree.
void matmul_acc(const Tensor& a, const Tensor& b, Tensor& c);
void matmul_tn_acc(const Tensor& a, const Tensor& b, Tensor& c);
void matmul_nt_acc(const Tensor& a, const Tensor& b, Tensor& c);

// y += A(m x n) * x(n); y += A^T(m x n) * x(m)
void matvec_acc(const Tensor& a, std::span<const double> x, std::span<double> y);
void matvec_t_acc(const Tensor& a, std::span<const double> x, std::span<double> y);

// Numerically stable softmax of a non-empty vector (max subtraction).
Tensor softmax(const Tensor& v);
void softmax_inplace(std::span<double> v);

// log(sum_i exp(v_i)) computed with max shifting.
double log_sum_exp(std::span<const double> v);

// Central-difference gradient of a scalar function:
//   g_i = (f(x + eps e_i) - f(x - eps e_i)) / (2 eps)
// Throws numeric_error if f returns a non-finite value.
Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f, const Tensor& x,
                        double eps = 1e-5);

} // namespace glyphbeam
