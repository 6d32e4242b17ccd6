#pragma once

#include <string>
#include <vector>

#include "glyphbeam/tensor.hpp"

namespace glyphbeam {

// A learnable tensor with its gradient accumulator.
struct Param {
    Tensor value;
    Tensor grad;

    Param() = default;
    explicit Param(Tensor v) : value(std::move(v)), grad(value.shape()) {}

    void zero_grad() { grad.fill(0.0); }
    std::size_t size() const { return value.size(); }
};

// Named handle used by the optimizer, the serializer, and the gradient checker.
struct ParamRef {
    std::string name;
    Param* param;
};

} // namespace glyphbeam
