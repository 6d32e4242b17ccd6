#pragma once

// Additive soft attention: per decode step, score every feature-grid cell
// against the previous hidden state with a one-hidden-layer tanh network,
// softmax the scores into weights, and return the weighted feature
// combination as the context vector.

#include <random>

#include "glyphbeam/params.hpp"
#include "glyphbeam/tensor.hpp"

namespace glyphbeam {

struct AttentionParams {
    Param score_x;    // [D x A]
    Param score_h;    // [H x A]
    Param score_bias; // [A]
    Param score_out;  // [A]

    static AttentionParams create(std::size_t feature_dim, std::size_t hidden_dim,
                                  std::size_t attn_dim, std::mt19937_64& rng);

    std::size_t feature_dim() const { return score_x.value.dim(0); }
    std::size_t hidden_dim() const { return score_h.value.dim(0); }
    std::size_t attn_dim() const { return score_out.value.dim(0); }

    void collect_params(std::vector<ParamRef>& out);
};

struct AttentionStep {
    Tensor scores;  // [K] raw per-cell scores
    Tensor weights; // [K] softmax of scores, positive, sums to 1
    Tensor context; // [D] weighted feature combination
};

struct AttentionCache {
    Tensor tanh_units; // [K x A]
    Tensor weights;    // [K]
};

// features: [K x D]; h_prev: [H]. Throws shape_error on dimension mismatch.
AttentionStep attend(const Tensor& features, const Tensor& h_prev, const AttentionParams& params);
AttentionStep attend(const Tensor& features, const Tensor& h_prev, const AttentionParams& params,
                     AttentionCache& cache);

// Accumulates parameter gradients; adds the feature and hidden-state
// gradients into grad_features / grad_h_prev.
void attention_backward(AttentionParams& params, const Tensor& features, const Tensor& h_prev,
                        const AttentionCache& cache, const Tensor& grad_context,
                        Tensor& grad_features, Tensor& grad_h_prev);

} // namespace glyphbeam
