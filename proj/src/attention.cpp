#include "glyphbeam/attention.hpp"

#include <cmath>

#include "glyphbeam/kernels.hpp"

namespace glyphbeam {

AttentionParams AttentionParams::create(std::size_t feature_dim, std::size_t hidden_dim,
                                        std::size_t attn_dim, std::mt19937_64& rng) {
    if (attn_dim < 1) throw input_error("attention hidden size must be >= 1");
    AttentionParams p;
    const double sx = std::sqrt(6.0 / static_cast<double>(feature_dim + attn_dim));
    const double sh = std::sqrt(6.0 / static_cast<double>(hidden_dim + attn_dim));
    const double sa = std::sqrt(6.0 / static_cast<double>(attn_dim + 1));
    p.score_x = Param(Tensor::uniform({feature_dim, attn_dim}, sx, rng));
    p.score_h = Param(Tensor::uniform({hidden_dim, attn_dim}, sh, rng));
    p.score_bias = Param(Tensor({attn_dim}));
    p.score_out = Param(Tensor::uniform({attn_dim}, sa, rng));
    return p;
}

void AttentionParams::collect_params(std::vector<ParamRef>& out) {
    out.push_back({"attention.score_x", &score_x});
    out.push_back({"attention.score_h", &score_h});
    out.push_back({"attention.score_bias", &score_bias});
    out.push_back({"attention.score_out", &score_out});
}

AttentionStep attend(const Tensor& features, const Tensor& h_prev, const AttentionParams& params) {
    AttentionCache cache;
    return attend(features, h_prev, params, cache);
}

AttentionStep attend(const Tensor& features, const Tensor& h_prev, const AttentionParams& params,
                     AttentionCache& cache) {
    if (features.rank() != 2 || features.dim(1) != params.feature_dim()) {
        throw shape_error("attention: feature dim " +
                          std::to_string(features.rank() == 2 ? features.dim(1) : 0) +
                          " does not match params (" + std::to_string(params.feature_dim()) + ")");
    }
    if (h_prev.size() != params.hidden_dim()) {
        throw shape_error("attention: hidden dim " + std::to_string(h_prev.size()) +
                          " does not match params (" + std::to_string(params.hidden_dim()) + ")");
    }
    const std::size_t cells = features.dim(0);
    const std::size_t attn = params.attn_dim();

    // shared h/bias part of the pre-activation
    Tensor h_part({attn});
    matvec_t_acc(params.score_h.value, h_prev.span(), h_part.span());
    kern::vadd(params.score_bias.value.data(), h_part.data(), attn);

    cache.tanh_units = Tensor({cells, attn});
    AttentionStep step;
    step.scores = Tensor({cells});
    for (std::size_t i = 0; i < cells; ++i) {
        double* u = cache.tanh_units.row(i);
        for (std::size_t a = 0; a < attn; ++a) u[a] = h_part[a];
        matvec_t_acc(params.score_x.value, {features.row(i), features.dim(1)}, {u, attn});
        for (std::size_t a = 0; a < attn; ++a) u[a] = std::tanh(u[a]);
        step.scores[i] = kern::dot(u, params.score_out.value.data(), attn);
    }

    step.weights = softmax(step.scores);
    cache.weights = step.weights;

    step.context = Tensor({features.dim(1)});
    for (std::size_t i = 0; i < cells; ++i) {
        kern::axpy(step.weights[i], features.row(i), step.context.data(), features.dim(1));
    }
    return step;
}

void attention_backward(AttentionParams& params, const Tensor& features, const Tensor& h_prev,
                        const AttentionCache& cache, const Tensor& grad_context,
                        Tensor& grad_features, Tensor& grad_h_prev) {
    const std::size_t cells = features.dim(0);
    const std::size_t feat = features.dim(1);
    const std::size_t attn = params.attn_dim();
    if (grad_context.size() != feat) {
        throw shape_error("attention backward: grad_context dim " +
                          std::to_string(grad_context.size()) + " does not match feature dim " +
                          std::to_string(feat));
    }
    const Tensor& beta = cache.weights;

    // context = features^T * beta
    Tensor grad_beta({cells});
    for (std::size_t i = 0; i < cells; ++i) {
        grad_beta[i] = kern::dot(features.row(i), grad_context.data(), feat);
        kern::axpy(beta[i], grad_context.data(), grad_features.row(i), feat);
    }

    // softmax jacobian: d_alpha = beta .* (d_beta - beta . d_beta)
    const double mix = kern::dot(beta.data(), grad_beta.data(), cells);
    Tensor grad_scores({cells});
    for (std::size_t i = 0; i < cells; ++i) grad_scores[i] = beta[i] * (grad_beta[i] - mix);

    // d w_a += T^T d_alpha ; dU = d_alpha w_a^T .* (1 - T^2)
    Tensor grad_units({cells, attn});
    Tensor unit_colsum({attn});
    for (std::size_t i = 0; i < cells; ++i) {
        const double* t = cache.tanh_units.row(i);
        double* du = grad_units.row(i);
        const double ds = grad_scores[i];
        kern::axpy(ds, t, params.score_out.grad.data(), attn);
        for (std::size_t a = 0; a < attn; ++a) {
            du[a] = ds * params.score_out.value[a] * (1.0 - t[a] * t[a]);
            unit_colsum[a] += du[a];
        }
    }

    // dW_x += X^T dU ; dX += dU W_x^T
    matmul_tn_acc(features, grad_units, params.score_x.grad);
    matmul_nt_acc(grad_units, params.score_x.value, grad_features);

    // bias / W_h / h share the per-cell column sums
    kern::vadd(unit_colsum.data(), params.score_bias.grad.data(), attn);
    const std::size_t hidden = params.hidden_dim();
    for (std::size_t hrow = 0; hrow < hidden; ++hrow) {
        kern::axpy(h_prev[hrow], unit_colsum.data(), params.score_h.grad.row(hrow), attn);
        grad_h_prev[hrow] += kern::dot(params.score_h.value.row(hrow), unit_colsum.data(), attn);
    }
}

} // namespace glyphbeam
