#include "glyphbeam/decoder.hpp"

#include <cmath>

#include "glyphbeam/kernels.hpp"

namespace glyphbeam {
namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

DecoderParams DecoderParams::create(std::size_t hidden_dim, std::size_t embed_dim,
                                    std::size_t feature_dim, std::mt19937_64& rng) {
    DecoderParams p;
    const std::size_t input_dim = embed_dim + hidden_dim + feature_dim;
    const double sg = std::sqrt(6.0 / static_cast<double>(input_dim + hidden_dim));
    const double se = std::sqrt(6.0 / static_cast<double>(Alphabet::kSize + embed_dim));
    const double so = std::sqrt(6.0 / static_cast<double>(embed_dim + Alphabet::kSize));
    const double sh = std::sqrt(6.0 / static_cast<double>(hidden_dim + embed_dim));
    const double sz = std::sqrt(6.0 / static_cast<double>(feature_dim + embed_dim));
    const double si = std::sqrt(6.0 / static_cast<double>(feature_dim + hidden_dim));
    p.gate = Param(Tensor::uniform({4 * hidden_dim, input_dim}, sg, rng));
    p.embedding = Param(Tensor::uniform({Alphabet::kSize, embed_dim}, se, rng));
    p.out_embed = Param(Tensor::uniform({Alphabet::kSize, embed_dim}, so, rng));
    p.out_hidden = Param(Tensor::uniform({embed_dim, hidden_dim}, sh, rng));
    p.out_ctx = Param(Tensor::uniform({embed_dim, feature_dim}, sz, rng));
    p.init_h_w = Param(Tensor::uniform({hidden_dim, feature_dim}, si, rng));
    p.init_h_b = Param(Tensor({hidden_dim}));
    p.init_c_w = Param(Tensor::uniform({hidden_dim, feature_dim}, si, rng));
    p.init_c_b = Param(Tensor({hidden_dim}));
    return p;
}

void DecoderParams::collect_params(std::vector<ParamRef>& out) {
    out.push_back({"decoder.gate", &gate});
    out.push_back({"decoder.embedding", &embedding});
    out.push_back({"output.out_embed", &out_embed});
    out.push_back({"output.out_hidden", &out_hidden});
    out.push_back({"output.out_ctx", &out_ctx});
    out.push_back({"init.h_weight", &init_h_w});
    out.push_back({"init.h_bias", &init_h_b});
    out.push_back({"init.c_weight", &init_c_w});
    out.push_back({"init.c_bias", &init_c_b});
}

DecoderState DecoderState::initial(std::size_t hidden_dim) {
    DecoderState s;
    s.h = Tensor({hidden_dim});
    s.c = Tensor({hidden_dim});
    s.y_prev = Tensor({Alphabet::kSize});
    s.step = 0;
    return s;
}

Tensor embed_output(const DecoderParams& params, const Tensor& y) {
    if (y.size() != Alphabet::kSize) {
        throw shape_error("previous-output vector has size " + std::to_string(y.size()) +
                          ", expected " + std::to_string(Alphabet::kSize));
    }
    Tensor e({params.embed_dim()});
    for (std::size_t c = 0; c < Alphabet::kSize; ++c) {
        if (y[c] != 0.0) kern::axpy(y[c], params.embedding.value.row(c), e.data(), e.size());
    }
    return e;
}

void embed_backward(DecoderParams& params, const Tensor& y, const Tensor& grad_embedded) {
    for (std::size_t c = 0; c < Alphabet::kSize; ++c) {
        if (y[c] != 0.0) {
            kern::axpy(y[c], grad_embedded.data(), params.embedding.grad.row(c),
                       grad_embedded.size());
        }
    }
}

DecoderState lstm_step(const DecoderState& state, const Tensor& context,
                       const DecoderParams& params) {
    LstmCache cache;
    return lstm_step(state, context, params, cache);
}

DecoderState lstm_step(const DecoderState& state, const Tensor& context,
                       const DecoderParams& params, LstmCache& cache) {
    const std::size_t hid = params.hidden_dim();
    const std::size_t emb = params.embed_dim();
    const std::size_t feat = params.feature_dim();
    if (state.h.size() != hid || state.c.size() != hid) {
        throw shape_error("decoder state size " + std::to_string(state.h.size()) +
                          " does not match params hidden dim " + std::to_string(hid));
    }
    if (context.size() != feat) {
        throw shape_error("context size " + std::to_string(context.size()) +
                          " does not match params feature dim " + std::to_string(feat));
    }

    const Tensor embedded = embed_output(params, state.y_prev);
    cache.input = Tensor({emb + hid + feat});
    for (std::size_t i = 0; i < emb; ++i) cache.input[i] = embedded[i];
    for (std::size_t i = 0; i < hid; ++i) cache.input[emb + i] = state.h[i];
    for (std::size_t i = 0; i < feat; ++i) cache.input[emb + hid + i] = context[i];

    Tensor preact({4 * hid});
    matvec_acc(params.gate.value, cache.input.span(), preact.span());

    cache.gates = Tensor({4 * hid});
    for (std::size_t i = 0; i < 3 * hid; ++i) cache.gates[i] = sigmoid(preact[i]);
    for (std::size_t i = 3 * hid; i < 4 * hid; ++i) cache.gates[i] = std::tanh(preact[i]);

    cache.c_prev = state.c;
    cache.tanh_c = Tensor({hid});

    DecoderState next;
    next.h = Tensor({hid});
    next.c = Tensor({hid});
    next.y_prev = state.y_prev;
    next.step = state.step + 1;
    for (std::size_t i = 0; i < hid; ++i) {
        const double in_g = cache.gates[i];
        const double fg = cache.gates[hid + i];
        const double og = cache.gates[2 * hid + i];
        const double gg = cache.gates[3 * hid + i];
        next.c[i] = fg * state.c[i] + in_g * gg;
        cache.tanh_c[i] = std::tanh(next.c[i]);
        next.h[i] = og * cache.tanh_c[i];
    }
    return next;
}

void lstm_backward(DecoderParams& params, const LstmCache& cache, const Tensor& grad_h,
                   const Tensor& grad_c, Tensor& grad_embedded, Tensor& grad_h_prev,
                   Tensor& grad_c_prev, Tensor& grad_context) {
    const std::size_t hid = params.hidden_dim();
    const std::size_t emb = params.embed_dim();
    const std::size_t feat = params.feature_dim();

    Tensor grad_preact({4 * hid});
    for (std::size_t i = 0; i < hid; ++i) {
        const double in_g = cache.gates[i];
        const double fg = cache.gates[hid + i];
        const double og = cache.gates[2 * hid + i];
        const double gg = cache.gates[3 * hid + i];
        const double tc = cache.tanh_c[i];

        const double d_o = grad_h[i] * tc;
        const double d_c = grad_c[i] + grad_h[i] * og * (1.0 - tc * tc);
        const double d_i = d_c * gg;
        const double d_f = d_c * cache.c_prev[i];
        const double d_g = d_c * in_g;
        grad_c_prev[i] += d_c * fg;

        grad_preact[i] = d_i * in_g * (1.0 - in_g);
        grad_preact[hid + i] = d_f * fg * (1.0 - fg);
        grad_preact[2 * hid + i] = d_o * og * (1.0 - og);
        grad_preact[3 * hid + i] = d_g * (1.0 - gg * gg);
    }

    for (std::size_t r = 0; r < 4 * hid; ++r) {
        kern::axpy(grad_preact[r], cache.input.data(), params.gate.grad.row(r), cache.input.size());
    }
    Tensor grad_input({emb + hid + feat});
    matvec_t_acc(params.gate.value, grad_preact.span(), grad_input.span());
    kern::vadd(grad_input.data(), grad_embedded.data(), emb);
    kern::vadd(grad_input.data() + emb, grad_h_prev.data(), hid);
    kern::vadd(grad_input.data() + emb + hid, grad_context.data(), feat);
}

Tensor output_distribution(const Tensor& y_prev, const Tensor& h, const Tensor& context,
                           const DecoderParams& params) {
    const Tensor embedded = embed_output(params, y_prev);
    OutputCache cache;
    Tensor logits = output_logits(embedded, h, context, params, cache);
    softmax_inplace(logits.span());
    return logits;
}

Tensor output_logits(const Tensor& embedded_prev, const Tensor& h, const Tensor& context,
                     const DecoderParams& params, OutputCache& cache) {
    const std::size_t emb = params.embed_dim();
    if (embedded_prev.size() != emb || h.size() != params.hidden_dim() ||
        context.size() != params.feature_dim()) {
        throw shape_error("output layer input dims do not match params");
    }
    cache.combined = embedded_prev;
    matvec_acc(params.out_hidden.value, h.span(), cache.combined.span());
    matvec_acc(params.out_ctx.value, context.span(), cache.combined.span());
    Tensor logits({Alphabet::kSize});
    matvec_acc(params.out_embed.value, cache.combined.span(), logits.span());
    return logits;
}

void output_backward(DecoderParams& params, const Tensor& embedded_prev, const Tensor& h,
                     const Tensor& context, const OutputCache& cache, const Tensor& grad_logits,
                     Tensor& grad_embedded, Tensor& grad_h, Tensor& grad_context) {
    (void)embedded_prev;
    for (std::size_t r = 0; r < Alphabet::kSize; ++r) {
        kern::axpy(grad_logits[r], cache.combined.data(), params.out_embed.grad.row(r),
                   cache.combined.size());
    }
    Tensor grad_combined({params.embed_dim()});
    matvec_t_acc(params.out_embed.value, grad_logits.span(), grad_combined.span());

    for (std::size_t r = 0; r < params.embed_dim(); ++r) {
        kern::axpy(grad_combined[r], h.data(), params.out_hidden.grad.row(r), h.size());
        kern::axpy(grad_combined[r], context.data(), params.out_ctx.grad.row(r), context.size());
    }
    matvec_t_acc(params.out_hidden.value, grad_combined.span(), grad_h.span());
    matvec_t_acc(params.out_ctx.value, grad_combined.span(), grad_context.span());
    kern::vadd(grad_combined.data(), grad_embedded.data(), grad_combined.size());
}

} // namespace glyphbeam
