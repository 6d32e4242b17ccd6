#include "glyphbeam/model.hpp"

#include <cmath>

#include "glyphbeam/kernels.hpp"

namespace glyphbeam {

ModelConfig ModelConfig::small() {
    ModelConfig cfg;
    cfg.encoder.input_height = 32;
    cfg.encoder.layers = {{8, 2, 2}, {16, 2, 4}, {32, 1, 1}};
    cfg.attn_dim = 32;
    cfg.hidden_dim = 96;
    cfg.embed_dim = 48;
    return cfg;
}

Model Model::create(const ModelConfig& config, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Model m;
    m.config_ = config;
    m.encoder_ = Encoder::create(config.encoder, rng);
    m.attention_ = AttentionParams::create(m.encoder_.feature_dim(), config.hidden_dim,
                                           config.attn_dim, rng);
    m.decoder_ = DecoderParams::create(config.hidden_dim, config.embed_dim,
                                       m.encoder_.feature_dim(), rng);
    return m;
}

std::vector<ParamRef> Model::params() {
    std::vector<ParamRef> out;
    encoder_.collect_params(out);
    attention_.collect_params(out);
    decoder_.collect_params(out);
    return out;
}

void Model::zero_grads() {
    for (ParamRef& ref : params()) ref.param->zero_grad();
}

Tensor mean_feature(const Tensor& features) {
    const std::size_t cells = features.dim(0), feat = features.dim(1);
    Tensor mean({feat});
    for (std::size_t i = 0; i < cells; ++i) kern::axpy(1.0, features.row(i), mean.data(), feat);
    kern::scale(1.0 / static_cast<double>(cells), mean.data(), feat);
    return mean;
}

DecoderState Model::initial_state(const Tensor& features) const {
    InitStateCache cache;
    return initial_state(features, cache);
}

DecoderState Model::initial_state(const Tensor& features, InitStateCache& cache) const {
    cache.mean_feature = mean_feature(features);
    const std::size_t hid = config_.hidden_dim;
    DecoderState state = DecoderState::initial(hid);
    cache.h0 = Tensor({hid});
    cache.c0 = Tensor({hid});
    matvec_acc(decoder_.init_h_w.value, cache.mean_feature.span(), cache.h0.span());
    matvec_acc(decoder_.init_c_w.value, cache.mean_feature.span(), cache.c0.span());
    for (std::size_t i = 0; i < hid; ++i) {
        cache.h0[i] = std::tanh(cache.h0[i] + decoder_.init_h_b.value[i]);
        cache.c0[i] = std::tanh(cache.c0[i] + decoder_.init_c_b.value[i]);
    }
    state.h = cache.h0;
    state.c = cache.c0;
    return state;
}

void initial_state_backward(DecoderParams& params, const InitStateCache& cache,
                            const Tensor& grad_h0, const Tensor& grad_c0, Tensor& grad_features) {
    const std::size_t hid = params.hidden_dim();
    Tensor grad_mean({params.feature_dim()});
    Tensor pre({hid});
    for (std::size_t i = 0; i < hid; ++i) pre[i] = grad_h0[i] * (1.0 - cache.h0[i] * cache.h0[i]);
    kern::vadd(pre.data(), params.init_h_b.grad.data(), hid);
    for (std::size_t i = 0; i < hid; ++i) {
        kern::axpy(pre[i], cache.mean_feature.data(), params.init_h_w.grad.row(i),
                   cache.mean_feature.size());
    }
    matvec_t_acc(params.init_h_w.value, pre.span(), grad_mean.span());

    for (std::size_t i = 0; i < hid; ++i) pre[i] = grad_c0[i] * (1.0 - cache.c0[i] * cache.c0[i]);
    kern::vadd(pre.data(), params.init_c_b.grad.data(), hid);
    for (std::size_t i = 0; i < hid; ++i) {
        kern::axpy(pre[i], cache.mean_feature.data(), params.init_c_w.grad.row(i),
                   cache.mean_feature.size());
    }
    matvec_t_acc(params.init_c_w.value, pre.span(), grad_mean.span());

    const std::size_t cells = grad_features.dim(0);
    const double inv = 1.0 / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        kern::axpy(inv, grad_mean.data(), grad_features.row(i), grad_mean.size());
    }
}

Tensor Model::step_context(const Tensor& features, const DecoderState& state,
                           AttentionStep* attn_out, AttentionCache* attn_cache) const {
    if (config_.use_attention) {
        AttentionCache local;
        AttentionStep step = attend(features, state.h, attention_, attn_cache ? *attn_cache : local);
        Tensor ctx = step.context;
        if (attn_out != nullptr) *attn_out = std::move(step);
        return ctx;
    }
    // baseline: image summary only at the first step
    if (state.step == 0) return mean_feature(features);
    return Tensor({feature_dim()});
}

StepOutput Model::decode_step(const FeatureGrid& features, const DecoderState& state) const {
    StepOutput out;
    Tensor context = step_context(features.features, state, &out.attn, nullptr);
    out.state = lstm_step(state, context, decoder_);
    out.probs = output_distribution(state.y_prev, out.state.h, context, decoder_);
    return out;
}

void Model::commit_symbol(DecoderState& state, std::size_t symbol) {
    state.y_prev.fill(0.0);
    state.y_prev[symbol] = 1.0;
}

GreedyResult Model::greedy_decode(const Tensor& image) const {
    return greedy_decode(encoder_.encode(normalize_image(image)));
}

GreedyResult Model::greedy_decode(const FeatureGrid& grid) const {
    GreedyResult result;
    DecoderState state = initial_state(grid.features);
    for (std::size_t t = 0; t < config_.max_decode_steps; ++t) {
        StepOutput step = decode_step(grid, state);
        std::size_t best = 0;
        for (std::size_t c = 1; c < Alphabet::kSize; ++c) {
            if (step.probs[c] > step.probs[best]) best = c;
        }
        result.score += std::log(step.probs[best]);
        if (config_.use_attention) result.attention_maps.push_back(step.attn.weights);
        if (best == Alphabet::kEnd) {
            result.completed = true;
            break;
        }
        result.symbols.push_back(best);
        result.word.push_back(Alphabet::char_at(best));
        state = std::move(step.state);
        commit_symbol(state, best);
    }
    return result;
}

} // namespace glyphbeam
