#pragma once

// LSTM decoder step, output-symbol embedding, and the deep output layer that
// turns (previous symbol, hidden state, context vector) into a distribution
// over the alphabet.

#include <random>

#include "glyphbeam/common.hpp"
#include "glyphbeam/params.hpp"
#include "glyphbeam/tensor.hpp"

namespace glyphbeam {

struct DecoderParams {
    // gate pre-activations: [i; f; o; g] = gate * [embedded_prev; h_prev; context]
    Param gate;       // [4H x (M+H+D)]
    Param embedding;  // [|L| x M]
    Param out_embed;  // [|L| x M]  logits = out_embed * combined
    Param out_hidden; // [M x H]
    Param out_ctx;    // [M x D]
    Param init_h_w;   // [H x D]  h0 = tanh(init_h_w * mean_feature + init_h_b)
    Param init_h_b;   // [H]
    Param init_c_w;   // [H x D]
    Param init_c_b;   // [H]

    static DecoderParams create(std::size_t hidden_dim, std::size_t embed_dim,
                                std::size_t feature_dim, std::mt19937_64& rng);

    std::size_t hidden_dim() const { return init_h_b.value.size(); }
    std::size_t embed_dim() const { return embedding.value.dim(1); }
    std::size_t feature_dim() const { return out_ctx.value.dim(1); }

    void collect_params(std::vector<ParamRef>& out);
};

struct DecoderState {
    Tensor h;      // [H]
    Tensor c;      // [H]
    Tensor y_prev; // [|L|] distribution or one-hot; all-zero before the first step
    std::size_t step = 0;

    static DecoderState initial(std::size_t hidden_dim);
};

// embedded = embedding^T * y  (a weighted mix of embedding rows)
Tensor embed_output(const DecoderParams& params, const Tensor& y);
void embed_backward(DecoderParams& params, const Tensor& y, const Tensor& grad_embedded);

struct LstmCache {
    Tensor input;  // [M+H+D]
    Tensor gates;  // [4H] post-activation, blocks i, f, o, g
    Tensor c_prev; // [H]
    Tensor tanh_c; // [H] tanh of the new cell
};

// One LSTM step. The returned state keeps y_prev and advances the step count.
DecoderState lstm_step(const DecoderState& state, const Tensor& context,
                       const DecoderParams& params);
DecoderState lstm_step(const DecoderState& state, const Tensor& context,
                       const DecoderParams& params, LstmCache& cache);

// Adds gradients for the gate matrix; accumulates into the input-side grads.
void lstm_backward(DecoderParams& params, const LstmCache& cache, const Tensor& grad_h,
                   const Tensor& grad_c, Tensor& grad_embedded, Tensor& grad_h_prev,
                   Tensor& grad_c_prev, Tensor& grad_context);

struct OutputCache {
    Tensor combined; // [M]
    Tensor probs;    // [|L|]
};

// P(y_t | ...) = softmax(out_embed * (embedded_prev + out_hidden h + out_ctx z))
Tensor output_distribution(const Tensor& y_prev, const Tensor& h, const Tensor& context,
                           const DecoderParams& params);
Tensor output_logits(const Tensor& embedded_prev, const Tensor& h, const Tensor& context,
                     const DecoderParams& params, OutputCache& cache);
void output_backward(DecoderParams& params, const Tensor& embedded_prev, const Tensor& h,
                     const Tensor& context, const OutputCache& cache, const Tensor& grad_logits,
                     Tensor& grad_embedded, Tensor& grad_h, Tensor& grad_context);

} // namespace glyphbeam
