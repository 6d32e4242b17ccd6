#pragma once

// Full recognizer: encoder + attention + decoder, composed into per-step
// decoding with a greedy driver. The no-attention baseline variant feeds the
// mean feature vector at the first step and zeros afterwards.

#include <optional>
#include <string>

#include "glyphbeam/attention.hpp"
#include "glyphbeam/decoder.hpp"
#include "glyphbeam/encoder.hpp"

namespace glyphbeam {

struct ModelConfig {
    EncoderConfig encoder = EncoderConfig::default_config();
    std::size_t attn_dim = 64;
    std::size_t hidden_dim = 256;
    std::size_t embed_dim = 128;
    bool use_attention = true;
    std::size_t max_decode_steps = 32;

    static ModelConfig default_config() { return {}; }

    // Reduced sizes for fast desk-scale experiments and tests.
    static ModelConfig small();
};

struct InitStateCache {
    Tensor mean_feature; // [D]
    Tensor h0, c0;       // post-tanh values
};

struct StepOutput {
    AttentionStep attn; // weights empty in no-attention mode
    DecoderState state;
    Tensor probs; // [|L|]
};

struct GreedyResult {
    std::string word;
    double score = 0.0; // sum of log-probs of emitted symbols (incl. END)
    bool completed = false;
    std::vector<std::size_t> symbols;    // emitted symbol indices (END excluded)
    std::vector<Tensor> attention_maps;  // per-step weights when attention is on
};

class Model {
public:
    Model() = default;

    static Model create(const ModelConfig& config, std::uint64_t seed);

    const ModelConfig& config() const { return config_; }
    Encoder& encoder() { return encoder_; }
    const Encoder& encoder() const { return encoder_; }
    AttentionParams& attention() { return attention_; }
    const AttentionParams& attention() const { return attention_; }
    DecoderParams& decoder() { return decoder_; }
    const DecoderParams& decoder() const { return decoder_; }

    std::size_t feature_dim() const { return encoder_.feature_dim(); }

    // All learnable tensors in fixed order.
    std::vector<ParamRef> params();
    void zero_grads();

    DecoderState initial_state(const Tensor& features) const;
    DecoderState initial_state(const Tensor& features, InitStateCache& cache) const;

    // Context vector for one step: soft attention, or the baseline schedule.
    Tensor step_context(const Tensor& features, const DecoderState& state,
                        AttentionStep* attn_out, AttentionCache* attn_cache) const;

    // attend -> lstm_step -> output_distribution, composed. The returned
    // state keeps the incoming y_prev; callers commit the emitted symbol via
    // commit_symbol before the next step.
    StepOutput decode_step(const FeatureGrid& features, const DecoderState& state) const;

    static void commit_symbol(DecoderState& state, std::size_t symbol);

    // Argmax stepping until END or the step cap.
    GreedyResult greedy_decode(const Tensor& image) const;
    GreedyResult greedy_decode(const FeatureGrid& grid) const;

private:
    ModelConfig config_;
    Encoder encoder_;
    AttentionParams attention_;
    DecoderParams decoder_;
};

// Column-wise mean of a [K x D] feature matrix.
Tensor mean_feature(const Tensor& features);

// Backward of initial_state: accumulates init-map gradients and spreads the
// mean-feature gradient over all K cells.
void initial_state_backward(DecoderParams& params, const InitStateCache& cache,
                            const Tensor& grad_h0, const Tensor& grad_c0, Tensor& grad_features);

} // namespace glyphbeam
