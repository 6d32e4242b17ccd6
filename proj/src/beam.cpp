#include "glyphbeam/beam.hpp"

#include <algorithm>
#include <cmath>

namespace glyphbeam {
namespace {

// END maps to the full alphabet's END for LM queries on reduced alphabets.
std::size_t lm_symbol(const SequenceModel& model, std::size_t symbol) {
    return symbol == model.end_symbol() ? Alphabet::kEnd : symbol;
}

bool better(const Hypothesis& a, const Hypothesis& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.chars < b.chars;
}

bool better_result(const DecodeHypothesis& a, const DecodeHypothesis& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
}

} // namespace

std::vector<Hypothesis> hypothesis_extend(const SequenceModel& model, const Hypothesis& hyp,
                                          const SequenceModel::StepResult& step,
                                          const DecodeConfig& config) {
    std::vector<Hypothesis> children;
    const std::size_t end = model.end_symbol();
    const bool at_cap = hyp.chars.size() + 1 >= config.max_len;
    const bool use_lm = (config.lm != nullptr);

    for (std::size_t sym = 0; sym < model.symbol_count(); ++sym) {
        const bool is_end = (sym == end);
        if (!is_end && at_cap) continue;

        std::int32_t next_node = hyp.trie_node;
        if (config.trie != nullptr) {
            if (is_end) {
                if (hyp.trie_node < 0 || !config.trie->word_end(hyp.trie_node)) continue;
            } else {
                next_node = config.trie->child(hyp.trie_node, sym);
                if (next_node < 0) continue;
            }
        }

        double score = hyp.score + step.logprobs[sym];
        if (use_lm && (!is_end || config.lm_score_end)) {
            score = score + config.lm_weight * ngram_logprob(*config.lm, hyp.chars,
                                                             lm_symbol(model, sym));
        }

        Hypothesis child;
        child.chars = hyp.chars;
        child.score = score;
        child.trie_node = next_node;
        if (is_end) {
            child.completed = true;
        } else {
            child.chars.push_back(Alphabet::char_at(sym));
            child.state = model.commit(step.post, sym);
        }
        children.push_back(std::move(child));
    }
    return children;
}

std::vector<DecodeHypothesis> beam_decode(const SequenceModel& model, const DecodeConfig& config) {
    if (config.beam_width < 1) throw input_error("beam width must be >= 1");
    if (config.lm_weight < 0.0) throw input_error("LM weight must be >= 0");

    Hypothesis root;
    root.state = model.start();
    root.trie_node = config.trie != nullptr ? config.trie->root() : -1;
    if (config.trie != nullptr && (root.trie_node < 0 || config.trie->empty_words())) {
        // no word can ever complete against an empty lexicon
        return {};
    }

    std::vector<Hypothesis> open{std::move(root)};
    std::vector<DecodeHypothesis> closed;
    std::vector<DecodeHypothesis> dead_ends;

    const std::size_t width = config.beam_width;
    while (!open.empty()) {
        std::vector<Hypothesis> candidates;
        for (Hypothesis& hyp : open) {
            const SequenceModel::StepResult step = model.step(hyp.state);
            std::vector<Hypothesis> children = hypothesis_extend(model, hyp, step, config);
            if (children.empty()) {
                dead_ends.push_back({hyp.chars, hyp.score, false});
                continue;
            }
            for (Hypothesis& child : children) {
                if (child.completed) {
                    closed.push_back({child.chars, child.score, true});
                } else {
                    candidates.push_back(std::move(child));
                }
            }
        }
        std::sort(candidates.begin(), candidates.end(), better);
        if (candidates.size() > width) candidates.resize(width);
        open = std::move(candidates);

        if (closed.size() >= width) {
            std::sort(closed.begin(), closed.end(), better_result);
            // scores never increase along a branch, so once the best open
            // hypothesis scores below the N-th closed word it can be dropped
            if (open.empty() || open.front().score < closed[width - 1].score) break;
        }
    }

    std::sort(closed.begin(), closed.end(), better_result);
    if (closed.size() > width) closed.resize(width);
    if (!closed.empty()) return closed;

    std::sort(dead_ends.begin(), dead_ends.end(), better_result);
    if (dead_ends.size() > width) dead_ends.resize(width);
    return dead_ends;
}

namespace {

struct NeuralState final : SequenceState {
    std::shared_ptr<const Tensor> h, c;
    std::size_t step = 0;
    // SIZE_MAX marks the pre-first-step state (zero previous-output vector)
    std::size_t prev_symbol = SIZE_MAX;
};

} // namespace

StatePtr NeuralSequenceModel::start() const {
    DecoderState init = model_.initial_state(grid_.features);
    auto state = std::make_shared<NeuralState>();
    state->h = std::make_shared<Tensor>(std::move(init.h));
    state->c = std::make_shared<Tensor>(std::move(init.c));
    state->step = 0;
    return state;
}

SequenceModel::StepResult NeuralSequenceModel::step(const StatePtr& state) const {
    const auto& ns = static_cast<const NeuralState&>(*state);
    DecoderState ds;
    ds.h = *ns.h;
    ds.c = *ns.c;
    ds.step = ns.step;
    ds.y_prev = Tensor({Alphabet::kSize});
    if (ns.prev_symbol != SIZE_MAX) ds.y_prev[ns.prev_symbol] = 1.0;

    StepOutput out = model_.decode_step(grid_, ds);

    StepResult result;
    result.logprobs.resize(Alphabet::kSize);
    for (std::size_t i = 0; i < Alphabet::kSize; ++i) result.logprobs[i] = std::log(out.probs[i]);
    auto post = std::make_shared<NeuralState>();
    post->h = std::make_shared<Tensor>(std::move(out.state.h));
    post->c = std::make_shared<Tensor>(std::move(out.state.c));
    post->step = out.state.step;
    result.post = post;
    return result;
}

StatePtr NeuralSequenceModel::commit(const StatePtr& post, std::size_t symbol) const {
    const auto& ns = static_cast<const NeuralState&>(*post);
    auto next = std::make_shared<NeuralState>();
    next->h = ns.h;
    next->c = ns.c;
    next->step = ns.step;
    next->prev_symbol = symbol;
    return next;
}

std::vector<DecodeHypothesis> beam_decode(const Model& model, const Tensor& image,
                                          const DecodeConfig& config) {
    FeatureGrid grid = model.encoder().encode(normalize_image(image));
    NeuralSequenceModel seq(model, std::move(grid));
    return beam_decode(seq, config);
}

} // namespace glyphbeam
