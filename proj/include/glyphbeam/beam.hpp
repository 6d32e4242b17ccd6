#pragma once

// Top-N beam search over per-step symbol distributions, with optional n-gram
// LM fusion and trie-constrained pruning. The engine is generic over a
// SequenceModel so the same search drives the neural recognizer, synthetic
// emission tables in tests, and the exhaustive-enumeration oracle.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "glyphbeam/lexicon.hpp"
#include "glyphbeam/model.hpp"
#include "glyphbeam/ngram.hpp"

namespace glyphbeam {

// Opaque immutable search state shared between hypotheses.
struct SequenceState {
    virtual ~SequenceState() = default;
};
using StatePtr = std::shared_ptr<const SequenceState>;

// Conditional symbol distributions over an alphabet whose last index is END.
// Reduced alphabets (tests) use the first symbol_count()-1 characters of the
// standard alphabet plus END.
class SequenceModel {
public:
    virtual ~SequenceModel() = default;

    struct StepResult {
        std::vector<double> logprobs; // [symbol_count()]
        StatePtr post;                // state after the step, before symbol commit
    };

    virtual std::size_t symbol_count() const = 0;
    virtual StatePtr start() const = 0;
    virtual StepResult step(const StatePtr& state) const = 0;
    virtual StatePtr commit(const StatePtr& post, std::size_t symbol) const = 0;

    std::size_t end_symbol() const { return symbol_count() - 1; }
};

struct DecodeConfig {
    std::size_t beam_width = 16;        // N
    double lm_weight = 0.25;            // alpha
    const NgramModel* lm = nullptr;     // optional fusion model
    bool lm_score_end = true;           // apply the LM term to END emission
    const LexiconTrie* trie = nullptr;  // optional pruning trie
    std::size_t max_len = 32;           // max emitted symbols per hypothesis, END included
};

struct Hypothesis {
    std::string chars;  // emitted characters (END excluded)
    double score = 0.0; // cumulative log score
    StatePtr state;
    std::int32_t trie_node = -1;
    bool completed = false;
};

struct DecodeHypothesis {
    std::string word;
    double score = 0.0;
    bool completed = false;
};

// One child per allowed symbol; trie-pruned symbols produce no child. END
// children come back completed. The step-cap rule: a hypothesis holding
// max_len-1 characters may only take END.
std::vector<Hypothesis> hypothesis_extend(const SequenceModel& model, const Hypothesis& hyp,
                                          const SequenceModel::StepResult& step,
                                          const DecodeConfig& config);

// Ranked completed hypotheses, best first, at most beam_width. Ties in score
// break to the lexicographically smaller character sequence. When nothing
// completes within the cap, the best dead-end hypotheses are returned with
// completed = false.
std::vector<DecodeHypothesis> beam_decode(const SequenceModel& model, const DecodeConfig& config);

// Neural adapter: the recognizer's decoder exposed as a SequenceModel over a
// fixed encoded image.
class NeuralSequenceModel final : public SequenceModel {
public:
    NeuralSequenceModel(const Model& model, FeatureGrid grid)
        : model_(model), grid_(std::move(grid)) {}

    std::size_t symbol_count() const override { return Alphabet::kSize; }
    StatePtr start() const override;
    StepResult step(const StatePtr& state) const override;
    StatePtr commit(const StatePtr& post, std::size_t symbol) const override;

    const FeatureGrid& grid() const { return grid_; }

private:
    const Model& model_;
    FeatureGrid grid_;
};

// Encode + beam search in one call.
std::vector<DecodeHypothesis> beam_decode(const Model& model, const Tensor& image,
                                          const DecodeConfig& config);

} // namespace glyphbeam
