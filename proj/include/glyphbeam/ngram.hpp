#pragma once

// Character n-gram language model trained by counting over a word corpus.
// Contexts of length 0..max_order-1 are stored; queries use the longest
// stored context that is a suffix of the query history (stupid-backoff
// style), with add-delta smoothing inside the matched table. Word
// termination (END) is a first-class event.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "glyphbeam/common.hpp"

namespace glyphbeam {

struct NgramModel {
    struct ContextCounts {
        std::array<std::uint64_t, Alphabet::kSize> counts{};
        std::uint64_t total = 0;
    };

    std::size_t max_order = 6;
    double delta = 0.1;
    std::map<std::string, ContextCounts> tables;

    bool fitted() const { return !tables.empty(); }
};

// Counts all contexts of length 0..max_order-1; every word is terminated by
// END for counting. Throws input_error on characters outside the alphabet.
NgramModel fit_ngram(const std::vector<std::string>& corpus, std::size_t max_order,
                     double delta = 0.1);

// P(symbol | context). The context is truncated to its (max_order-1)-suffix,
// then backed off to the longest stored suffix. Unfitted models are uniform.
double ngram_prob(const NgramModel& model, const std::string& context, std::size_t symbol);
double ngram_logprob(const NgramModel& model, const std::string& context, std::size_t symbol);

} // namespace glyphbeam
