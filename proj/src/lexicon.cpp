#include "glyphbeam/lexicon.hpp"

#include <algorithm>

namespace glyphbeam {

LexiconTrie LexiconTrie::build(const std::vector<std::string>& words) {
    LexiconTrie trie;
    trie.nodes_.emplace_back(); // root
    for (const std::string& word : words) {
        if (word.empty()) throw input_error("lexicon words must be non-empty");
        std::int32_t node = 0;
        for (char c : word) {
            const std::size_t sym = Alphabet::index_of(c); // validates
            std::int32_t next = trie.nodes_[static_cast<std::size_t>(node)].child[sym];
            if (next < 0) {
                next = static_cast<std::int32_t>(trie.nodes_.size());
                trie.nodes_.emplace_back();
                trie.nodes_[static_cast<std::size_t>(node)].child[sym] = next;
            }
            node = next;
        }
        if (!trie.nodes_[static_cast<std::size_t>(node)].is_word) {
            trie.nodes_[static_cast<std::size_t>(node)].is_word = true;
            ++trie.word_count_;
        }
    }
    return trie;
}

LexiconTrie::PrefixQuery LexiconTrie::has_prefix(const std::string& prefix) const {
    PrefixQuery q;
    if (nodes_.empty() || word_count_ == 0) return q;
    std::int32_t node = 0;
    for (char c : prefix) {
        if (!Alphabet::is_valid_char(c)) return q;
        node = nodes_[static_cast<std::size_t>(node)].child[Alphabet::index_of(c)];
        if (node < 0) return q;
    }
    q.is_prefix = true;
    q.is_word = nodes_[static_cast<std::size_t>(node)].is_word;
    return q;
}

bool LexiconTrie::contains(const std::string& word) const { return has_prefix(word).is_word; }

std::size_t levenshtein(const std::string& a, const std::string& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

std::string nearest_word(const std::vector<std::string>& words, const std::string& query) {
    if (words.empty()) throw input_error("nearest_word requires a non-empty lexicon");
    const std::string* best = nullptr;
    std::size_t best_dist = 0;
    for (const std::string& w : words) {
        const std::size_t d = levenshtein(w, query);
        if (best == nullptr || d < best_dist || (d == best_dist && w < *best)) {
            best = &w;
            best_dist = d;
        }
    }
    return *best;
}

} // namespace glyphbeam
