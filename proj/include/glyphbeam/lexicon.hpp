#pragma once

// Prefix trie over a word list for constrained decoding, plus the
// Levenshtein nearest-word fallback.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "glyphbeam/common.hpp"

namespace glyphbeam {

class LexiconTrie {
public:
    LexiconTrie() = default;

    // Duplicates collapse. Throws input_error on invalid characters.
    static LexiconTrie build(const std::vector<std::string>& words);

    struct PrefixQuery {
        bool is_prefix = false; // some stored word starts with the prefix
        bool is_word = false;   // the prefix itself is a stored word
    };

    // The empty prefix is a valid prefix of a non-empty trie, never a word.
    PrefixQuery has_prefix(const std::string& prefix) const;
    bool contains(const std::string& word) const;

    // Child lookup by symbol index for beam pruning; -1 when absent.
    std::int32_t root() const { return nodes_.empty() ? -1 : 0; }
    std::int32_t child(std::int32_t node, std::size_t symbol) const {
        return nodes_[static_cast<std::size_t>(node)].child[symbol];
    }
    bool word_end(std::int32_t node) const {
        return nodes_[static_cast<std::size_t>(node)].is_word;
    }

    std::size_t word_count() const { return word_count_; }
    // Nodes excluding the root.
    std::size_t node_count() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }
    bool empty_words() const { return word_count_ == 0; }

private:
    struct Node {
        std::array<std::int32_t, 36> child;
        bool is_word = false;
        Node() { child.fill(-1); }
    };
    std::vector<Node> nodes_; // nodes_[0] is the root
    std::size_t word_count_ = 0;
};

std::size_t levenshtein(const std::string& a, const std::string& b);

// Word with minimal edit distance to the query; ties break to the
// lexicographically smallest. Throws input_error on an empty word list.
std::string nearest_word(const std::vector<std::string>& words, const std::string& query);

} // namespace glyphbeam
