#include "glyphbeam/common.hpp"

namespace glyphbeam {

std::size_t Alphabet::index_of(char c) {
    if (c >= 'a' && c <= 'z') return static_cast<std::size_t>(c - 'a');
    if (c >= '0' && c <= '9') return 26 + static_cast<std::size_t>(c - '0');
    throw input_error(std::string("character '") + c + "' is not in the alphabet [a-z0-9]");
}

char Alphabet::char_at(std::size_t index) {
    if (index < 26) return static_cast<char>('a' + index);
    if (index < 36) return static_cast<char>('0' + (index - 26));
    throw input_error("alphabet index " + std::to_string(index) + " has no character form");
}

bool Alphabet::is_valid_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

std::vector<std::size_t> Alphabet::encode(const std::string& word) {
    std::vector<std::size_t> out;
    out.reserve(word.size());
    for (char c : word) out.push_back(index_of(c));
    return out;
}

std::string Alphabet::decode(const std::vector<std::size_t>& indices) {
    std::string out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i == kEnd) break;
        out.push_back(char_at(i));
    }
    return out;
}

} // namespace glyphbeam
