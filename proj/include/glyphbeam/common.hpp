#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace glyphbeam {

// Error raised when tensor / image dimensions do not line up.
struct shape_error : std::runtime_error {
    explicit shape_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Error raised on invalid user-supplied values (bad characters, empty corpora, ...).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Error raised when a computation produces non-finite values.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The recognizer's symbol set: a-z, 0-9, plus a terminating END symbol.
// Indices are dense, END is last.
class Alphabet {
public:
    static constexpr std::size_t kSize = 37;       // 26 letters + 10 digits + END
    static constexpr std::size_t kEnd = kSize - 1; // index of END

    // Index of a printable symbol. Throws input_error for anything outside a-z0-9.
    static std::size_t index_of(char c);

    // Printable symbol for an index < kEnd. END has no character form.
    static char char_at(std::size_t index);

    static bool is_valid_char(char c);

    // Index sequence for a word (END not appended). Throws on invalid characters.
    static std::vector<std::size_t> encode(const std::string& word);

    // Word string from indices; stops at the first END.
    static std::string decode(const std::vector<std::size_t>& indices);
};

} // namespace glyphbeam
