#pragma once

// Deterministic synthetic word-image generator. Words are typeset from
// built-in 8x6 glyph bitmaps, scaled, jittered, and corrupted with Gaussian
// noise, producing 32-px-tall grayscale images with attached labels.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "glyphbeam/dataset.hpp"
#include "glyphbeam/tensor.hpp"

namespace glyphbeam {

inline constexpr std::size_t kGlyphRows = 8;
inline constexpr std::size_t kGlyphCols = 6;

// Bitmap for a symbol in a-z0-9, row-major, true = foreground.
const std::vector<bool>& glyph_bitmap(char c);

struct RenderConfig {
    std::size_t height = 32;     // canvas height; matches the encoder input
    std::size_t scale = 3;       // glyph pixel scale
    std::size_t jitter = 1;      // per-glyph placement jitter, +- pixels
    double noise_sigma = 0.03;   // additive Gaussian noise
    double bg_lo = 0.0, bg_hi = 0.15;
    double fg_lo = 0.75, fg_hi = 1.0;
    std::size_t min_width = 32;  // canvas padded to at least this width
    std::uint64_t seed = 0;
};

// Renders one word. Deterministic for a fixed (word, config). Throws
// input_error for characters outside the alphabet or words longer than 20.
Tensor render_word(const std::string& word, const RenderConfig& config);

// samples_per_word renders per word with distinct derived seeds, then a
// seeded shuffle of the whole set.
Dataset generate_dataset(const std::vector<std::string>& corpus, std::size_t samples_per_word,
                         const RenderConfig& config);

// Train/test renders of the same vocabulary with disjoint render seeds
// (in-vocabulary evaluation: same words, unseen renders).
std::pair<Dataset, Dataset> generate_split(const std::vector<std::string>& corpus,
                                           std::size_t train_per_word, std::size_t test_per_word,
                                           const RenderConfig& config);

// Vocabulary split with zero word overlap (out-of-vocabulary evaluation).
std::pair<std::vector<std::string>, std::vector<std::string>>
split_words(const std::vector<std::string>& words, double heldout_fraction, std::uint64_t seed);

// count distinct random words over a-z0-9 with lengths in [min_len, max_len].
std::vector<std::string> random_words(std::size_t count, std::size_t min_len, std::size_t max_len,
                                      std::uint64_t seed);

} // namespace glyphbeam
