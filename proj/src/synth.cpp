#include "glyphbeam/synth.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "glyphbeam/common.hpp"

namespace glyphbeam {
namespace {

// 8 rows x 6 cols per symbol, '#' = foreground.
constexpr std::array<const char*, 36> kGlyphArt = {
    // a
    "......"
    "......"
    ".###.."
    "....#."
    ".####."
    "#...#."
    ".####."
    "......",
    // b
    "#....."
    "#....."
    "####.."
    "#...#."
    "#...#."
    "#...#."
    "####.."
    "......",
    // c
    "......"
    "......"
    ".####."
    "#....."
    "#....."
    "#....."
    ".####."
    "......",
    // d
    "....#."
    "....#."
    ".####."
    "#...#."
    "#...#."
    "#...#."
    ".####."
    "......",
    // e
    "......"
    "......"
    ".###.."
    "#...#."
    "#####."
    "#....."
    ".####."
    "......",
    // f
    "..##.."
    ".#...."
    "####.."
    ".#...."
    ".#...."
    ".#...."
    ".#...."
    "......",
    // g
    "......"
    "......"
    ".####."
    "#...#."
    "#...#."
    ".####."
    "....#."
    ".###..",
    // h
    "#....."
    "#....."
    "####.."
    "#...#."
    "#...#."
    "#...#."
    "#...#."
    "......",
    // i
    "..#..."
    "......"
    ".##..."
    "..#..."
    "..#..."
    "..#..."
    ".###.."
    "......",
    // j
    "...#.."
    "......"
    "..##.."
    "...#.."
    "...#.."
    "#..#.."
    ".##..."
    "......",
    // k
    "#....."
    "#....."
    "#..#.."
    "#.#..."
    "##...."
    "#.#..."
    "#..#.."
    "......",
    // l
    ".##..."
    "..#..."
    "..#..."
    "..#..."
    "..#..."
    "..#..."
    ".###.."
    "......",
    // m
    "......"
    "......"
    "##.#.."
    "#.#.#."
    "#.#.#."
    "#.#.#."
    "#.#.#."
    "......",
    // n
    "......"
    "......"
    "####.."
    "#...#."
    "#...#."
    "#...#."
    "#...#."
    "......",
    // o
    "......"
    "......"
    ".###.."
    "#...#."
    "#...#."
    "#...#."
    ".###.."
    "......",
    // p
    "......"
    "......"
    "####.."
    "#...#."
    "####.."
    "#....."
    "#....."
    "......",
    // q
    "......"
    "......"
    ".####."
    "#...#."
    ".####."
    "....#."
    "....#."
    "......",
    // r
    "......"
    "......"
    "#.##.."
    "##...."
    "#....."
    "#....."
    "#....."
    "......",
    // s
    "......"
    "......"
    ".####."
    "#....."
    ".###.."
    "....#."
    "####.."
    "......",
    // t
    ".#...."
    ".#...."
    "####.."
    ".#...."
    ".#...."
    ".#..#."
    "..##.."
    "......",
    // u
    "......"
    "......"
    "#...#."
    "#...#."
    "#...#."
    "#...#."
    ".####."
    "......",
    // v
    "......"
    "......"
    "#...#."
    "#...#."
    "#...#."
    ".#.#.."
    "..#..."
    "......",
    // w
    "......"
    "......"
    "#.#.#."
    "#.#.#."
    "#.#.#."
    "#.#.#."
    ".#.#.."
    "......",
    // x
    "......"
    "......"
    "#...#."
    ".#.#.."
    "..#..."
    ".#.#.."
    "#...#."
    "......",
    // y
    "......"
    "......"
    "#...#."
    "#...#."
    ".####."
    "....#."
    ".###.."
    "......",
    // z
    "......"
    "......"
    "#####."
    "...#.."
    "..#..."
    ".#...."
    "#####."
    "......",
    // 0
    ".###.."
    "#...#."
    "#..##."
    "#.#.#."
    "##..#."
    "#...#."
    ".###.."
    "......",
    // 1
    "..#..."
    ".##..."
    "..#..."
    "..#..."
    "..#..."
    "..#..."
    ".###.."
    "......",
    // 2
    ".###.."
    "#...#."
    "....#."
    "...#.."
    "..#..."
    ".#...."
    "#####."
    "......",
    // 3
    ".###.."
    "#...#."
    "....#."
    "..##.."
    "....#."
    "#...#."
    ".###.."
    "......",
    // 4
    "...#.."
    "..##.."
    ".#.#.."
    "#..#.."
    "#####."
    "...#.."
    "...#.."
    "......",
    // 5
    "#####."
    "#....."
    "####.."
    "....#."
    "....#."
    "#...#."
    ".###.."
    "......",
    // 6
    "..##.."
    ".#...."
    "#....."
    "####.."
    "#...#."
    "#...#."
    ".###.."
    "......",
    // 7
    "#####."
    "....#."
    "...#.."
    "...#.."
    "..#..."
    "..#..."
    "..#..."
    "......",
    // 8
    ".###.."
    "#...#."
    "#...#."
    ".###.."
    "#...#."
    "#...#."
    ".###.."
    "......",
    // 9
    ".###.."
    "#...#."
    "#...#."
    ".####."
    "....#."
    "...#.."
    ".##..."
    "......",
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t base, std::size_t word_idx, std::size_t render_idx) {
    return splitmix64(splitmix64(base ^ (0xA24BAED4963EE407ULL + word_idx)) ^ render_idx);
}

} // namespace

const std::vector<bool>& glyph_bitmap(char c) {
    static const std::vector<std::vector<bool>> bitmaps = [] {
        std::vector<std::vector<bool>> out(36);
        for (std::size_t g = 0; g < 36; ++g) {
            out[g].resize(kGlyphRows * kGlyphCols);
            for (std::size_t i = 0; i < kGlyphRows * kGlyphCols; ++i) {
                out[g][i] = (kGlyphArt[g][i] == '#');
            }
        }
        return out;
    }();
    return bitmaps[Alphabet::index_of(c)];
}

Tensor render_word(const std::string& word, const RenderConfig& config) {
    if (word.empty()) throw input_error("cannot render an empty word");
    if (word.size() > 20) {
        throw input_error("word '" + word + "' exceeds the 20-character render limit");
    }
    for (char c : word) {
        if (!Alphabet::is_valid_char(c)) {
            throw input_error(std::string("unsupported character '") + c + "' in word '" + word + "'");
        }
    }

    const std::size_t glyph_h = kGlyphRows * config.scale;
    const std::size_t glyph_w = kGlyphCols * config.scale;
    const std::size_t margin = config.scale + 1;
    const std::size_t gap = 2;
    if (config.height < glyph_h) {
        throw input_error("render height " + std::to_string(config.height) +
                          " is too small for scale " + std::to_string(config.scale));
    }

    const std::size_t text_width =
        2 * margin + word.size() * glyph_w + (word.size() - 1) * gap;
    const std::size_t width = std::max(text_width, config.min_width);
    const std::size_t left_pad = (width - text_width) / 2;

    std::mt19937_64 rng(splitmix64(config.seed));
    std::uniform_real_distribution<double> bg_dist(config.bg_lo, config.bg_hi);
    std::uniform_real_distribution<double> fg_dist(config.fg_lo, config.fg_hi);
    const double bg = bg_dist(rng);
    const double fg = fg_dist(rng);

    Tensor image({config.height, width});
    image.fill(bg);

    const long top = static_cast<long>((config.height - glyph_h) / 2);
    std::uniform_int_distribution<long> jitter_dist(-static_cast<long>(config.jitter),
                                                    static_cast<long>(config.jitter));
    for (std::size_t gi = 0; gi < word.size(); ++gi) {
        const long dx = jitter_dist(rng);
        const long dy = jitter_dist(rng);
        const std::vector<bool>& bitmap = glyph_bitmap(word[gi]);
        const long x0 = static_cast<long>(left_pad + margin + gi * (glyph_w + gap)) + dx;
        const long y0 = top + dy;
        for (std::size_t r = 0; r < kGlyphRows; ++r) {
            for (std::size_t c = 0; c < kGlyphCols; ++c) {
                if (!bitmap[r * kGlyphCols + c]) continue;
                for (std::size_t sr = 0; sr < config.scale; ++sr) {
                    for (std::size_t sc = 0; sc < config.scale; ++sc) {
                        const long y = y0 + static_cast<long>(r * config.scale + sr);
                        const long x = x0 + static_cast<long>(c * config.scale + sc);
                        if (y >= 0 && y < static_cast<long>(config.height) && x >= 0 &&
                            x < static_cast<long>(width)) {
                            image(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = fg;
                        }
                    }
                }
            }
        }
    }

    if (config.noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, config.noise_sigma);
        for (double& v : image.span()) v = std::clamp(v + noise(rng), 0.0, 1.0);
    }
    return image;
}

Dataset generate_dataset(const std::vector<std::string>& corpus, std::size_t samples_per_word,
                         const RenderConfig& config) {
    if (corpus.empty()) throw input_error("corpus is empty");
    Dataset dataset;
    for (std::size_t wi = 0; wi < corpus.size(); ++wi) {
        for (std::size_t k = 0; k < samples_per_word; ++k) {
            RenderConfig rc = config;
            rc.seed = sample_seed(config.seed, wi, k);
            Sample s;
            s.id = corpus[wi] + "-" + std::to_string(k);
            s.label = corpus[wi];
            s.image = render_word(corpus[wi], rc);
            dataset.samples.push_back(std::move(s));
        }
    }
    std::mt19937_64 rng(splitmix64(config.seed ^ 0x517cc1b727220a95ULL));
    std::shuffle(dataset.samples.begin(), dataset.samples.end(), rng);
    return dataset;
}

std::pair<Dataset, Dataset> generate_split(const std::vector<std::string>& corpus,
                                           std::size_t train_per_word, std::size_t test_per_word,
                                           const RenderConfig& config) {
    if (corpus.empty()) throw input_error("corpus is empty");
    Dataset train, test;
    for (std::size_t wi = 0; wi < corpus.size(); ++wi) {
        for (std::size_t k = 0; k < train_per_word + test_per_word; ++k) {
            RenderConfig rc = config;
            rc.seed = sample_seed(config.seed, wi, k);
            Sample s;
            s.id = corpus[wi] + "-" + std::to_string(k);
            s.label = corpus[wi];
            s.image = render_word(corpus[wi], rc);
            (k < train_per_word ? train : test).samples.push_back(std::move(s));
        }
    }
    std::mt19937_64 rng(splitmix64(config.seed ^ 0x517cc1b727220a95ULL));
    std::shuffle(train.samples.begin(), train.samples.end(), rng);
    std::shuffle(test.samples.begin(), test.samples.end(), rng);
    return {std::move(train), std::move(test)};
}

std::pair<std::vector<std::string>, std::vector<std::string>>
split_words(const std::vector<std::string>& words, double heldout_fraction, std::uint64_t seed) {
    std::vector<std::string> shuffled = words;
    std::mt19937_64 rng(splitmix64(seed));
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::size_t held = static_cast<std::size_t>(heldout_fraction * static_cast<double>(words.size()));
    held = std::min(held, shuffled.size());
    std::vector<std::string> heldout(shuffled.end() - static_cast<long>(held), shuffled.end());
    shuffled.resize(shuffled.size() - held);
    return {std::move(shuffled), std::move(heldout)};
}

std::vector<std::string> random_words(std::size_t count, std::size_t min_len, std::size_t max_len,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed));
    std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
    // letters weighted over digits so words look word-like
    std::uniform_int_distribution<std::size_t> sym_dist(0, 25 + 5);
    std::set<std::string> seen;
    std::vector<std::string> words;
    while (words.size() < count) {
        const std::size_t len = len_dist(rng);
        std::string w;
        for (std::size_t i = 0; i < len; ++i) {
            const std::size_t s = sym_dist(rng);
            w.push_back(s < 26 ? static_cast<char>('a' + s) : static_cast<char>('0' + (s - 26) * 2));
        }
        if (seen.insert(w).second) words.push_back(std::move(w));
    }
    return words;
}

} // namespace glyphbeam
