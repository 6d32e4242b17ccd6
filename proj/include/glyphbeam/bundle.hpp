#pragma once

// Versioned single-file model bundle: magic "GLYPHBM1", then named binary
// sections (config, params, optional ngram, optional lexicon). Saving the
// same model twice produces byte-identical files; save/load round trips
// reproduce decode outputs bit-exactly.

#include <optional>
#include <string>
#include <vector>

#include "glyphbeam/model.hpp"
#include "glyphbeam/ngram.hpp"

namespace glyphbeam {

struct ModelBundle {
    Model model;
    std::optional<NgramModel> lm;
    std::vector<std::string> lexicon_words;
};

void save_bundle(const std::string& path, ModelBundle& bundle);
ModelBundle load_bundle(const std::string& path);

} // namespace glyphbeam
