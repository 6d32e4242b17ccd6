#pragma once

// Labeled word-image datasets and their on-disk layout:
//   <dir>/images/<id>.pgm   binary P5, 8-bit
//   <dir>/labels.tsv        "<id>\t<word>" per line, UTF-8, LF endings

#include <string>
#include <vector>

#include "glyphbeam/tensor.hpp"

namespace glyphbeam {

struct Sample {
    std::string id;
    std::string label;
    Tensor image; // [H x W], values in [0, 1]
};

struct Dataset {
    std::vector<Sample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

// 8-bit binary PGM. Values are clamped to [0,1] and quantized on write.
void write_pgm(const std::string& path, const Tensor& image);
Tensor read_pgm(const std::string& path);

void save_dataset(const Dataset& dataset, const std::string& dir);
Dataset load_dataset(const std::string& dir);

// One lowercase word per line, LF endings. Blank lines are skipped.
std::vector<std::string> read_word_list(const std::string& path);
void write_word_list(const std::string& path, const std::vector<std::string>& words);

} // namespace glyphbeam
