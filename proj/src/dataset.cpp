#include "glyphbeam/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace glyphbeam {

namespace fs = std::filesystem;

void write_pgm(const std::string& path, const Tensor& image) {
    if (image.rank() != 2) throw shape_error("write_pgm expects a rank-2 image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    out << "P5\n" << image.dim(1) << " " << image.dim(0) << "\n255\n";
    std::vector<unsigned char> bytes(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double v = std::clamp(image[i], 0.0, 1.0);
        bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw input_error("failed writing image data to '" + path + "'");
}

Tensor read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open image '" + path + "'");

    auto next_token = [&in, &path]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw input_error("truncated PGM header in '" + path + "'");
    };

    const std::string magic = next_token();
    if (magic != "P5") throw input_error("'" + path + "' is not a binary PGM (P5) file");
    const std::size_t width = std::stoul(next_token());
    const std::size_t height = std::stoul(next_token());
    const std::size_t maxval = std::stoul(next_token());
    if (maxval == 0 || maxval > 255) {
        throw input_error("unsupported PGM maxval " + std::to_string(maxval) + " in '" + path + "'");
    }
    in.get(); // single whitespace byte after maxval

    std::vector<unsigned char> bytes(width * height);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
        throw input_error("truncated PGM pixel data in '" + path + "'");
    }
    Tensor image({height, width});
    const double scale = 1.0 / static_cast<double>(maxval);
    for (std::size_t i = 0; i < bytes.size(); ++i) image[i] = bytes[i] * scale;
    return image;
}

void save_dataset(const Dataset& dataset, const std::string& dir) {
    fs::create_directories(fs::path(dir) / "images");
    std::ofstream labels(fs::path(dir) / "labels.tsv", std::ios::binary);
    if (!labels) throw input_error("cannot write labels.tsv under '" + dir + "'");
    for (const Sample& s : dataset.samples) {
        write_pgm((fs::path(dir) / "images" / (s.id + ".pgm")).string(), s.image);
        labels << s.id << '\t' << s.label << '\n';
    }
}

Dataset load_dataset(const std::string& dir) {
    std::ifstream labels(fs::path(dir) / "labels.tsv");
    if (!labels) throw input_error("cannot open labels file '" + dir + "/labels.tsv'");
    Dataset dataset;
    std::string line;
    while (std::getline(labels, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw input_error("malformed labels.tsv line (missing tab): '" + line + "'");
        }
        Sample s;
        s.id = line.substr(0, tab);
        s.label = line.substr(tab + 1);
        s.image = read_pgm((fs::path(dir) / "images" / (s.id + ".pgm")).string());
        dataset.samples.push_back(std::move(s));
    }
    return dataset;
}

std::vector<std::string> read_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open word list '" + path + "'");
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) words.push_back(line);
    }
    return words;
}

void write_word_list(const std::string& path, const std::vector<std::string>& words) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    for (const std::string& w : words) out << w << '\n';
}

} // namespace glyphbeam
