#pragma once

// Convolutional feature-grid encoder. A stack of 3x3 valid convolutions with
// ReLU and optional max-pooling turns a grayscale word image into K = R*C
// feature vectors of dimension D, one per spatial cell, in row-major grid
// order. Spatial locality is preserved: cell (r, c) corresponds to a known
// receptive-field center in the input image.

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "glyphbeam/params.hpp"
#include "glyphbeam/tensor.hpp"

namespace glyphbeam {

struct ConvLayerSpec {
    std::size_t out_channels = 0;
    std::size_t pool_h = 1; // 1 = no pooling on this axis
    std::size_t pool_w = 1;
};

struct EncoderConfig {
    std::size_t input_height = 32;
    std::vector<ConvLayerSpec> layers;

    // 3 layers, 16 -> 32 -> 64 channels, pooling 2x2 then 2x4.
    // On a 32x128 image this yields a 4x13 grid of 64-dim features.
    static EncoderConfig default_config();
};

struct FeatureGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t feature_dim = 0;
    Tensor features; // [rows*cols x feature_dim], cell order row-major over the grid
    std::vector<std::pair<double, double>> centers; // receptive-field center per cell (row, col)

    std::size_t cell_count() const { return rows * cols; }
};

// Output grid geometry for one input size, plus the affine map from cell
// index to input-pixel receptive-field center.
struct GridGeometry {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double row_scale = 1.0, row_offset = 0.0;
    double col_scale = 1.0, col_offset = 0.0;
};

struct ConvLayer {
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    std::size_t pool_h = 1;
    std::size_t pool_w = 1;
    Param weight; // [out_channels x in_channels*9]
    Param bias;   // [out_channels]
};

struct EncoderCache {
    std::size_t input_h = 0, input_w = 0;
    struct LayerCache {
        std::size_t in_h = 0, in_w = 0;        // spatial size entering the conv
        std::size_t conv_h = 0, conv_w = 0;    // after conv
        std::size_t out_h = 0, out_w = 0;      // after pooling
        Tensor cols;                           // [in_ch*9 x conv_h*conv_w]
        Tensor activ;                          // [out_ch x conv_h*conv_w], post-ReLU
        std::vector<std::size_t> pool_argmax;  // flat conv index per pooled output
        Tensor pooled;                         // [out_ch x out_h*out_w]
    };
    std::vector<LayerCache> layers;
};

class Encoder {
public:
    Encoder() = default;

    static Encoder create(const EncoderConfig& config, std::mt19937_64& rng);

    const EncoderConfig& config() const { return config_; }
    std::vector<ConvLayer>& layers() { return layers_; }
    const std::vector<ConvLayer>& layers() const { return layers_; }
    std::size_t feature_dim() const { return layers_.back().out_channels; }

    // Forward pass. image is [H x W] with H == config.input_height and values
    // in [0, 1]. Throws shape_error (stating the minimum width) when the image
    // is too narrow for the layer stack.
    FeatureGrid encode(const Tensor& image) const;
    FeatureGrid encode(const Tensor& image, EncoderCache& cache) const;

    // Backward pass: accumulates weight/bias gradients and returns the
    // gradient with respect to the input image.
    Tensor backward(const EncoderCache& cache, const Tensor& grad_features);

    GridGeometry geometry_for_width(std::size_t width) const;
    std::size_t min_width() const;

    void collect_params(std::vector<ParamRef>& out);

private:
    EncoderConfig config_;
    std::vector<ConvLayer> layers_;
};

// Scales to [0,1] domain and subtracts the per-image mean. Applied by the
// training and decoding pipelines before encode().
Tensor normalize_image(const Tensor& image);

} // namespace glyphbeam
