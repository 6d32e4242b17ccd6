#include "glyphbeam/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glyphbeam/kernels.hpp"

namespace glyphbeam {
namespace {

struct LayerDims {
    std::size_t conv_h, conv_w, out_h, out_w;
};

// Walks one layer's geometry; returns false when the input is too small.
bool layer_dims(std::size_t in_h, std::size_t in_w, const ConvLayer& layer, LayerDims& d) {
    if (in_h < 3 || in_w < 3) return false;
    d.conv_h = in_h - 2;
    d.conv_w = in_w - 2;
    if (d.conv_h < layer.pool_h || d.conv_w < layer.pool_w) return false;
    d.out_h = (d.conv_h - layer.pool_h) / layer.pool_h + 1;
    d.out_w = (d.conv_w - layer.pool_w) / layer.pool_w + 1;
    return d.out_h >= 1 && d.out_w >= 1;
}

void im2col(const Tensor& maps, std::size_t in_ch, std::size_t in_h, std::size_t in_w,
            Tensor& cols) {
    const std::size_t conv_h = in_h - 2, conv_w = in_w - 2;
    for (std::size_t c = 0; c < in_ch; ++c) {
        const double* src = maps.row(c);
        for (std::size_t kh = 0; kh < 3; ++kh) {
            for (std::size_t kw = 0; kw < 3; ++kw) {
                double* dst = cols.row(c * 9 + kh * 3 + kw);
                for (std::size_t oh = 0; oh < conv_h; ++oh) {
                    const double* s = src + (oh + kh) * in_w + kw;
                    double* d = dst + oh * conv_w;
                    for (std::size_t ow = 0; ow < conv_w; ++ow) d[ow] = s[ow];
                }
            }
        }
    }
}

void col2im_acc(const Tensor& cols, std::size_t in_ch, std::size_t in_h, std::size_t in_w,
                Tensor& maps) {
    const std::size_t conv_h = in_h - 2, conv_w = in_w - 2;
    for (std::size_t c = 0; c < in_ch; ++c) {
        double* dst = maps.row(c);
        for (std::size_t kh = 0; kh < 3; ++kh) {
            for (std::size_t kw = 0; kw < 3; ++kw) {
                const double* src = cols.row(c * 9 + kh * 3 + kw);
                for (std::size_t oh = 0; oh < conv_h; ++oh) {
                    double* d = dst + (oh + kh) * in_w + kw;
                    const double* s = src + oh * conv_w;
                    for (std::size_t ow = 0; ow < conv_w; ++ow) d[ow] += s[ow];
                }
            }
        }
    }
}

void max_pool(const Tensor& activ, std::size_t out_ch, const LayerDims& d, std::size_t pool_h,
              std::size_t pool_w, Tensor& pooled, std::vector<std::size_t>& argmax) {
    for (std::size_t c = 0; c < out_ch; ++c) {
        const double* src = activ.row(c);
        double* dst = pooled.row(c);
        for (std::size_t oh = 0; oh < d.out_h; ++oh) {
            for (std::size_t ow = 0; ow < d.out_w; ++ow) {
                double best = -std::numeric_limits<double>::infinity();
                std::size_t best_idx = 0;
                for (std::size_t ph = 0; ph < pool_h; ++ph) {
                    for (std::size_t pw = 0; pw < pool_w; ++pw) {
                        const std::size_t idx = (oh * pool_h + ph) * d.conv_w + ow * pool_w + pw;
                        if (src[idx] > best) {
                            best = src[idx];
                            best_idx = idx;
                        }
                    }
                }
                dst[oh * d.out_w + ow] = best;
                argmax[c * d.out_h * d.out_w + oh * d.out_w + ow] = best_idx;
            }
        }
    }
}

} // namespace

EncoderConfig EncoderConfig::default_config() {
    EncoderConfig cfg;
    cfg.input_height = 32;
    cfg.layers = {{16, 2, 2}, {32, 2, 4}, {64, 1, 1}};
    return cfg;
}

Encoder Encoder::create(const EncoderConfig& config, std::mt19937_64& rng) {
    if (config.layers.empty()) throw input_error("encoder needs at least one conv layer");
    if (config.layers.back().out_channels < 8) {
        throw input_error("encoder feature dimension must be >= 8");
    }
    Encoder enc;
    enc.config_ = config;
    std::size_t in_ch = 1;
    for (const ConvLayerSpec& spec : config.layers) {
        ConvLayer layer;
        layer.in_channels = in_ch;
        layer.out_channels = spec.out_channels;
        layer.pool_h = std::max<std::size_t>(1, spec.pool_h);
        layer.pool_w = std::max<std::size_t>(1, spec.pool_w);
        const double fan_in = static_cast<double>(in_ch * 9);
        const double fan_out = static_cast<double>(spec.out_channels * 9);
        const double s = std::sqrt(6.0 / (fan_in + fan_out));
        layer.weight = Param(Tensor::uniform({spec.out_channels, in_ch * 9}, s, rng));
        layer.bias = Param(Tensor({spec.out_channels}));
        enc.layers_.push_back(std::move(layer));
        in_ch = spec.out_channels;
    }
    return enc;
}

GridGeometry Encoder::geometry_for_width(std::size_t width) const {
    std::size_t h = config_.input_height, w = width;
    GridGeometry g;
    g.row_scale = g.col_scale = 1.0;
    g.row_offset = g.col_offset = 0.0;
    for (const ConvLayer& layer : layers_) {
        LayerDims d;
        if (!layer_dims(h, w, layer, d)) {
            throw shape_error("image width " + std::to_string(width) +
                              " is below the minimum width " + std::to_string(min_width()) +
                              " required by the encoder configuration");
        }
        // valid 3x3 conv: output cell i looks at input i+1
        g.row_offset += g.row_scale;
        g.col_offset += g.col_scale;
        // pooling with stride == window
        g.row_offset += g.row_scale * (static_cast<double>(layer.pool_h) - 1.0) / 2.0;
        g.col_offset += g.col_scale * (static_cast<double>(layer.pool_w) - 1.0) / 2.0;
        g.row_scale *= static_cast<double>(layer.pool_h);
        g.col_scale *= static_cast<double>(layer.pool_w);
        h = d.out_h;
        w = d.out_w;
    }
    g.rows = h;
    g.cols = w;
    return g;
}

std::size_t Encoder::min_width() const {
    std::size_t h = config_.input_height;
    for (std::size_t w = 1; w <= 1u << 16; ++w) {
        std::size_t ch = h, cw = w;
        bool ok = true;
        for (const ConvLayer& layer : layers_) {
            LayerDims d;
            if (!layer_dims(ch, cw, layer, d)) {
                ok = false;
                break;
            }
            ch = d.out_h;
            cw = d.out_w;
        }
        if (ok) return w;
    }
    throw shape_error("encoder configuration admits no valid input width");
}

FeatureGrid Encoder::encode(const Tensor& image) const {
    EncoderCache cache;
    return encode(image, cache);
}

FeatureGrid Encoder::encode(const Tensor& image, EncoderCache& cache) const {
    if (image.rank() != 2) {
        throw shape_error("encoder input must be a rank-2 image");
    }
    if (image.dim(0) != config_.input_height) {
        throw shape_error("encoder input height " + std::to_string(image.dim(0)) +
                          " does not match configured height " + std::to_string(config_.input_height));
    }
    const GridGeometry geom = geometry_for_width(image.dim(1)); // validates width

    cache.input_h = image.dim(0);
    cache.input_w = image.dim(1);
    cache.layers.clear();
    cache.layers.resize(layers_.size());

    // channel-major maps: [channels x h*w]
    Tensor maps({1, image.size()}, std::vector<double>(image.span().begin(), image.span().end()));
    std::size_t h = cache.input_h, w = cache.input_w;

    for (std::size_t li = 0; li < layers_.size(); ++li) {
        const ConvLayer& layer = layers_[li];
        EncoderCache::LayerCache& lc = cache.layers[li];
        LayerDims d;
        layer_dims(h, w, layer, d);
        lc.in_h = h;
        lc.in_w = w;
        lc.conv_h = d.conv_h;
        lc.conv_w = d.conv_w;
        lc.out_h = d.out_h;
        lc.out_w = d.out_w;

        lc.cols = Tensor({layer.in_channels * 9, d.conv_h * d.conv_w});
        im2col(maps, layer.in_channels, h, w, lc.cols);

        lc.activ = Tensor({layer.out_channels, d.conv_h * d.conv_w});
        matmul_acc(layer.weight.value, lc.cols, lc.activ);
        for (std::size_t c = 0; c < layer.out_channels; ++c) {
            double* rowp = lc.activ.row(c);
            const double b = layer.bias.value[c];
            for (std::size_t i = 0; i < d.conv_h * d.conv_w; ++i) {
                rowp[i] = std::max(0.0, rowp[i] + b);
            }
        }

        if (layer.pool_h > 1 || layer.pool_w > 1) {
            lc.pooled = Tensor({layer.out_channels, d.out_h * d.out_w});
            lc.pool_argmax.assign(layer.out_channels * d.out_h * d.out_w, 0);
            max_pool(lc.activ, layer.out_channels, d, layer.pool_h, layer.pool_w, lc.pooled,
                     lc.pool_argmax);
            maps = lc.pooled;
        } else {
            maps = lc.activ;
        }
        h = d.out_h;
        w = d.out_w;
    }

    FeatureGrid grid;
    grid.rows = geom.rows;
    grid.cols = geom.cols;
    grid.feature_dim = layers_.back().out_channels;
    grid.features = Tensor({grid.rows * grid.cols, grid.feature_dim});
    for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
        double* dst = grid.features.row(cell);
        for (std::size_t dch = 0; dch < grid.feature_dim; ++dch) dst[dch] = maps(dch, cell);
    }
    grid.centers.reserve(grid.cell_count());
    for (std::size_t r = 0; r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c) {
            grid.centers.emplace_back(geom.row_offset + geom.row_scale * static_cast<double>(r),
                                      geom.col_offset + geom.col_scale * static_cast<double>(c));
        }
    }
    return grid;
}

Tensor Encoder::backward(const EncoderCache& cache, const Tensor& grad_features) {
    if (cache.layers.size() != layers_.size()) {
        throw shape_error("encoder cache does not match this encoder");
    }
    const EncoderCache::LayerCache& last = cache.layers.back();
    const std::size_t cells = last.out_h * last.out_w;
    const std::size_t feat_dim = layers_.back().out_channels;
    if (grad_features.rank() != 2 || grad_features.dim(0) != cells ||
        grad_features.dim(1) != feat_dim) {
        throw shape_error("grad_features shape does not match encoder output grid");
    }

    // transpose [K x D] back to channel-major [D x K]
    Tensor grad_out({feat_dim, cells});
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const double* src = grad_features.row(cell);
        for (std::size_t dch = 0; dch < feat_dim; ++dch) grad_out(dch, cell) = src[dch];
    }

    for (std::size_t li = layers_.size(); li-- > 0;) {
        ConvLayer& layer = layers_[li];
        const EncoderCache::LayerCache& lc = cache.layers[li];
        const std::size_t conv_cells = lc.conv_h * lc.conv_w;

        Tensor grad_activ({layer.out_channels, conv_cells});
        if (layer.pool_h > 1 || layer.pool_w > 1) {
            const std::size_t out_cells = lc.out_h * lc.out_w;
            for (std::size_t c = 0; c < layer.out_channels; ++c) {
                for (std::size_t i = 0; i < out_cells; ++i) {
                    grad_activ(c, lc.pool_argmax[c * out_cells + i]) += grad_out(c, i);
                }
            }
        } else {
            grad_activ = grad_out;
        }

        // ReLU gate
        for (std::size_t i = 0; i < grad_activ.size(); ++i) {
            if (lc.activ[i] <= 0.0) grad_activ[i] = 0.0;
        }

        for (std::size_t c = 0; c < layer.out_channels; ++c) {
            double sum = 0.0;
            const double* rowp = grad_activ.row(c);
            for (std::size_t i = 0; i < conv_cells; ++i) sum += rowp[i];
            layer.bias.grad[c] += sum;
        }
        matmul_nt_acc(grad_activ, lc.cols, layer.weight.grad);

        Tensor grad_cols({layer.in_channels * 9, conv_cells});
        matmul_tn_acc(layer.weight.value, grad_activ, grad_cols);

        Tensor grad_in({layer.in_channels, lc.in_h * lc.in_w});
        col2im_acc(grad_cols, layer.in_channels, lc.in_h, lc.in_w, grad_in);
        grad_out = std::move(grad_in);
    }

    return Tensor({cache.input_h, cache.input_w},
                  std::vector<double>(grad_out.span().begin(), grad_out.span().end()));
}

void Encoder::collect_params(std::vector<ParamRef>& out) {
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        out.push_back({"encoder.conv" + std::to_string(li + 1) + ".weight", &layers_[li].weight});
        out.push_back({"encoder.conv" + std::to_string(li + 1) + ".bias", &layers_[li].bias});
    }
}

Tensor normalize_image(const Tensor& image) {
    Tensor out = image;
    double mean = 0.0;
    for (double v : out.span()) mean += v;
    mean /= static_cast<double>(out.size());
    for (double& v : out.span()) v -= mean;
    return out;
}

} // namespace glyphbeam
