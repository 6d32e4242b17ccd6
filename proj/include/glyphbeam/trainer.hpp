#pragma once

// Teacher-forced cross-entropy training of the full stack, plus the
// finite-difference gradient-check harness used to validate every backward
// pass.

#include <cstdint>
#include <string>
#include <vector>

#include "glyphbeam/dataset.hpp"
#include "glyphbeam/model.hpp"

namespace glyphbeam {

// Forward + backward for one sample. Gradients are accumulated into the
// model's Param::grad buffers (not zeroed here). Returns the loss:
//   -sum_t log P(target_t) - log P(END)
double sequence_loss(Model& model, const Tensor& image, const std::string& target);

// Forward only; the model is untouched.
double sequence_loss_value(const Model& model, const Tensor& image, const std::string& target);

struct TrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::size_t batch_size = 32;
    std::size_t epochs = 10;
    double clip_norm = 5.0;
    std::uint64_t seed = 1;
    double val_fraction = 0.05;
    std::size_t jobs = 1;
    bool verbose = true; // "epoch <n> loss <x> val_acc <y> secs <t>" lines
};

struct EpochLog {
    double loss = 0.0; // mean per-sample loss
    double val_accuracy = 0.0;
    double seconds = 0.0;
};

struct TrainLog {
    std::vector<EpochLog> epochs;
};

// Trains in place; deterministic for a fixed (seed, jobs) pair.
TrainLog train(Model& model, const Dataset& dataset, const TrainConfig& config);

// Fraction of samples whose greedy decode matches the label (case-insensitive).
double greedy_accuracy(const Model& model, const Dataset& dataset, std::size_t jobs = 1);

struct GradCheckGroup {
    std::string group;
    std::size_t params = 0;
    double max_rel_err = 0.0;
    bool pass = false;
};

// Perturbs every weight of every parameter group and compares the analytic
// gradient against central differences. Report-only; never throws on failure.
std::vector<GradCheckGroup> gradient_check(Model& model, const Tensor& image,
                                           const std::string& target, double eps = 1e-5,
                                           double tol = 1e-4);

} // namespace glyphbeam
