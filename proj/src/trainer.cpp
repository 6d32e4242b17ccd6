#include "glyphbeam/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "glyphbeam/kernels.hpp"

namespace glyphbeam {
namespace {

struct StepRecord {
    Tensor h_prev;   // hidden state entering the step
    Tensor h_new;    // hidden state after the LSTM
    Tensor y_prev;   // previous-output vector fed to the step
    Tensor context;  // z_t
    Tensor embedded; // E^T y_prev
    AttentionCache attn;
    LstmCache lstm;
    OutputCache out;
    std::size_t target = 0;
};

std::vector<std::size_t> target_symbols(const std::string& target) {
    if (target.empty()) throw input_error("training target word is empty");
    std::vector<std::size_t> symbols = Alphabet::encode(target);
    symbols.push_back(Alphabet::kEnd);
    return symbols;
}

double forward_sequence(const Model& model, const Tensor& image, const std::string& target,
                        EncoderCache* enc_cache, InitStateCache* init_cache,
                        std::vector<StepRecord>* records, FeatureGrid* grid_out) {
    const std::vector<std::size_t> symbols = target_symbols(target);

    EncoderCache local_enc;
    FeatureGrid grid = model.encoder().encode(normalize_image(image),
                                              enc_cache ? *enc_cache : local_enc);
    InitStateCache local_init;
    DecoderState state = model.initial_state(grid.features, init_cache ? *init_cache : local_init);

    double loss = 0.0;
    for (std::size_t symbol : symbols) {
        StepRecord rec;
        rec.target = symbol;
        rec.h_prev = state.h;
        rec.y_prev = state.y_prev;
        rec.embedded = embed_output(model.decoder(), state.y_prev);

        AttentionStep attn_step;
        rec.context = model.step_context(grid.features, state, &attn_step, &rec.attn);

        state = lstm_step(state, rec.context, model.decoder(), rec.lstm);
        rec.h_new = state.h;

        Tensor logits = output_logits(rec.embedded, state.h, rec.context, model.decoder(), rec.out);
        loss += log_sum_exp(logits.span()) - logits[symbol];

        rec.out.probs = logits;
        softmax_inplace(rec.out.probs.span());

        if (records) records->push_back(std::move(rec));
        Model::commit_symbol(state, symbol); // teacher forcing
    }
    if (grid_out) *grid_out = std::move(grid);
    return loss;
}

std::string gradcheck_group(const std::string& name) {
    if (name.rfind("encoder.", 0) == 0) return "encoder";
    if (name.rfind("attention.", 0) == 0) return "attention";
    if (name == "decoder.gate") return "gate";
    if (name == "decoder.embedding") return "embedding";
    if (name.rfind("output.", 0) == 0) return "output";
    return "init";
}

} // namespace

double sequence_loss_value(const Model& model, const Tensor& image, const std::string& target) {
    return forward_sequence(model, image, target, nullptr, nullptr, nullptr, nullptr);
}

double sequence_loss(Model& model, const Tensor& image, const std::string& target) {
    EncoderCache enc_cache;
    InitStateCache init_cache;
    std::vector<StepRecord> records;
    FeatureGrid grid;
    const double loss = forward_sequence(model, image, target, &enc_cache, &init_cache, &records, &grid);

    const std::size_t hid = model.config().hidden_dim;
    const std::size_t feat = model.feature_dim();
    const std::size_t emb = model.config().embed_dim;
    const std::size_t cells = grid.cell_count();

    Tensor grad_features({cells, feat});
    Tensor grad_h_next({hid});
    Tensor grad_c_next({hid});

    for (std::size_t t = records.size(); t-- > 0;) {
        StepRecord& rec = records[t];

        // cross-entropy: d logits = probs - onehot(target)
        Tensor grad_logits = rec.out.probs;
        grad_logits[rec.target] -= 1.0;

        Tensor grad_embedded({emb});
        Tensor grad_context({feat});
        output_backward(model.decoder(), rec.embedded, rec.h_new, rec.context, rec.out,
                        grad_logits, grad_embedded, grad_h_next, grad_context);

        Tensor grad_h_prev({hid});
        Tensor grad_c_prev({hid});
        lstm_backward(model.decoder(), rec.lstm, grad_h_next, grad_c_next, grad_embedded,
                      grad_h_prev, grad_c_prev, grad_context);

        if (model.config().use_attention) {
            attention_backward(model.attention(), grid.features, rec.h_prev, rec.attn,
                               grad_context, grad_features, grad_h_prev);
        } else if (t == 0) {
            // baseline fed the mean feature at the first step
            const double inv = 1.0 / static_cast<double>(cells);
            for (std::size_t i = 0; i < cells; ++i) {
                kern::axpy(inv, grad_context.data(), grad_features.row(i), feat);
            }
        }

        embed_backward(model.decoder(), rec.y_prev, grad_embedded);

        grad_h_next = std::move(grad_h_prev);
        grad_c_next = std::move(grad_c_prev);
    }

    initial_state_backward(model.decoder(), init_cache, grad_h_next, grad_c_next, grad_features);
    model.encoder().backward(enc_cache, grad_features);
    return loss;
}

double greedy_accuracy(const Model& model, const Dataset& dataset, std::size_t jobs) {
    if (dataset.empty()) return 0.0;
    const std::size_t n = dataset.size();
    std::vector<char> correct(n, 0);
    jobs = std::max<std::size_t>(1, jobs);

    auto worker = [&](std::size_t stripe) {
        for (std::size_t i = stripe; i < n; i += jobs) {
            const GreedyResult res = model.greedy_decode(dataset.samples[i].image);
            correct[i] = (res.word == dataset.samples[i].label) ? 1 : 0;
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker, j);
        for (std::thread& t : threads) t.join();
    }
    std::size_t hits = 0;
    for (char c : correct) hits += static_cast<std::size_t>(c);
    return static_cast<double>(hits) / static_cast<double>(n);
}

TrainLog train(Model& model, const Dataset& dataset, const TrainConfig& config) {
    if (dataset.empty()) throw input_error("training dataset is empty");
    if (config.learning_rate <= 0.0) throw input_error("learning rate must be > 0");
    if (config.batch_size < 1) throw input_error("batch size must be >= 1");

    std::mt19937_64 rng(config.seed);

    // split off validation samples
    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t val_count = static_cast<std::size_t>(
        std::floor(config.val_fraction * static_cast<double>(dataset.size())));
    val_count = std::min(val_count, dataset.size() - 1);
    std::vector<std::size_t> train_idx(order.begin(), order.end() - static_cast<long>(val_count));
    Dataset val_set;
    for (auto it = order.end() - static_cast<long>(val_count); it != order.end(); ++it) {
        val_set.samples.push_back(dataset.samples[*it]);
    }

    const std::size_t jobs = std::max<std::size_t>(1, config.jobs);
    std::vector<Model> workers; // per-thread replicas, weights synced each batch
    if (jobs > 1) workers.assign(jobs, model);

    std::vector<ParamRef> refs = model.params();
    std::vector<Tensor> adam_m, adam_v;
    adam_m.reserve(refs.size());
    adam_v.reserve(refs.size());
    for (const ParamRef& r : refs) {
        adam_m.emplace_back(r.param->value.shape());
        adam_v.emplace_back(r.param->value.shape());
    }

    TrainLog log;
    std::size_t adam_t = 0;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        std::shuffle(train_idx.begin(), train_idx.end(), rng);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < train_idx.size(); start += config.batch_size) {
            const std::size_t end = std::min(train_idx.size(), start + config.batch_size);
            const std::size_t bsz = end - start;
            model.zero_grads();

            double batch_loss = 0.0;
            if (jobs == 1) {
                for (std::size_t i = start; i < end; ++i) {
                    const Sample& s = dataset.samples[train_idx[i]];
                    batch_loss += sequence_loss(model, s.image, s.label);
                }
            } else {
                for (Model& w : workers) {
                    std::vector<ParamRef> wrefs = w.params();
                    for (std::size_t p = 0; p < refs.size(); ++p) {
                        wrefs[p].param->value = refs[p].param->value;
                        wrefs[p].param->zero_grad();
                    }
                }
                std::vector<double> stripe_loss(jobs, 0.0);
                std::vector<std::thread> threads;
                for (std::size_t j = 0; j < jobs; ++j) {
                    threads.emplace_back([&, j]() {
                        for (std::size_t i = start + j; i < end; i += jobs) {
                            const Sample& s = dataset.samples[train_idx[i]];
                            stripe_loss[j] += sequence_loss(workers[j], s.image, s.label);
                        }
                    });
                }
                for (std::thread& t : threads) t.join();
                // ordered reduction keeps runs with equal (seed, jobs) bit-identical
                for (std::size_t j = 0; j < jobs; ++j) {
                    batch_loss += stripe_loss[j];
                    std::vector<ParamRef> wrefs = workers[j].params();
                    for (std::size_t p = 0; p < refs.size(); ++p) {
                        kern::vadd(wrefs[p].param->grad.data(), refs[p].param->grad.data(),
                                   refs[p].param->grad.size());
                    }
                }
            }

            if (!std::isfinite(batch_loss)) {
                throw numeric_error("non-finite loss in epoch " + std::to_string(epoch) +
                                    ", batch starting at sample " + std::to_string(start));
            }
            epoch_loss += batch_loss;

            const double inv_b = 1.0 / static_cast<double>(bsz);
            double norm_sq = 0.0;
            for (const ParamRef& r : refs) {
                kern::scale(inv_b, r.param->grad.data(), r.param->grad.size());
                norm_sq += kern::sumsq(r.param->grad.data(), r.param->grad.size());
            }
            const double norm = std::sqrt(norm_sq);
            if (config.clip_norm > 0.0 && norm > config.clip_norm) {
                const double factor = config.clip_norm / norm;
                for (const ParamRef& r : refs) {
                    kern::scale(factor, r.param->grad.data(), r.param->grad.size());
                }
            }

            ++adam_t;
            const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(adam_t));
            const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(adam_t));
            for (std::size_t p = 0; p < refs.size(); ++p) {
                kern::adam_step(refs[p].param->value.data(), refs[p].param->grad.data(),
                                adam_m[p].data(), adam_v[p].data(), refs[p].param->size(),
                                config.learning_rate, config.beta1, config.beta2, config.adam_eps,
                                bc1, bc2);
            }
        }

        EpochLog entry;
        entry.loss = epoch_loss / static_cast<double>(train_idx.size());
        entry.val_accuracy = val_set.empty() ? 0.0 : greedy_accuracy(model, val_set, jobs);
        entry.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (config.verbose) {
            std::printf("epoch %zu loss %.6f val_acc %.4f secs %.2f\n", epoch, entry.loss,
                        entry.val_accuracy, entry.seconds);
            std::fflush(stdout);
        }
        log.epochs.push_back(entry);
    }
    return log;
}

std::vector<GradCheckGroup> gradient_check(Model& model, const Tensor& image,
                                           const std::string& target, double eps, double tol) {
    model.zero_grads();
    sequence_loss(model, image, target);

    std::vector<ParamRef> refs = model.params();
    std::vector<GradCheckGroup> report;
    auto group_entry = [&report](const std::string& g) -> GradCheckGroup& {
        for (GradCheckGroup& e : report) {
            if (e.group == g) return e;
        }
        report.push_back({g, 0, 0.0, true});
        return report.back();
    };

    for (ParamRef& ref : refs) {
        GradCheckGroup& entry = group_entry(gradcheck_group(ref.name));
        Tensor& value = ref.param->value;
        const Tensor analytic = ref.param->grad;
        entry.params += value.size();
        for (std::size_t i = 0; i < value.size(); ++i) {
            const double orig = value[i];
            value[i] = orig + eps;
            const double fp = sequence_loss_value(model, image, target);
            value[i] = orig - eps;
            const double fm = sequence_loss_value(model, image, target);
            value[i] = orig;
            const double numeric = (fp - fm) / (2.0 * eps);
            const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-3});
            entry.max_rel_err = std::max(entry.max_rel_err, std::abs(analytic[i] - numeric) / denom);
        }
    }
    for (GradCheckGroup& e : report) e.pass = (e.max_rel_err < tol);
    return report;
}

} // namespace glyphbeam
