#include "glyphbeam/ngram.hpp"

#include <cmath>

namespace glyphbeam {

NgramModel fit_ngram(const std::vector<std::string>& corpus, std::size_t max_order, double delta) {
    if (max_order < 1) throw input_error("ngram max_order must be >= 1");
    if (delta < 0.0) throw input_error("ngram smoothing delta must be >= 0");
    NgramModel model;
    model.max_order = max_order;
    model.delta = delta;
    for (const std::string& word : corpus) {
        const std::vector<std::size_t> symbols = Alphabet::encode(word); // validates chars
        for (std::size_t t = 0; t <= word.size(); ++t) {
            const std::size_t symbol = (t < word.size()) ? symbols[t] : Alphabet::kEnd;
            const std::size_t max_ctx = std::min(t, max_order - 1);
            for (std::size_t len = 0; len <= max_ctx; ++len) {
                NgramModel::ContextCounts& entry = model.tables[word.substr(t - len, len)];
                entry.counts[symbol] += 1;
                entry.total += 1;
            }
        }
    }
    return model;
}

double ngram_prob(const NgramModel& model, const std::string& context, std::size_t symbol) {
    if (symbol >= Alphabet::kSize) {
        throw input_error("ngram query symbol " + std::to_string(symbol) + " out of range");
    }
    const std::size_t max_ctx = model.max_order - 1;
    const std::string ctx = context.size() > max_ctx
                                ? context.substr(context.size() - max_ctx)
                                : context;
    for (std::size_t len = ctx.size() + 1; len-- > 0;) {
        const auto it = model.tables.find(ctx.substr(ctx.size() - len, len));
        if (it == model.tables.end() || it->second.total == 0) continue;
        const double num = static_cast<double>(it->second.counts[symbol]) + model.delta;
        const double den = static_cast<double>(it->second.total) +
                           model.delta * static_cast<double>(Alphabet::kSize);
        return num / den;
    }
    // nothing stored at any suffix length (unfitted model): pure smoothing
    return 1.0 / static_cast<double>(Alphabet::kSize);
}

double ngram_logprob(const NgramModel& model, const std::string& context, std::size_t symbol) {
    return std::log(ngram_prob(model, context, symbol));
}

} // namespace glyphbeam
