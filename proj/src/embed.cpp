#include "screp/embed.hpp"

#include <algorithm>
#include <cmath>

#include "screp/corpus.hpp"
#include "screp/errors.hpp"
#include "screp/rng.hpp"

namespace screp::embed {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void validate_config(const EmbedConfig& config) {
    if (config.dim < 1 || config.epochs < 1 || config.context_window < 1)
        throw ValidationError("embedding config: dim, epochs and context_window "
                              "must be >= 1");
}

std::map<int, std::size_t> position_of(const std::vector<int>& vocabulary) {
    std::map<int, std::size_t> pos;
    for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        auto [_, inserted] = pos.emplace(vocabulary[i], i);
        if (!inserted) throw ValidationError("embedding vocabulary has duplicate tokens");
    }
    return pos;
}

std::vector<std::vector<double>> init_vectors(std::size_t count, std::size_t dim,
                                              Rng& rng) {
    std::vector<std::vector<double>> v(count, std::vector<double>(dim));
    for (auto& row : v)
        for (auto& x : row) x = (rng.uniform() - 0.5) / static_cast<double>(dim);
    return v;
}

} // namespace

std::vector<std::vector<int>> build_corpus(const std::vector<corpus::Trace>& traces,
                                           TokenSource source,
                                           const kmod::SyscallTable& table) {
    if (traces.empty()) throw ValidationError("build_corpus: no traces");
    std::vector<std::vector<int>> out;
    out.reserve(traces.size());
    for (const auto& t : traces) {
        if (source == TokenSource::syscalls) {
            out.push_back(t.calls);
        } else {
            std::vector<int> seq;
            seq.reserve(t.calls.size());
            for (auto m : table.project_trace(t.calls))
                seq.push_back(static_cast<int>(m));
            out.push_back(std::move(seq));
        }
    }
    return out;
}

std::uint64_t corpus_hash(const std::vector<std::vector<int>>& corpus) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& seq : corpus) {
        mix(seq.size());
        for (int tok : seq) mix(static_cast<std::uint64_t>(tok));
    }
    return h;
}

double cbow_example_loss(const CbowParams& params, const CbowExample& ex) {
    const std::size_t dim = params.dim;
    std::vector<double> h(dim, 0.0);
    for (auto c : ex.context)
        for (std::size_t k = 0; k < dim; ++k) h[k] += params.input[c][k];
    for (auto& x : h) x /= static_cast<double>(ex.context.size());

    auto dot = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += h[k] * v[k];
        return s;
    };
    double loss = -std::log(sigmoid(dot(params.output[ex.target])));
    for (auto n : ex.negatives)
        loss -= std::log(sigmoid(-dot(params.output[n])));
    return loss;
}

CbowGrads cbow_example_grads(const CbowParams& params, const CbowExample& ex) {
    const std::size_t dim = params.dim;
    const double inv_ctx = 1.0 / static_cast<double>(ex.context.size());

    std::vector<double> h(dim, 0.0);
    for (auto c : ex.context)
        for (std::size_t k = 0; k < dim; ++k) h[k] += params.input[c][k];
    for (auto& x : h) x *= inv_ctx;

    CbowGrads grads;
    std::vector<double> dh(dim, 0.0);
    auto accumulate = [&](std::size_t token, double err) {
        // err = dL/d(h . out[token])
        auto& g = grads.output[token];
        if (g.empty()) g.assign(dim, 0.0);
        const auto& out = params.output[token];
        for (std::size_t k = 0; k < dim; ++k) {
            g[k] += err * h[k];
            dh[k] += err * out[k];
        }
    };

    double s_pos = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s_pos += h[k] * params.output[ex.target][k];
    accumulate(ex.target, sigmoid(s_pos) - 1.0);
    for (auto n : ex.negatives) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += h[k] * params.output[n][k];
        accumulate(n, sigmoid(s));
    }

    for (auto c : ex.context) {
        auto& g = grads.input[c];
        if (g.empty()) g.assign(dim, 0.0);
        for (std::size_t k = 0; k < dim; ++k) g[k] += dh[k] * inv_ctx;
    }
    return grads;
}

EmbeddingTable train_cbow(const std::vector<std::vector<int>>& corpus,
                          const std::vector<int>& vocabulary,
                          const EmbedConfig& config) {
    validate_config(config);
    if (corpus.empty()) throw ValidationError("train_cbow: empty corpus");
    if (vocabulary.empty()) throw ValidationError("train_cbow: empty vocabulary");

    const std::size_t dim = config.dim;
    const std::size_t vocab = vocabulary.size();
    const auto pos = position_of(vocabulary);

    // token counts over the corpus, by vocabulary position
    std::vector<std::uint64_t> counts(vocab, 0);
    std::uint64_t total_tokens = 0;
    for (const auto& seq : corpus)
        for (int tok : seq) {
            auto it = pos.find(tok);
            if (it == pos.end())
                throw ValidationError("corpus token " + std::to_string(tok) +
                                      " not in embedding vocabulary");
            ++counts[it->second];
            ++total_tokens;
        }

    // unigram^0.75 noise distribution over tokens present in the corpus
    std::vector<double> noise_cdf(vocab, 0.0);
    double z = 0.0;
    for (std::size_t i = 0; i < vocab; ++i) {
        z += std::pow(static_cast<double>(counts[i]), 0.75);
        noise_cdf[i] = z;
    }
    if (z <= 0.0) throw ValidationError("train_cbow: corpus has no tokens");
    auto draw_noise = [&](Rng& rng) {
        double u = rng.uniform() * z;
        return static_cast<std::size_t>(
            std::lower_bound(noise_cdf.begin(), noise_cdf.end(), u) - noise_cdf.begin());
    };

    CbowParams params;
    params.dim = dim;
    Rng init_rng(derive_seed(config.seed, 0));
    params.input = init_vectors(vocab, dim, init_rng);
    params.output.assign(vocab, std::vector<double>(dim, 0.0));

    const double lr0 = config.learning_rate > 0 ? config.learning_rate : 0.025;
    Rng train_rng(derive_seed(config.seed, 1));
    const std::size_t win = config.context_window;
    std::uint64_t processed = 0;
    const double budget =
        static_cast<double>(config.epochs) * static_cast<double>(total_tokens) + 1.0;

    // corpus positions as vocabulary positions, resolved once
    std::vector<std::vector<std::size_t>> seqs;
    seqs.reserve(corpus.size());
    for (const auto& seq : corpus) {
        std::vector<std::size_t> s;
        s.reserve(seq.size());
        for (int tok : seq) s.push_back(pos.at(tok));
        seqs.push_back(std::move(s));
    }

    CbowExample ex;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (const auto& seq : seqs) {
            for (std::size_t t = 0; t < seq.size(); ++t) {
                ++processed;
                if (config.subsample_threshold > 0.0) {
                    double freq = static_cast<double>(counts[seq[t]]) /
                                  static_cast<double>(total_tokens);
                    double keep = (std::sqrt(freq / config.subsample_threshold) + 1.0) *
                                  config.subsample_threshold / freq;
                    if (train_rng.uniform() > keep) continue;
                }
                ex.context.clear();
                std::size_t lo = t >= win ? t - win : 0;
                std::size_t hi = std::min(seq.size(), t + win + 1);
                for (std::size_t c = lo; c < hi; ++c)
                    if (c != t) ex.context.push_back(seq[c]);
                if (ex.context.empty()) continue;

                ex.target = seq[t];
                ex.negatives.clear();
                for (std::size_t k = 0; k < config.negative_samples; ++k) {
                    std::size_t n = draw_noise(train_rng);
                    if (n == ex.target) continue; // drop colliding draw
                    ex.negatives.push_back(n);
                }

                double lr = lr0 * std::max(1.0 - static_cast<double>(processed) / budget,
                                           1e-4);
                CbowGrads grads = cbow_example_grads(params, ex);
                for (const auto& [token, g] : grads.output)
                    for (std::size_t k = 0; k < dim; ++k)
                        params.output[token][k] -= lr * g[k];
                for (const auto& [token, g] : grads.input)
                    for (std::size_t k = 0; k < dim; ++k)
                        params.input[token][k] -= lr * g[k];
            }
        }
    }

    EmbeddingTable table;
    table.dim = dim;
    for (std::size_t i = 0; i < vocab; ++i)
        table.vectors.emplace(vocabulary[i], params.input[i]);
    table.trained_on.corpus_hash = corpus_hash(corpus);
    table.trained_on.epochs = config.epochs;
    table.trained_on.seed = config.seed;
    if (!table.all_finite()) throw NumericError("train_cbow produced non-finite vectors");
    return table;
}

CoocMatrix build_cooccurrence(const std::vector<std::vector<int>>& corpus,
                              const EmbedConfig& config) {
    if (config.context_window < 1)
        throw ValidationError("embedding config: context_window must be >= 1");
    CoocMatrix m;
    m.window = config.context_window;
    m.distance_weighting = true;
    for (const auto& seq : corpus) {
        for (std::size_t p = 0; p < seq.size(); ++p) {
            std::size_t hi = std::min(seq.size(), p + config.context_window + 1);
            for (std::size_t q = p + 1; q < hi; ++q) {
                double w = m.distance_weighting
                               ? 1.0 / static_cast<double>(q - p)
                               : 1.0;
                m.entries[{seq[p], seq[q]}] += w;
                m.entries[{seq[q], seq[p]}] += w;
            }
        }
    }
    return m;
}

double glove_weight(double x, double x_max, double alpha) {
    return x < x_max ? std::pow(x / x_max, alpha) : 1.0;
}

namespace {

double glove_diff(const GloveParams& p, std::size_t i, std::size_t j, double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.dim; ++k) s += p.w[i][k] * p.w_tilde[j][k];
    return s + p.b[i] + p.b_tilde[j] - std::log(x);
}

} // namespace

double glove_entry_loss(const GloveParams& params, std::size_t i, std::size_t j,
                        double x, double x_max, double alpha) {
    double d = glove_diff(params, i, j, x);
    return glove_weight(x, x_max, alpha) * d * d;
}

GloveEntryGrads glove_entry_grads(const GloveParams& params, std::size_t i,
                                  std::size_t j, double x, double x_max,
                                  double alpha) {
    const double fd = 2.0 * glove_weight(x, x_max, alpha) * glove_diff(params, i, j, x);
    GloveEntryGrads g;
    g.dw_i.resize(params.dim);
    g.dw_tilde_j.resize(params.dim);
    for (std::size_t k = 0; k < params.dim; ++k) {
        g.dw_i[k] = fd * params.w_tilde[j][k];
        g.dw_tilde_j[k] = fd * params.w[i][k];
    }
    g.db_i = fd;
    g.db_tilde_j = fd;
    return g;
}

EmbeddingTable train_glove(const CoocMatrix& cooc, const std::vector<int>& vocabulary,
                           const EmbedConfig& config,
                           std::vector<double>* epoch_objectives) {
    validate_config(config);
    if (cooc.entries.empty()) throw ValidationError("train_glove: empty co-occurrence matrix");
    if (vocabulary.empty()) throw ValidationError("train_glove: empty vocabulary");

    const std::size_t dim = config.dim;
    const std::size_t vocab = vocabulary.size();
    const auto pos = position_of(vocabulary);

    struct Entry {
        std::size_t i, j;
        double x;
    };
    std::vector<Entry> entries;
    entries.reserve(cooc.entries.size());
    for (const auto& [key, x] : cooc.entries) { // std::map: sorted, deterministic
        auto it_i = pos.find(key.first);
        auto it_j = pos.find(key.second);
        if (it_i == pos.end() || it_j == pos.end())
            throw ValidationError("co-occurrence token not in embedding vocabulary");
        if (x > 0.0) entries.push_back({it_i->second, it_j->second, x});
    }

    GloveParams params;
    params.dim = dim;
    Rng init_rng(derive_seed(config.seed, 0));
    params.w = init_vectors(vocab, dim, init_rng);
    params.w_tilde = init_vectors(vocab, dim, init_rng);
    params.b.resize(vocab);
    params.b_tilde.resize(vocab);
    for (auto& x : params.b) x = (init_rng.uniform() - 0.5) / static_cast<double>(dim);
    for (auto& x : params.b_tilde) x = (init_rng.uniform() - 0.5) / static_cast<double>(dim);

    // AdaGrad accumulators start at 1 so early steps are bounded by lr
    std::vector<std::vector<double>> acc_w(vocab, std::vector<double>(dim, 1.0));
    std::vector<std::vector<double>> acc_wt(vocab, std::vector<double>(dim, 1.0));
    std::vector<double> acc_b(vocab, 1.0), acc_bt(vocab, 1.0);

    auto objective = [&]() {
        double total = 0.0;
        for (const auto& e : entries)
            total += glove_entry_loss(params, e.i, e.j, e.x, config.glove_x_max,
                                      config.glove_alpha);
        return total;
    };
    if (epoch_objectives) epoch_objectives->push_back(objective());

    const double lr = config.learning_rate > 0 ? config.learning_rate : 0.05;
    Rng train_rng(derive_seed(config.seed, 1));
    std::vector<std::size_t> order(entries.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle(order, train_rng);
        for (auto idx : order) {
            const Entry& e = entries[idx];
            GloveEntryGrads g = glove_entry_grads(params, e.i, e.j, e.x,
                                                  config.glove_x_max, config.glove_alpha);
            for (std::size_t k = 0; k < dim; ++k) {
                params.w[e.i][k] -= lr * g.dw_i[k] / std::sqrt(acc_w[e.i][k]);
                acc_w[e.i][k] += g.dw_i[k] * g.dw_i[k];
                params.w_tilde[e.j][k] -= lr * g.dw_tilde_j[k] / std::sqrt(acc_wt[e.j][k]);
                acc_wt[e.j][k] += g.dw_tilde_j[k] * g.dw_tilde_j[k];
            }
            params.b[e.i] -= lr * g.db_i / std::sqrt(acc_b[e.i]);
            acc_b[e.i] += g.db_i * g.db_i;
            params.b_tilde[e.j] -= lr * g.db_tilde_j / std::sqrt(acc_bt[e.j]);
            acc_bt[e.j] += g.db_tilde_j * g.db_tilde_j;
        }
        if (epoch_objectives) epoch_objectives->push_back(objective());
    }

    EmbeddingTable table;
    table.dim = dim;
    for (std::size_t i = 0; i < vocab; ++i) {
        std::vector<double> v(dim);
        for (std::size_t k = 0; k < dim; ++k) v[k] = params.w[i][k] + params.w_tilde[i][k];
        table.vectors.emplace(vocabulary[i], std::move(v));
    }
    table.trained_on.epochs = config.epochs;
    table.trained_on.seed = config.seed;
    if (!table.all_finite()) throw NumericError("train_glove produced non-finite vectors");
    return table;
}

} // namespace screp::embed
