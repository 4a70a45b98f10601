#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "screp/embed_table.hpp"
#include "screp/kmodmap.hpp"

namespace screp::corpus {
struct Trace;
}

namespace screp::embed {

enum class TokenSource { syscalls, modules };

struct EmbedConfig {
    std::size_t dim = 8;            // 8 for syscalls/both, 3 for modules
    std::size_t context_window = 5;
    std::size_t epochs = 10;
    std::uint64_t seed = 1;
    double learning_rate = 0.0;     // 0 -> method default (0.025 cbow, 0.05 glove)
    std::size_t negative_samples = 5;
    double glove_x_max = 100.0;
    double glove_alpha = 0.75;
    double subsample_threshold = 0.0; // frequent-token subsampling, off by default
};

// One token sequence per trace; labels are ignored. For modules, tokens are
// the projected module indices 0..6.
std::vector<std::vector<int>> build_corpus(const std::vector<corpus::Trace>& traces,
                                           TokenSource source,
                                           const kmod::SyscallTable& table);

// FNV-1a over the token stream, recorded in table provenance.
std::uint64_t corpus_hash(const std::vector<std::vector<int>>& corpus);

// ---- CBOW (negative sampling) ----------------------------------------

// Parameters indexed by vocabulary position. `input` holds the context-side
// vectors that become the word vectors; `output` the target-side vectors.
struct CbowParams {
    std::size_t dim = 0;
    std::vector<std::vector<double>> input;
    std::vector<std::vector<double>> output;
};

// One training example: context positions (already windowed), the target
// position, and the drawn negative positions.
struct CbowExample {
    std::vector<std::size_t> context;
    std::size_t target;
    std::vector<std::size_t> negatives;
};

struct CbowGrads {
    std::map<std::size_t, std::vector<double>> input;
    std::map<std::size_t, std::vector<double>> output;
};

// loss = -log sigmoid(h . out[target]) - sum_neg log sigmoid(-h . out[neg]),
// h = mean of the context input vectors.
double cbow_example_loss(const CbowParams& params, const CbowExample& ex);
CbowGrads cbow_example_grads(const CbowParams& params, const CbowExample& ex);

// Trains over `vocabulary` (every listed token gets a vector; tokens never
// seen in the corpus keep their seeded initialization). Deterministic in
// (corpus, vocabulary, config).
EmbeddingTable train_cbow(const std::vector<std::vector<int>>& corpus,
                          const std::vector<int>& vocabulary,
                          const EmbedConfig& config);

// ---- GloVe ------------------------------------------------------------

// Sparse symmetric co-occurrence counts with 1/distance weighting. Keys are
// token values (not vocabulary positions).
struct CoocMatrix {
    std::map<std::pair<int, int>, double> entries;
    std::size_t window = 0;
    bool distance_weighting = true;
};

CoocMatrix build_cooccurrence(const std::vector<std::vector<int>>& corpus,
                              const EmbedConfig& config);

struct GloveParams {
    std::size_t dim = 0;
    std::vector<std::vector<double>> w;       // main vectors
    std::vector<std::vector<double>> w_tilde; // context vectors
    std::vector<double> b;
    std::vector<double> b_tilde;
};

struct GloveEntryGrads {
    std::vector<double> dw_i;
    std::vector<double> dw_tilde_j;
    double db_i = 0.0;
    double db_tilde_j = 0.0;
};

double glove_weight(double x, double x_max, double alpha);

// loss term = f(x) * (w_i . w~_j + b_i + b~_j - log x)^2
double glove_entry_loss(const GloveParams& params, std::size_t i, std::size_t j,
                        double x, double x_max, double alpha);
GloveEntryGrads glove_entry_grads(const GloveParams& params, std::size_t i,
                                  std::size_t j, double x, double x_max,
                                  double alpha);

// AdaGrad over the shuffled non-zero entries, config.epochs epochs; the
// exported vector is w_i + w~_i. `epoch_objectives`, when non-null, receives
// the full objective before training and after each epoch.
EmbeddingTable train_glove(const CoocMatrix& cooc, const std::vector<int>& vocabulary,
                           const EmbedConfig& config,
                           std::vector<double>* epoch_objectives = nullptr);

} // namespace screp::embed
