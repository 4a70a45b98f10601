#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "screp/corpus.hpp"
#include "screp/encode.hpp"
#include "screp/kmodmap.hpp"
#include "screp/nn.hpp"

namespace screp::experiment {

// One of the twelve source x method combinations.
struct VariantId {
    encode::Source source = encode::Source::syscalls;
    encode::Method method = encode::Method::one_hot;

    bool operator==(const VariantId&) const = default;
};

std::string variant_name(const VariantId& v);

// Canonical enumeration order: sources (syscalls, modules, both) major,
// methods (onehot, additional, word2vec, glove) minor.
const std::vector<VariantId>& all_variants();

struct RunConfig {
    VariantId variant;
    std::uint64_t split_seed = 1;
    std::uint64_t model_seed = 1;
    std::uint64_t embed_seed = 1;
    std::size_t window_length = corpus::kDefaultWindowLength;
    std::size_t stride = 1;
    std::size_t epochs = 20;    // classifier epochs
    std::size_t te_epochs = 10; // text-embedding epochs
    std::size_t batch_size = 64;
    double learning_rate = 0.001;
};

// Trace-level view: a trace counts as flagged if any of its windows is
// classified malicious. Reported alongside, not part of the matrix cells.
struct TraceLevelCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct MetricsReport {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double tpr = 0.0, fpr = 0.0, accuracy = 0.0;
    VariantId variant;
    std::uint64_t split_seed = 0, model_seed = 0, embed_seed = 0;
    std::size_t repetition = 0;
    std::optional<TraceLevelCounts> trace_level;
};

// Positive class is malicious. Requires both classes present in the
// evaluation set (tp+fn > 0 and fp+tn > 0).
MetricsReport compute_metrics(std::size_t tp, std::size_t fp, std::size_t tn,
                              std::size_t fn);

// Accuracy of the constant-benign predictor over a window set; the skew
// baseline used to sanity-check split assembly.
double constant_benign_accuracy(const corpus::WindowSet& ws);

// Table-2 layer sizes for a variant (lstm 32 / fc 16, or 5 / 3 for the
// modules-only source; embedding layer 8 or 3 for the built-in variant).
nn::ModelSpec model_spec_for(const VariantId& v, std::size_t input_width);

struct RunResult {
    MetricsReport report;
    nn::SequenceClassifier model;
    std::optional<embed::EmbeddingTable> syscall_embedding;
    std::optional<embed::EmbeddingTable> module_embedding;
};

// Full pipeline for one variant on pre-assembled splits: train embeddings
// if the method needs them, window + oversample the training set, train the
// classifier, classify every validation window. Deterministic in config.
RunResult run_variant(const RunConfig& config, const corpus::Splits& splits,
                      const kmod::SyscallTable& table);

struct MatrixCell {
    VariantId variant;
    double mean_tpr = 0.0, mean_fpr = 0.0, mean_accuracy = 0.0;
};

struct MatrixResult {
    std::vector<MetricsReport> per_repetition; // canonical order, rep-major
    std::vector<MatrixCell> cells;             // 12 cells, canonical order
};

// Runs every variant `repetitions` times; repetition k adds k to each seed
// and replans the attack split. `on_result` (optional) fires in canonical
// order as results become available, also under parallel execution.
MatrixResult run_matrix(const RunConfig& base, const std::vector<corpus::Trace>& traces,
                        const kmod::SyscallTable& table, std::size_t repetitions = 2,
                        std::size_t jobs = 1,
                        const std::function<void(const RunResult&)>& on_result = {});

// ---- synthetic corpus ---------------------------------------------------

struct SyntheticSpec {
    std::size_t vocab_size = 50;
    std::size_t n_traces = 400;
    std::size_t trace_len = 20;
    std::vector<int> motif;
    double motif_rate = 0.5;
    std::uint64_t seed = 1;
};

// Benign traces are i.i.d. uniform tokens; malicious traces additionally
// carry the motif at a uniformly random position and live in the attack
// partition. Benign traces split evenly between training and validation.
std::vector<corpus::Trace> gen_synthetic(const SyntheticSpec& spec);

// Deterministic motif of `length` distinct tokens drawn from [0, vocab).
std::vector<int> make_motif(std::size_t length, std::size_t vocab_size,
                            std::uint64_t seed);

// Brute-force oracle: true iff `motif` occurs contiguously in `calls`.
bool contains_motif(const std::vector<int>& calls, const std::vector<int>& motif);

// ---- results files ------------------------------------------------------

extern const char* kResultsCsvHeader; // source,method,seed_rep,...

void write_results_csv(std::ostream& out, const std::vector<MetricsReport>& reports);
std::string csv_row(const MetricsReport& r);

// Aligned text matrix "TPR/FPR (Accuracy)" per cell plus per-cell deltas
// against the published reference operating points.
void write_summary(std::ostream& out, const MatrixResult& result);

// Reference operating points used for delta reporting, canonical order.
struct ReferenceCell {
    double tpr, fpr, accuracy;
};
const std::vector<ReferenceCell>& reference_cells();

} // namespace screp::experiment
