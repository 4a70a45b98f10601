#include "screp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "screp/embed.hpp"
#include "screp/errors.hpp"
#include "screp/rng.hpp"

namespace screp::experiment {

std::string variant_name(const VariantId& v) {
    return std::string(encode::source_name(v.source)) + "/" +
           std::string(encode::method_name(v.method));
}

const std::vector<VariantId>& all_variants() {
    static const std::vector<VariantId> variants = [] {
        std::vector<VariantId> out;
        for (auto s : {encode::Source::syscalls, encode::Source::modules,
                       encode::Source::both})
            for (auto m : {encode::Method::one_hot, encode::Method::additional,
                           encode::Method::word2vec, encode::Method::glove})
                out.push_back({s, m});
        return out;
    }();
    return variants;
}

MetricsReport compute_metrics(std::size_t tp, std::size_t fp, std::size_t tn,
                              std::size_t fn) {
    if (tp + fn == 0)
        throw ValidationError("compute_metrics: no malicious examples, TPR undefined");
    if (fp + tn == 0)
        throw ValidationError("compute_metrics: no benign examples, FPR undefined");
    MetricsReport r;
    r.tp = tp;
    r.fp = fp;
    r.tn = tn;
    r.fn = fn;
    r.tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
    r.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
    r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(tp + fp + tn + fn);
    return r;
}

double constant_benign_accuracy(const corpus::WindowSet& ws) {
    std::size_t total = ws.benign_count + ws.malicious_count;
    if (total == 0) throw ValidationError("constant_benign_accuracy: empty window set");
    return static_cast<double>(ws.benign_count) / static_cast<double>(total);
}

nn::ModelSpec model_spec_for(const VariantId& v, std::size_t input_width) {
    nn::ModelSpec spec;
    spec.input_width = input_width;
    const bool modules_only = v.source == encode::Source::modules;
    if (v.method == encode::Method::additional)
        spec.embed_size = modules_only ? 3 : 8;
    spec.lstm_size = modules_only ? 5 : 32;
    spec.fc_size = modules_only ? 3 : 16;
    spec.output_size = 2;
    spec.dropout_keep = 0.8;
    return spec;
}

namespace {

embed::EmbedConfig embedding_config(const RunConfig& config, bool modules) {
    embed::EmbedConfig ec;
    ec.dim = modules ? 3 : 8;
    ec.context_window = 5;
    ec.epochs = config.te_epochs;
    ec.seed = config.embed_seed;
    return ec;
}

embed::EmbeddingTable train_embedding(const RunConfig& config,
                                      const corpus::Splits& splits,
                                      const kmod::SyscallTable& table, bool modules) {
    auto source = modules ? embed::TokenSource::modules : embed::TokenSource::syscalls;
    auto corpus_seqs = embed::build_corpus(splits.train, source, table);
    std::vector<int> vocabulary;
    if (modules) {
        for (int m = 0; m < kmod::kModuleCount; ++m) vocabulary.push_back(m);
    } else {
        vocabulary = table.ids();
    }
    auto ec = embedding_config(config, modules);
    embed::EmbeddingTable out;
    if (config.variant.method == encode::Method::glove) {
        auto cooc = embed::build_cooccurrence(corpus_seqs, ec);
        out = embed::train_glove(cooc, vocabulary, ec);
        out.trained_on.corpus_hash = embed::corpus_hash(corpus_seqs);
    } else {
        out = embed::train_cbow(corpus_seqs, vocabulary, ec);
    }
    out.trained_on.source = modules ? "modules" : "syscalls";
    return out;
}

} // namespace

RunResult run_variant(const RunConfig& config, const corpus::Splits& splits,
                      const kmod::SyscallTable& table) {
    const VariantId v = config.variant;
    const bool embedded = v.method == encode::Method::word2vec ||
                          v.method == encode::Method::glove;

    encode::EncodingSpec enc;
    enc.source = v.source;
    enc.method = v.method;
    std::optional<embed::EmbeddingTable> syscall_emb, module_emb;
    if (embedded) {
        if (v.source == encode::Source::modules) {
            module_emb = train_embedding(config, splits, table, /*modules=*/true);
            enc.module_embedding = module_emb;
        } else {
            syscall_emb = train_embedding(config, splits, table, /*modules=*/false);
            enc.syscall_embedding = syscall_emb;
        }
    }
    enc.validate();

    const encode::Vocabulary vocab(table);
    const std::size_t width = encode::input_width(enc, vocab.size());

    // training windows are balanced by oversampling; validation windows are
    // used exactly as cut
    auto train_ws = corpus::make_windows(splits.train, config.window_length,
                                         config.stride);
    const std::size_t train_window_count = train_ws.windows.size();
    train_ws = corpus::oversample(train_ws, config.split_seed);
    auto val_ws = corpus::make_windows(splits.validation, config.window_length,
                                       config.stride);
    const std::size_t val_window_count = val_ws.windows.size();

    nn::ModelSpec model_spec = model_spec_for(v, width);
    nn::SequenceClassifier model(model_spec, config.model_seed);
    nn::AdamOptimizer optimizer(model_spec, config.learning_rate);

    Rng shuffle_rng(derive_seed(config.model_seed, 1));
    Rng dropout_rng(derive_seed(config.model_seed, 2));

    std::vector<std::size_t> order(train_ws.windows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle(order, shuffle_rng);
        for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
            const std::size_t end = std::min(order.size(), begin + config.batch_size);
            nn::ParamSet batch_grads = nn::ParamSet::zeros(model_spec);
            for (std::size_t i = begin; i < end; ++i) {
                const auto& w = train_ws.windows[order[i]];
                Matrix2D x = encode::encode_window(w, enc, vocab, table);
                auto [probs, cache] = model.forward(x, nn::Mode::train, dropout_rng);
                (void)probs;
                int label = w.label == corpus::Label::malicious ? 1 : 0;
                nn::ParamSet grads = model.backward(cache, label);
                batch_grads.add_scaled(grads, 1.0);
            }
            batch_grads.scale(1.0 / static_cast<double>(end - begin));
            optimizer.step(model.params(), batch_grads);
        }
        if (!model.params().all_finite())
            throw NumericError("non-finite parameters after epoch " +
                               std::to_string(epoch + 1) + " of " + variant_name(v));
    }

    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::map<std::string, std::pair<corpus::Label, bool>> trace_flagged;
    for (const auto& t : splits.validation)
        trace_flagged.emplace(t.id, std::make_pair(t.label, false));
    for (const auto& w : val_ws.windows) {
        Matrix2D x = encode::encode_window(w, enc, vocab, table);
        auto probs = model.predict(x);
        bool predicted_malicious = probs[1] > probs[0];
        bool is_malicious = w.label == corpus::Label::malicious;
        if (predicted_malicious && is_malicious)
            ++tp;
        else if (predicted_malicious && !is_malicious)
            ++fp;
        else if (!predicted_malicious && !is_malicious)
            ++tn;
        else
            ++fn;
        if (predicted_malicious) trace_flagged[w.trace_id].second = true;
    }
    if (tp + fp + tn + fn != val_window_count)
        throw ValidationError("confusion counts do not cover the validation windows");
    (void)train_window_count;

    MetricsReport report = compute_metrics(tp, fp, tn, fn);
    report.variant = v;
    report.split_seed = config.split_seed;
    report.model_seed = config.model_seed;
    report.embed_seed = config.embed_seed;

    TraceLevelCounts tl;
    for (const auto& [id, state] : trace_flagged) {
        bool malicious = state.first == corpus::Label::malicious;
        bool flagged = state.second;
        if (malicious && flagged)
            ++tl.tp;
        else if (malicious && !flagged)
            ++tl.fn;
        else if (!malicious && flagged)
            ++tl.fp;
        else
            ++tl.tn;
    }
    report.trace_level = tl;

    RunResult result{std::move(report), std::move(model), std::move(syscall_emb),
                     std::move(module_emb)};
    return result;
}

MatrixResult run_matrix(const RunConfig& base, const std::vector<corpus::Trace>& traces,
                        const kmod::SyscallTable& table, std::size_t repetitions,
                        std::size_t jobs,
                        const std::function<void(const RunResult&)>& on_result) {
    if (repetitions < 1) throw ValidationError("run_matrix: repetitions must be >= 1");
    const auto& variants = all_variants();

    struct Job {
        RunConfig config;
        std::size_t repetition;
    };
    std::vector<Job> todo;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        for (const auto& v : variants) {
            RunConfig c = base;
            c.variant = v;
            c.split_seed = base.split_seed + rep;
            c.model_seed = base.model_seed + rep;
            c.embed_seed = base.embed_seed + rep;
            todo.push_back({c, rep});
        }
    }

    // splits per repetition are shared by that repetition's variants
    std::vector<corpus::Splits> splits_by_rep;
    std::set<std::string> attack_ids;
    for (const auto& t : traces)
        if (t.partition == corpus::Partition::attack) attack_ids.insert(t.id);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        auto plan = corpus::plan_split(attack_ids, base.split_seed + rep);
        splits_by_rep.push_back(corpus::assemble_splits(traces, plan));
    }

    std::vector<std::optional<RunResult>> results(todo.size());
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next_job{0};
    std::size_t flushed = 0;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::size_t idx = next_job.fetch_add(1);
            if (idx >= todo.size()) return;
            try {
                RunResult r = run_variant(todo[idx].config, splits_by_rep[todo[idx].repetition],
                                          table);
                r.report.repetition = todo[idx].repetition;
                std::lock_guard<std::mutex> lock(mu);
                results[idx] = std::move(r);
                cv.notify_all();
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
                cv.notify_all();
                return;
            }
        }
    };

    const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, todo.size()));
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);

    // flush completed jobs in canonical order so output is reproducible
    {
        std::unique_lock<std::mutex> lock(mu);
        while (flushed < todo.size()) {
            cv.wait(lock, [&] { return failure || results[flushed].has_value(); });
            if (failure) break;
            if (on_result) on_result(*results[flushed]);
            ++flushed;
        }
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);

    MatrixResult out;
    for (auto& r : results) out.per_repetition.push_back(r->report);

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        MatrixCell cell;
        cell.variant = variants[vi];
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            const auto& r = out.per_repetition[rep * variants.size() + vi];
            cell.mean_tpr += r.tpr;
            cell.mean_fpr += r.fpr;
            cell.mean_accuracy += r.accuracy;
        }
        cell.mean_tpr /= static_cast<double>(repetitions);
        cell.mean_fpr /= static_cast<double>(repetitions);
        cell.mean_accuracy /= static_cast<double>(repetitions);
        out.cells.push_back(cell);
    }
    return out;
}

std::vector<int> make_motif(std::size_t length, std::size_t vocab_size,
                            std::uint64_t seed) {
    if (length > vocab_size)
        throw ValidationError("make_motif: motif longer than vocabulary");
    Rng rng(derive_seed(seed, 7));
    std::vector<int> all(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) all[i] = static_cast<int>(i);
    shuffle(all, rng);
    return std::vector<int>(all.begin(), all.begin() + length);
}

std::vector<corpus::Trace> gen_synthetic(const SyntheticSpec& spec) {
    if (spec.vocab_size == 0 || spec.n_traces == 0 || spec.trace_len == 0)
        throw ValidationError("gen_synthetic: sizes must be positive");
    if (spec.motif_rate < 0.0 || spec.motif_rate > 1.0)
        throw ValidationError("gen_synthetic: motif_rate must be in [0,1]");
    if (spec.motif_rate > 0.0) {
        if (spec.motif.empty())
            throw ValidationError("gen_synthetic: motif_rate > 0 needs a motif");
        if (spec.motif.size() > spec.trace_len)
            throw ValidationError("gen_synthetic: motif longer than trace length");
        for (int tok : spec.motif)
            if (tok < 0 || static_cast<std::size_t>(tok) >= spec.vocab_size)
                throw ValidationError("gen_synthetic: motif token outside vocabulary");
    }

    const std::size_t n_malicious =
        static_cast<std::size_t>(std::llround(spec.motif_rate *
                                              static_cast<double>(spec.n_traces)));
    const std::size_t n_benign = spec.n_traces - n_malicious;
    const std::size_t benign_to_train = (n_benign + 1) / 2;

    Rng rng(spec.seed);
    std::vector<corpus::Trace> traces;
    traces.reserve(spec.n_traces);
    char name[160];

    for (std::size_t i = 0; i < spec.n_traces; ++i) {
        corpus::Trace t;
        bool malicious = i < n_malicious;
        t.calls.resize(spec.trace_len);
        for (auto& c : t.calls) c = static_cast<int>(rng.index(spec.vocab_size));
        if (malicious) {
            std::size_t max_start = spec.trace_len - spec.motif.size();
            std::size_t start = max_start == 0 ? 0 : rng.index(max_start + 1);
            std::copy(spec.motif.begin(), spec.motif.end(), t.calls.begin() + start);
            t.partition = corpus::Partition::attack;
            t.label = corpus::Label::malicious;
            t.attack_family = "planted";
            std::snprintf(name, sizeof(name),
                          "synthetic/Attack_Data_Master/planted/trace_%05zu.txt", i);
        } else {
            std::size_t b = i - n_malicious;
            bool to_train = b < benign_to_train;
            t.partition = to_train ? corpus::Partition::training
                                   : corpus::Partition::validation;
            t.label = corpus::Label::benign;
            std::snprintf(name, sizeof(name), "synthetic/%s/trace_%05zu.txt",
                          to_train ? "Training_Data_Master" : "Validation_Data_Master",
                          i);
        }
        t.id = name;
        traces.push_back(std::move(t));
    }
    return traces;
}

bool contains_motif(const std::vector<int>& calls, const std::vector<int>& motif) {
    if (motif.empty() || motif.size() > calls.size()) return false;
    return std::search(calls.begin(), calls.end(), motif.begin(), motif.end()) !=
           calls.end();
}

const char* kResultsCsvHeader = "source,method,seed_rep,tp,fp,tn,fn,tpr,fpr,accuracy";

namespace {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string csv_row(const MetricsReport& r) {
    std::ostringstream out;
    out << encode::source_name(r.variant.source) << ','
        << encode::method_name(r.variant.method) << ',' << r.repetition << ',' << r.tp
        << ',' << r.fp << ',' << r.tn << ',' << r.fn << ',' << format_real(r.tpr) << ','
        << format_real(r.fpr) << ',' << format_real(r.accuracy);
    return out.str();
}

void write_results_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
    out << kResultsCsvHeader << '\n';
    for (const auto& r : reports) out << csv_row(r) << '\n';
}

const std::vector<ReferenceCell>& reference_cells() {
    // published single-operating-point results this benchmark compares
    // against, canonical variant order
    static const std::vector<ReferenceCell> cells = {
        {0.95, 0.16, 0.85}, {0.90, 0.16, 0.85}, {0.92, 0.17, 0.84}, {0.79, 0.14, 0.85},
        {0.80, 0.24, 0.77}, {0.89, 0.25, 0.75}, {0.77, 0.25, 0.76}, {0.77, 0.24, 0.77},
        {0.95, 0.16, 0.86}, {0.93, 0.17, 0.84}, {0.91, 0.16, 0.85}, {0.87, 0.16, 0.84},
    };
    return cells;
}

void write_summary(std::ostream& out, const MatrixResult& result) {
    const auto& refs = reference_cells();
    char buf[256];
    out << "variant matrix, mean TPR/FPR (Accuracy) over repetitions\n\n";
    std::snprintf(buf, sizeof(buf), "%-10s %-18s %-18s %-18s %-18s\n", "", "One-hot",
                  "Additional", "Word2vec", "GloVe");
    out << buf;
    const char* row_names[3] = {"syscalls", "modules", "both"};
    for (int row = 0; row < 3; ++row) {
        std::snprintf(buf, sizeof(buf), "%-10s", row_names[row]);
        out << buf;
        for (int col = 0; col < 4; ++col) {
            const auto& c = result.cells[static_cast<std::size_t>(row * 4 + col)];
            std::snprintf(buf, sizeof(buf), " %.2f/%.2f (%.2f)  ", c.mean_tpr,
                          c.mean_fpr, c.mean_accuracy);
            out << buf;
        }
        out << '\n';
    }
    out << "\ndeltas vs reference (this run minus reference)\n";
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const auto& c = result.cells[i];
        std::snprintf(buf, sizeof(buf),
                      "  %-22s dTPR %+0.3f  dFPR %+0.3f  dACC %+0.3f\n",
                      variant_name(c.variant).c_str(), c.mean_tpr - refs[i].tpr,
                      c.mean_fpr - refs[i].fpr, c.mean_accuracy - refs[i].accuracy);
        out << buf;
    }
}

} // namespace screp::experiment
