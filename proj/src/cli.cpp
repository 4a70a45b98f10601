#include "screp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "screp/corpus.hpp"
#include "screp/embed.hpp"
#include "screp/encode.hpp"
#include "screp/errors.hpp"
#include "screp/experiment.hpp"
#include "screp/kmodmap.hpp"
#include "screp/nn.hpp"

namespace fs = std::filesystem;

namespace screp::cli {

namespace {

struct ExpectedPartition {
    corpus::Partition partition;
    std::size_t traces;
    std::size_t calls;
};

// genuine ADFA-LD totals per partition
const ExpectedPartition kAdfaExpected[3] = {
    {corpus::Partition::training, 833, 308077},
    {corpus::Partition::attack, 746, 317388},
    {corpus::Partition::validation, 4372, 2122085},
};

kmod::SyscallTable load_mapping(const Manifest& m) {
    if (m.mapping.empty())
        throw ValidationError("a --mapping file is required for this command");
    return kmod::load_table_file(m.mapping);
}

std::vector<corpus::Trace> load_traces(const Manifest& m) {
    if (m.dataset.empty())
        throw ValidationError("a --dataset directory is required for this command");
    return corpus::load_dataset(m.dataset);
}

void ensure_out_dir(const Manifest& m) {
    if (m.out.empty())
        throw ValidationError("an --out directory is required for this command");
    std::error_code ec;
    fs::create_directories(m.out, ec);
    if (ec) throw IoError("cannot create output directory " + m.out + ": " + ec.message());
}

experiment::RunConfig run_config_from(const Manifest& m) {
    experiment::RunConfig c;
    c.variant.source = encode::source_from_name(m.source);
    c.variant.method = encode::method_from_name(m.method);
    c.split_seed = m.seed_split;
    c.model_seed = m.seed_model;
    c.embed_seed = m.seed_embed;
    c.window_length = m.window;
    c.stride = m.stride;
    c.epochs = m.epochs;
    c.te_epochs = m.te_epochs;
    c.batch_size = m.batch_size;
    c.learning_rate = m.learning_rate;
    return c;
}

corpus::Splits assemble(const std::vector<corpus::Trace>& traces,
                        std::uint64_t split_seed) {
    std::set<std::string> attack_ids;
    for (const auto& t : traces)
        if (t.partition == corpus::Partition::attack) attack_ids.insert(t.id);
    auto plan = corpus::plan_split(attack_ids, split_seed);
    return corpus::assemble_splits(traces, plan);
}

void write_embedding_with_provenance(const std::string& path,
                                     const embed::EmbeddingTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write embedding file: " + path);
    out << "# alphabet: " << table.trained_on.source << '\n';
    out << "# epochs: " << table.trained_on.epochs << '\n';
    out << "# seed: " << table.trained_on.seed << '\n';
    out << "# corpus_hash: " << std::hex << table.trained_on.corpus_hash << std::dec
        << '\n';
    embed::save_table(out, table);
}

std::string checkpoint_path(const Manifest& m, const experiment::MetricsReport& r) {
    std::ostringstream name;
    name << "checkpoint_" << encode::source_name(r.variant.source) << '_'
         << encode::method_name(r.variant.method) << "_rep" << r.repetition << ".ckpt";
    return (fs::path(m.out) / name.str()).string();
}

void save_run_artifacts(const Manifest& m, const experiment::RunResult& r) {
    nn::save_checkpoint_file(checkpoint_path(m, r.report), r.model);
    if (r.syscall_embedding) {
        std::ostringstream name;
        name << "embedding_syscalls_" << encode::method_name(r.report.variant.method)
             << "_rep" << r.report.repetition << ".txt";
        write_embedding_with_provenance((fs::path(m.out) / name.str()).string(),
                                        *r.syscall_embedding);
    }
    if (r.module_embedding) {
        std::ostringstream name;
        name << "embedding_modules_" << encode::method_name(r.report.variant.method)
             << "_rep" << r.report.repetition << ".txt";
        write_embedding_with_provenance((fs::path(m.out) / name.str()).string(),
                                        *r.module_embedding);
    }
}

} // namespace

void cmd_ingest(const Manifest& m, std::ostream& out) {
    auto traces = load_traces(m);

    out << "partition   traces      calls\n";
    for (const auto& expected : kAdfaExpected) {
        auto stats = corpus::partition_stats(traces, expected.partition);
        std::ostringstream row;
        row << std::left << std::setw(12) << corpus::partition_name(expected.partition)
            << std::setw(12) << stats.traces << stats.calls;
        out << row.str() << '\n';
        if (m.expect_adfa &&
            (stats.traces != expected.traces || stats.calls != expected.calls)) {
            std::ostringstream msg;
            msg << "partition " << corpus::partition_name(expected.partition)
                << ": expected " << expected.traces << " traces / " << expected.calls
                << " calls, found " << stats.traces << " / " << stats.calls;
            throw ValidationError(msg.str());
        }
    }

    if (!m.mapping.empty()) {
        auto table = kmod::load_table_file(m.mapping);
        if (!table.complete())
            out << "warning: mapping table has " << table.size()
                << " entries, expected " << kmod::kExpectedTableSize << "\n";
        corpus::check_coverage(traces, table);
        out << "coverage: every syscall id resolved by the mapping table\n";
    }
}

void cmd_embed(const Manifest& m, std::ostream& out) {
    auto method = encode::method_from_name(m.method);
    if (method != encode::Method::word2vec && method != encode::Method::glove)
        throw ValidationError("cmd embed requires --method word2vec or glove");
    auto source = encode::source_from_name(m.source);

    auto table = load_mapping(m);
    auto traces = load_traces(m);
    ensure_out_dir(m);
    auto splits = assemble(traces, m.seed_split);

    const bool modules_alphabet = source == encode::Source::modules;
    auto token_source = modules_alphabet ? embed::TokenSource::modules
                                         : embed::TokenSource::syscalls;
    auto corpus_seqs = embed::build_corpus(splits.train, token_source, table);

    std::vector<int> vocabulary;
    if (modules_alphabet)
        for (int i = 0; i < kmod::kModuleCount; ++i) vocabulary.push_back(i);
    else
        vocabulary = table.ids();

    embed::EmbedConfig ec;
    ec.dim = modules_alphabet ? 3 : 8;
    ec.context_window = 5;
    ec.epochs = m.te_epochs;
    ec.seed = m.seed_embed;

    embed::EmbeddingTable emb;
    if (method == encode::Method::glove) {
        auto cooc = embed::build_cooccurrence(corpus_seqs, ec);
        emb = embed::train_glove(cooc, vocabulary, ec);
        emb.trained_on.corpus_hash = embed::corpus_hash(corpus_seqs);
    } else {
        emb = embed::train_cbow(corpus_seqs, vocabulary, ec);
    }
    emb.trained_on.source = modules_alphabet ? "modules" : "syscalls";

    std::ostringstream name;
    name << "embedding_" << (modules_alphabet ? "modules" : "syscalls") << '_'
         << encode::method_name(method) << ".txt";
    std::string path = (fs::path(m.out) / name.str()).string();
    write_embedding_with_provenance(path, emb);
    out << "wrote " << path << " (" << emb.vectors.size() << " vectors, dim "
        << emb.dim << ")\n";
}

void cmd_run(const Manifest& m, std::ostream& out) {
    auto table = load_mapping(m);
    auto traces = load_traces(m);
    ensure_out_dir(m);
    corpus::check_coverage(traces, table);

    auto config = run_config_from(m);
    auto splits = assemble(traces, config.split_seed);
    auto result = experiment::run_variant(config, splits, table);
    save_run_artifacts(m, result);

    std::string csv_path = (fs::path(m.out) / "results.csv").string();
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot write " + csv_path);
    experiment::write_results_csv(csv, {result.report});

    out << experiment::kResultsCsvHeader << '\n'
        << experiment::csv_row(result.report) << '\n';
    if (result.report.trace_level) {
        const auto& t = *result.report.trace_level;
        out << "trace-level (any-window-malicious): tp " << t.tp << " fp " << t.fp
            << " tn " << t.tn << " fn " << t.fn << '\n';
    }
}

void cmd_matrix(const Manifest& m, std::ostream& out) {
    auto table = load_mapping(m);
    auto traces = load_traces(m);
    ensure_out_dir(m);
    corpus::check_coverage(traces, table);

    auto config = run_config_from(m);

    std::string csv_path = (fs::path(m.out) / "results.csv").string();
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot write " + csv_path);
    csv << experiment::kResultsCsvHeader << '\n';
    csv.flush();

    auto on_result = [&](const experiment::RunResult& r) {
        // partial results land on disk as each repetition cell completes
        csv << experiment::csv_row(r.report) << '\n';
        csv.flush();
        save_run_artifacts(m, r);
        out << experiment::variant_name(r.report.variant) << " rep "
            << r.report.repetition << ": " << experiment::csv_row(r.report) << '\n';
    };

    auto matrix = experiment::run_matrix(config, traces, table, m.repetitions, m.jobs,
                                         on_result);

    std::string summary_path = (fs::path(m.out) / "summary.txt").string();
    std::ofstream summary(summary_path, std::ios::binary);
    if (!summary) throw IoError("cannot write " + summary_path);
    experiment::write_summary(summary, matrix);
    summary << "\ntrace-level counts (any-window-malicious)\n";
    for (const auto& r : matrix.per_repetition)
        if (r.trace_level)
            summary << "  " << experiment::variant_name(r.variant) << " rep "
                    << r.repetition << ": tp " << r.trace_level->tp << " fp "
                    << r.trace_level->fp << " tn " << r.trace_level->tn << " fn "
                    << r.trace_level->fn << '\n';

    out << '\n';
    experiment::write_summary(out, matrix);
    out << "\nwrote " << csv_path << " and " << summary_path << '\n';
}

void cmd_synth(const Manifest& m, std::ostream& out) {
    ensure_out_dir(m);

    experiment::SyntheticSpec spec;
    spec.vocab_size = m.synth_vocab;
    spec.n_traces = m.synth_traces;
    spec.trace_len = m.synth_trace_len;
    spec.motif_rate = m.synth_motif_rate;
    spec.seed = m.synth_seed;
    if (!m.synth_motif.empty()) {
        std::istringstream in(m.synth_motif);
        std::string tok;
        while (std::getline(in, tok, ','))
            spec.motif.push_back(std::stoi(tok));
    } else if (m.synth_motif_rate > 0.0) {
        spec.motif = experiment::make_motif(m.synth_motif_len, m.synth_vocab,
                                            m.synth_seed);
    }

    auto traces = experiment::gen_synthetic(spec);

    // materialize in the on-disk layout the ingest command expects
    std::size_t written = 0;
    for (const auto& t : traces) {
        fs::path rel(t.id);
        // trace ids look like synthetic/<partition dirs>/<file>; drop the
        // leading component
        fs::path sub;
        bool first = true;
        for (const auto& part : rel) {
            if (first) {
                first = false;
                continue;
            }
            sub /= part;
        }
        fs::path dest = fs::path(m.out) / sub;
        std::error_code ec;
        fs::create_directories(dest.parent_path(), ec);
        if (ec) throw IoError("cannot create " + dest.parent_path().string());
        std::ofstream f(dest, std::ios::binary);
        if (!f) throw IoError("cannot write " + dest.string());
        for (std::size_t i = 0; i < t.calls.size(); ++i)
            f << (i ? " " : "") << t.calls[i];
        f << '\n';
        ++written;
    }
    // keep the attack directory present even when nothing is malicious
    std::error_code ec;
    fs::create_directories(fs::path(m.out) / "Attack_Data_Master", ec);
    fs::create_directories(fs::path(m.out) / "Training_Data_Master", ec);
    fs::create_directories(fs::path(m.out) / "Validation_Data_Master", ec);

    out << "wrote " << written << " traces under " << m.out;
    if (!spec.motif.empty()) {
        out << " (motif";
        for (int t : spec.motif) out << ' ' << t;
        out << ")";
    }
    out << '\n';
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const NumericError*>(&e)) return 3;
    if (dynamic_cast<const IoError*>(&e)) return 2;
    return 1;
}

} // namespace screp::cli
