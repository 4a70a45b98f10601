#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "screp/cli.hpp"
#include "screp/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"screp: system-call representation benchmark"};
    app.require_subcommand(1);
    app.fallthrough();

    screp::cli::Manifest m;
    bool strict = false;

    app.set_config("--manifest", "", "manifest file with key = value lines");
    app.add_option("--dataset", m.dataset, "dataset root (ADFA-LD layout)");
    app.add_option("--mapping", m.mapping, "syscall -> kernel module mapping file");
    app.add_option("--out", m.out, "output directory");
    app.add_option("--source", m.source, "input source: syscalls|modules|both")
        ->check(CLI::IsMember({"syscalls", "modules", "both"}));
    app.add_option("--method", m.method,
                   "encoding method: onehot|additional|word2vec|glove")
        ->check(CLI::IsMember({"onehot", "additional", "word2vec", "glove"}));
    app.add_option("--window", m.window, "sliding window length")->capture_default_str();
    app.add_option("--stride", m.stride, "sliding window stride")->capture_default_str();
    app.add_option("--epochs", m.epochs, "classifier training epochs")
        ->capture_default_str();
    app.add_option("--te-epochs", m.te_epochs, "text-embedding training epochs")
        ->capture_default_str();
    app.add_option("--repetitions", m.repetitions, "experiment repetitions")
        ->capture_default_str();
    app.add_option("--batch-size", m.batch_size, "training batch size")
        ->capture_default_str();
    app.add_option("--learning-rate", m.learning_rate, "optimizer learning rate")
        ->capture_default_str();
    auto* seed_split_opt =
        app.add_option("--seed-split", m.seed_split, "attack split seed")
            ->capture_default_str();
    auto* seed_model_opt =
        app.add_option("--seed-model", m.seed_model, "model init/shuffle/dropout seed")
            ->capture_default_str();
    auto* seed_embed_opt =
        app.add_option("--seed-embed", m.seed_embed, "embedding training seed")
            ->capture_default_str();
    app.add_option("--jobs", m.jobs, "max parallel variant jobs")->capture_default_str();
    app.add_flag("--expect-adfa", m.expect_adfa,
                 "fail ingest unless totals match the genuine dataset");
    app.add_flag("--strict", strict, "require every relevant seed explicitly");

    app.add_option("--vocab", m.synth_vocab, "synth: vocabulary size")
        ->capture_default_str();
    app.add_option("--traces", m.synth_traces, "synth: number of traces")
        ->capture_default_str();
    app.add_option("--trace-len", m.synth_trace_len, "synth: calls per trace")
        ->capture_default_str();
    app.add_option("--motif", m.synth_motif, "synth: planted motif, comma-separated ids");
    app.add_option("--motif-len", m.synth_motif_len,
                   "synth: length of the seeded motif when --motif is not given")
        ->capture_default_str();
    app.add_option("--motif-rate", m.synth_motif_rate,
                   "synth: fraction of malicious traces")
        ->capture_default_str();
    auto* synth_seed_opt =
        app.add_option("--synth-seed", m.synth_seed, "synth: generator seed")
            ->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "parse a dataset and report totals");
    auto* embed = app.add_subcommand("embed", "train and write an embedding table");
    auto* run = app.add_subcommand("run", "train and evaluate one variant");
    auto* matrix = app.add_subcommand("matrix", "run the full variant matrix");
    auto* synth = app.add_subcommand("synth", "write a synthetic planted-motif corpus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (strict) {
        std::vector<std::string> missing;
        auto need = [&](CLI::Option* opt, const char* name) {
            if (opt->count() == 0) missing.push_back(name);
        };
        if (embed->parsed()) {
            need(seed_split_opt, "--seed-split");
            need(seed_embed_opt, "--seed-embed");
        }
        if (run->parsed() || matrix->parsed()) {
            need(seed_split_opt, "--seed-split");
            need(seed_model_opt, "--seed-model");
            need(seed_embed_opt, "--seed-embed");
        }
        if (synth->parsed()) need(synth_seed_opt, "--synth-seed");
        if (!missing.empty()) {
            std::cerr << "--strict: missing explicit seed(s):";
            for (const auto& s : missing) std::cerr << ' ' << s;
            std::cerr << '\n';
            return 1;
        }
    }

    try {
        if (ingest->parsed()) screp::cli::cmd_ingest(m, std::cout);
        if (embed->parsed()) screp::cli::cmd_embed(m, std::cout);
        if (run->parsed()) screp::cli::cmd_run(m, std::cout);
        if (matrix->parsed()) screp::cli::cmd_matrix(m, std::cout);
        if (synth->parsed()) screp::cli::cmd_synth(m, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return screp::cli::exit_code_for(e);
    }
    return 0;
}
