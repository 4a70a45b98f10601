#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace screp::cli {

// Everything a command needs, resolved from flags plus the optional
// manifest file (flags win). Seeds default to 1 unless --strict is set, in
// which case omitting one is an error (enforced by the flag layer).
struct Manifest {
    std::string dataset;
    std::string mapping;
    std::string out;
    std::string source = "syscalls";
    std::string method = "onehot";
    std::size_t window = 20;
    std::size_t stride = 1;
    std::size_t epochs = 20;
    std::size_t te_epochs = 10;
    std::size_t repetitions = 2;
    std::size_t batch_size = 64;
    double learning_rate = 0.001;
    std::uint64_t seed_split = 1;
    std::uint64_t seed_model = 1;
    std::uint64_t seed_embed = 1;
    std::size_t jobs = 1;
    bool expect_adfa = false;

    // synth command
    std::size_t synth_vocab = 50;
    std::size_t synth_traces = 400;
    std::size_t synth_trace_len = 20;
    std::size_t synth_motif_len = 6;
    std::string synth_motif; // comma-separated ids; empty -> seeded motif
    double synth_motif_rate = 0.5;
    std::uint64_t synth_seed = 1;
};

// Commands print human-readable progress to `out` and throw screp errors on
// failure; main maps exception type to the exit code contract
// (1 validation, 2 I/O, 3 numeric).
void cmd_ingest(const Manifest& m, std::ostream& out);
void cmd_embed(const Manifest& m, std::ostream& out);
void cmd_run(const Manifest& m, std::ostream& out);
void cmd_matrix(const Manifest& m, std::ostream& out);
void cmd_synth(const Manifest& m, std::ostream& out);

// Exit codes: 0 success, 1 validation failure, 2 I/O error, 3 numeric
// failure. Returns the code for an exception already caught.
int exit_code_for(const std::exception& e);

} // namespace screp::cli
