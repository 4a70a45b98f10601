#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace screp::embed {

// What a table was trained on, carried along for provenance output.
struct TrainedOn {
    std::string source;          // "syscalls" or "modules"
    std::uint64_t corpus_hash = 0;
    std::size_t epochs = 0;
    std::uint64_t seed = 0;
};

// token -> dense vector map. Every vocabulary token has a vector of
// length dim.
struct EmbeddingTable {
    std::size_t dim = 0;
    std::map<int, std::vector<double>> vectors;
    TrainedOn trained_on;

    const std::vector<double>& vector_for(int token) const; // throws on miss
    bool all_finite() const;
};

// Text format: optional '#' comment lines, then "<vocab_count> <dim>", then
// one "<token> <v1> ... <v_dim>" line per token at 9 significant digits.
void save_table(std::ostream& out, const EmbeddingTable& table);
EmbeddingTable load_table(std::istream& in);

void save_table_file(const std::string& path, const EmbeddingTable& table);
EmbeddingTable load_table_file(const std::string& path);

} // namespace screp::embed
