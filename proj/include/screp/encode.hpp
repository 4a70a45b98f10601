#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "screp/embed_table.hpp"
#include "screp/kmodmap.hpp"
#include "screp/matrix.hpp"

namespace screp::corpus {
struct LabeledWindow;
}

namespace screp::encode {

enum class Source { syscalls, modules, both };
enum class Method { one_hot, additional, word2vec, glove };

std::string_view source_name(Source s);
std::string_view method_name(Method m);
Source source_from_name(std::string_view token);
Method method_from_name(std::string_view token);

// Fixed token <-> position bijection over the full mapping table, ascending
// by syscall id, so one-hot positions are stable across runs and validation
// windows can never be out of vocabulary.
class Vocabulary {
public:
    explicit Vocabulary(const kmod::SyscallTable& table);
    explicit Vocabulary(std::vector<int> tokens);

    std::size_t size() const { return tokens_.size(); }
    const std::vector<int>& tokens() const { return tokens_; }
    std::size_t position(int token) const; // throws on unknown token

private:
    std::vector<int> tokens_;
    std::map<int, std::size_t> index_;
};

struct EncodingSpec {
    Source source = Source::syscalls;
    Method method = Method::one_hot;
    std::optional<embed::EmbeddingTable> syscall_embedding;
    std::optional<embed::EmbeddingTable> module_embedding;

    // Enforces the embedding-presence invariants; throws ValidationError.
    void validate() const;
};

// Per-timestep input width of each of the twelve variants over the full
// 341-token vocabulary: 341 / 7 / 348 for the one-hot forms, the embedding
// dimension for embedded syscalls or modules, and embedding dim + 7 for the
// combined embedded form (embedded syscalls next to one-hot modules).
std::size_t input_width(const EncodingSpec& spec);

// Same, for an arbitrary syscall vocabulary size.
std::size_t input_width(const EncodingSpec& spec, std::size_t vocab_size);

// Length-`vocab_size` vector, all zeros except a one at `position`.
std::vector<double> one_hot(std::size_t vocab_size, std::size_t position);

// Row t encodes call t of the window. For source=both the syscall part
// comes first, then the module part; serialized models depend on that order.
Matrix2D encode_window(const corpus::LabeledWindow& window, const EncodingSpec& spec,
                       const Vocabulary& vocab, const kmod::SyscallTable& table);

} // namespace screp::encode
