#include "screp/encode.hpp"

#include "screp/corpus.hpp"
#include "screp/errors.hpp"

namespace screp::encode {

std::string_view source_name(Source s) {
    switch (s) {
        case Source::syscalls: return "syscalls";
        case Source::modules: return "modules";
        case Source::both: return "both";
    }
    return "?";
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::one_hot: return "onehot";
        case Method::additional: return "additional";
        case Method::word2vec: return "word2vec";
        case Method::glove: return "glove";
    }
    return "?";
}

Source source_from_name(std::string_view token) {
    if (token == "syscalls") return Source::syscalls;
    if (token == "modules") return Source::modules;
    if (token == "both") return Source::both;
    throw ValidationError("unknown source '" + std::string(token) + "'");
}

Method method_from_name(std::string_view token) {
    if (token == "onehot" || token == "one_hot") return Method::one_hot;
    if (token == "additional") return Method::additional;
    if (token == "word2vec") return Method::word2vec;
    if (token == "glove") return Method::glove;
    throw ValidationError("unknown method '" + std::string(token) + "'");
}

Vocabulary::Vocabulary(const kmod::SyscallTable& table) : Vocabulary(table.ids()) {}

Vocabulary::Vocabulary(std::vector<int> tokens) : tokens_(std::move(tokens)) {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        auto [_, inserted] = index_.emplace(tokens_[i], i);
        if (!inserted) throw ValidationError("vocabulary has duplicate tokens");
    }
}

std::size_t Vocabulary::position(int token) const {
    auto it = index_.find(token);
    if (it == index_.end())
        throw ValidationError("token " + std::to_string(token) + " not in vocabulary");
    return it->second;
}

void EncodingSpec::validate() const {
    bool embedded = method == Method::word2vec || method == Method::glove;
    if (embedded) {
        if ((source == Source::syscalls || source == Source::both) &&
            !syscall_embedding)
            throw ValidationError("encoding spec requires a syscall embedding table");
        if (source == Source::modules && !module_embedding)
            throw ValidationError("encoding spec requires a module embedding table");
    } else {
        if (syscall_embedding || module_embedding)
            throw ValidationError("one-hot encodings take no embedding tables");
    }
}

std::size_t input_width(const EncodingSpec& spec) {
    return input_width(spec, kmod::kExpectedTableSize);
}

std::size_t input_width(const EncodingSpec& spec, std::size_t vocab_size) {
    spec.validate();
    bool embedded = spec.method == Method::word2vec || spec.method == Method::glove;
    switch (spec.source) {
        case Source::syscalls:
            return embedded ? spec.syscall_embedding->dim : vocab_size;
        case Source::modules:
            return embedded ? spec.module_embedding->dim
                            : static_cast<std::size_t>(kmod::kModuleCount);
        case Source::both:
            return (embedded ? spec.syscall_embedding->dim : vocab_size) +
                   static_cast<std::size_t>(kmod::kModuleCount);
    }
    return 0;
}

std::vector<double> one_hot(std::size_t vocab_size, std::size_t position) {
    if (position >= vocab_size)
        throw ValidationError("one_hot position " + std::to_string(position) +
                              " out of range for size " + std::to_string(vocab_size));
    std::vector<double> v(vocab_size, 0.0);
    v[position] = 1.0;
    return v;
}

namespace {

const std::vector<double>& embedding_row(const embed::EmbeddingTable& table, int token) {
    auto it = table.vectors.find(token);
    if (it == table.vectors.end())
        throw ValidationError("token " + std::to_string(token) +
                              " missing from embedding table");
    return it->second;
}

} // namespace

Matrix2D encode_window(const corpus::LabeledWindow& window, const EncodingSpec& spec,
                       const Vocabulary& vocab, const kmod::SyscallTable& table) {
    spec.validate();
    const std::size_t width = input_width(spec, vocab.size());
    const bool embedded = spec.method == Method::word2vec || spec.method == Method::glove;

    Matrix2D m(window.calls.size(), width);
    for (std::size_t t = 0; t < window.calls.size(); ++t) {
        const int call = window.calls[t];
        double* row = m.row(t);
        std::size_t offset = 0;

        if (spec.source == Source::syscalls || spec.source == Source::both) {
            if (embedded) {
                const auto& v = embedding_row(*spec.syscall_embedding, call);
                for (std::size_t k = 0; k < v.size(); ++k) row[k] = v[k];
                offset = v.size();
            } else {
                row[vocab.position(call)] = 1.0;
                offset = vocab.size();
            }
        }

        if (spec.source == Source::modules || spec.source == Source::both) {
            const int module = static_cast<int>(table.map_call(call));
            if (spec.source == Source::modules && embedded) {
                const auto& v = embedding_row(*spec.module_embedding, module);
                for (std::size_t k = 0; k < v.size(); ++k) row[k] = v[k];
            } else {
                // module part is one-hot for source=modules one-hot forms
                // and for every source=both form
                row[offset + static_cast<std::size_t>(module)] = 1.0;
            }
        }
    }
    return m;
}

} // namespace screp::encode
