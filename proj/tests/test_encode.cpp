#include <doctest.h>

#include <numeric>
#include <set>

#include "screp/corpus.hpp"
#include "screp/encode.hpp"
#include "screp/errors.hpp"
#include "screp/rng.hpp"

using namespace screp;
using namespace screp::encode;

namespace {

const kmod::SyscallTable& shipped_table() {
    static kmod::SyscallTable t =
        kmod::load_table_file(SCREP_MAPPING_FILE, kmod::CountPolicy::require);
    return t;
}

embed::EmbeddingTable toy_embedding(std::size_t dim, const std::vector<int>& tokens,
                                    double scale) {
    embed::EmbeddingTable e;
    e.dim = dim;
    for (int tok : tokens) {
        std::vector<double> v(dim);
        for (std::size_t k = 0; k < dim; ++k)
            v[k] = scale * (static_cast<double>(tok) + 0.1 * static_cast<double>(k));
        e.vectors[tok] = v;
    }
    return e;
}

corpus::LabeledWindow window_of(std::vector<int> calls) {
    corpus::LabeledWindow w;
    w.trace_id = "t";
    w.calls = std::move(calls);
    w.label = corpus::Label::benign;
    return w;
}

EncodingSpec spec_for(Source s, Method m, const kmod::SyscallTable& table) {
    EncodingSpec spec;
    spec.source = s;
    spec.method = m;
    if (m == Method::word2vec || m == Method::glove) {
        if (s == Source::modules) {
            spec.module_embedding = toy_embedding(3, {0, 1, 2, 3, 4, 5, 6}, 0.5);
        } else {
            spec.syscall_embedding = toy_embedding(8, table.ids(), 0.01);
        }
    }
    return spec;
}

double row_sum(const Matrix2D& m, std::size_t r) {
    return std::accumulate(m.row(r), m.row(r) + m.cols(), 0.0);
}

} // namespace

TEST_CASE("input widths of the twelve variants") {
    const auto& table = shipped_table();
    struct Expect {
        Source s;
        Method m;
        std::size_t width;
    };
    const Expect expected[] = {
        {Source::syscalls, Method::one_hot, 341},
        {Source::syscalls, Method::additional, 341},
        {Source::syscalls, Method::word2vec, 8},
        {Source::syscalls, Method::glove, 8},
        {Source::modules, Method::one_hot, 7},
        {Source::modules, Method::additional, 7},
        {Source::modules, Method::word2vec, 3},
        {Source::modules, Method::glove, 3},
        {Source::both, Method::one_hot, 348},
        {Source::both, Method::additional, 348},
        {Source::both, Method::word2vec, 15},
        {Source::both, Method::glove, 15},
    };
    for (const auto& e : expected) {
        auto spec = spec_for(e.s, e.m, table);
        CHECK(input_width(spec) == e.width);
    }
}

TEST_CASE("one_hot basics") {
    CHECK(one_hot(7, 0) == std::vector<double>{1, 0, 0, 0, 0, 0, 0});
    CHECK(one_hot(7, 6) == std::vector<double>{0, 0, 0, 0, 0, 0, 1});
    CHECK_THROWS_AS(one_hot(7, 7), ValidationError);

    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        std::size_t n = 1 + rng.index(300);
        auto v = one_hot(n, rng.index(n));
        CHECK(std::accumulate(v.begin(), v.end(), 0.0) == 1.0);
    }
}

TEST_CASE("encoding spec validation") {
    const auto& table = shipped_table();
    EncodingSpec missing;
    missing.source = Source::syscalls;
    missing.method = Method::word2vec;
    CHECK_THROWS_AS(missing.validate(), ValidationError);

    EncodingSpec extra;
    extra.source = Source::syscalls;
    extra.method = Method::one_hot;
    extra.syscall_embedding = toy_embedding(8, table.ids(), 0.01);
    CHECK_THROWS_AS(extra.validate(), ValidationError);

    EncodingSpec mod_w2v;
    mod_w2v.source = Source::modules;
    mod_w2v.method = Method::glove;
    CHECK_THROWS_AS(mod_w2v.validate(), ValidationError);
    mod_w2v.module_embedding = toy_embedding(3, {0, 1, 2, 3, 4, 5, 6}, 0.5);
    CHECK_NOTHROW(mod_w2v.validate());
}

TEST_CASE("one-hot windows have binary rows with the right sums") {
    const auto& table = shipped_table();
    Vocabulary vocab(table);
    Rng rng(7);
    std::vector<int> calls(20);
    for (auto& c : calls) c = static_cast<int>(rng.index(341));
    auto w = window_of(calls);

    auto sc = encode_window(w, spec_for(Source::syscalls, Method::one_hot, table),
                            vocab, table);
    CHECK(sc.rows() == 20);
    CHECK(sc.cols() == 341);
    for (std::size_t t = 0; t < 20; ++t) {
        CHECK(row_sum(sc, t) == 1.0);
        CHECK(sc(t, vocab.position(calls[t])) == 1.0);
    }

    auto both = encode_window(w, spec_for(Source::both, Method::one_hot, table),
                              vocab, table);
    CHECK(both.cols() == 348);
    for (std::size_t t = 0; t < 20; ++t) {
        CHECK(row_sum(both, t) == 2.0);
        CHECK(both(t, vocab.position(calls[t])) == 1.0);
        auto module = static_cast<std::size_t>(table.map_call(calls[t]));
        CHECK(both(t, 341 + module) == 1.0);
    }

    auto mod = encode_window(w, spec_for(Source::modules, Method::additional, table),
                             vocab, table);
    CHECK(mod.cols() == 7);
    for (std::size_t t = 0; t < 20; ++t) CHECK(row_sum(mod, t) == 1.0);
}

TEST_CASE("embedded windows are table lookups") {
    const auto& table = shipped_table();
    Vocabulary vocab(table);
    auto spec = spec_for(Source::syscalls, Method::word2vec, table);

    auto w = window_of(std::vector<int>(20, 3));
    auto m = encode_window(w, spec, vocab, table);
    CHECK(m.cols() == 8);
    const auto& v3 = spec.syscall_embedding->vector_for(3);
    for (std::size_t t = 0; t < 20; ++t)
        for (std::size_t k = 0; k < 8; ++k) CHECK(m(t, k) == v3[k]);

    // combined form: embedded syscalls then one-hot modules
    auto spec_both = spec_for(Source::both, Method::glove, table);
    auto mb = encode_window(w, spec_both, vocab, table);
    CHECK(mb.cols() == 15);
    for (std::size_t t = 0; t < 20; ++t) {
        for (std::size_t k = 0; k < 8; ++k) CHECK(mb(t, k) == v3[k]);
        auto module = static_cast<std::size_t>(table.map_call(3));
        CHECK(mb(t, 8 + module) == 1.0);
        CHECK(std::accumulate(mb.row(t) + 8, mb.row(t) + 15, 0.0) == 1.0);
    }

    // missing token in the table is an error naming the token
    EncodingSpec broken = spec;
    broken.syscall_embedding->vectors.erase(3);
    CHECK_THROWS_WITH_AS(encode_window(w, broken, vocab, table),
                         doctest::Contains("3"), ValidationError);
}

TEST_CASE("one-hot syscall encoding is injective on windows") {
    const auto& table = shipped_table();
    Vocabulary vocab(table);
    auto spec = spec_for(Source::syscalls, Method::one_hot, table);
    Rng rng(13);
    std::set<std::vector<int>> seen_calls;
    std::set<std::vector<double>> seen_encodings;
    for (int i = 0; i < 200; ++i) {
        std::vector<int> calls(10);
        for (auto& c : calls) c = static_cast<int>(rng.index(341));
        if (!seen_calls.insert(calls).second) continue;
        auto m = encode_window(window_of(calls), spec, vocab, table);
        CHECK(seen_encodings.insert(m.values()).second);
    }
}

TEST_CASE("module encodings collapse syscalls with equal projections") {
    const auto& table = shipped_table();
    Vocabulary vocab(table);
    auto spec = spec_for(Source::modules, Method::one_hot, table);

    // 3 (read) and 4 (write) are both file_systems
    REQUIRE(table.map_call(3) == table.map_call(4));
    auto a = encode_window(window_of({3, 3, 3}), spec, vocab, table);
    auto b = encode_window(window_of({4, 3, 4}), spec, vocab, table);
    CHECK(a == b);

    // and distinct projections stay distinct
    auto c = encode_window(window_of({102, 3, 4}), spec, vocab, table);
    CHECK_FALSE(a == c);
}

TEST_CASE("vocabulary is a stable bijection") {
    const auto& table = shipped_table();
    Vocabulary vocab(table);
    CHECK(vocab.size() == 341);
    for (std::size_t i = 0; i < vocab.size(); ++i)
        CHECK(vocab.position(vocab.tokens()[i]) == i);
    CHECK_THROWS_AS(vocab.position(9999), ValidationError);
    CHECK_THROWS_AS(Vocabulary(std::vector<int>{1, 1}), ValidationError);
}

TEST_CASE("variant name round trips") {
    CHECK(source_from_name("syscalls") == Source::syscalls);
    CHECK(source_from_name("modules") == Source::modules);
    CHECK(source_from_name("both") == Source::both);
    CHECK(method_from_name("onehot") == Method::one_hot);
    CHECK(method_from_name("additional") == Method::additional);
    CHECK(method_from_name("word2vec") == Method::word2vec);
    CHECK(method_from_name("glove") == Method::glove);
    CHECK_THROWS_AS(source_from_name("other"), ValidationError);
    CHECK_THROWS_AS(method_from_name("skipgram"), ValidationError);
}
