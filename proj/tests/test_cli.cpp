#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "screp/cli.hpp"
#include "screp/embed_table.hpp"
#include "screp/errors.hpp"
#include "screp/nn.hpp"

using namespace screp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() /
               (std::string("screp_cli_") + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_tool(const std::string& args) {
    std::string cmd = std::string(SCREP_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string synth_args(const fs::path& out) {
    return "synth --out " + out.string() +
           " --vocab 12 --traces 40 --trace-len 20 --motif 1,5,9,2 "
           "--motif-rate 0.5 --synth-seed 3";
}

} // namespace

TEST_CASE("synth then ingest round trip") {
    TempDir tmp("synth");
    auto corpus_dir = tmp.path / "corpus";
    REQUIRE(run_tool(synth_args(corpus_dir)) == 0);
    CHECK(fs::exists(corpus_dir / "Training_Data_Master"));
    CHECK(fs::exists(corpus_dir / "Attack_Data_Master" / "planted"));
    CHECK(fs::exists(corpus_dir / "Validation_Data_Master"));

    CHECK(run_tool("ingest --dataset " + corpus_dir.string() + " --mapping " +
                   SCREP_MAPPING_FILE) == 0);

    // synthetic corpus is not the genuine dataset
    CHECK(run_tool("ingest --expect-adfa --dataset " + corpus_dir.string()) == 1);

    // fixed seed reproduces the exact tree
    auto corpus2 = tmp.path / "corpus2";
    REQUIRE(run_tool(synth_args(corpus2)) == 0);
    CHECK(slurp(corpus_dir / "Training_Data_Master" / "trace_00020.txt") ==
          slurp(corpus2 / "Training_Data_Master" / "trace_00020.txt"));
}

TEST_CASE("synth with zero motif rate writes no attack traces") {
    TempDir tmp("benign");
    auto corpus_dir = tmp.path / "corpus";
    REQUIRE(run_tool("synth --out " + corpus_dir.string() +
                     " --vocab 10 --traces 8 --trace-len 6 --motif-rate 0 "
                     "--synth-seed 1") == 0);
    CHECK(fs::exists(corpus_dir / "Attack_Data_Master"));
    CHECK(fs::is_empty(corpus_dir / "Attack_Data_Master"));
}

TEST_CASE("missing inputs map to the validation exit code") {
    TempDir tmp("errs");
    CHECK(run_tool("embed --method word2vec --source modules --out " +
                   (tmp.path / "o").string() + " --dataset " + tmp.path.string()) == 1);
    CHECK(run_tool("embed --method onehot --source syscalls --mapping " +
                   std::string(SCREP_MAPPING_FILE)) == 1);
    // absent dataset directory is an I/O failure
    auto corpus_dir = tmp.path / "nonexistent";
    CHECK(run_tool("ingest --dataset " + corpus_dir.string()) == 2);
}

TEST_CASE("strict mode requires explicit seeds") {
    TempDir tmp("strict");
    auto corpus_dir = tmp.path / "corpus";
    REQUIRE(run_tool(synth_args(corpus_dir)) == 0);

    std::string common = " --dataset " + corpus_dir.string() + " --mapping " +
                         SCREP_MAPPING_FILE + " --out " + (tmp.path / "o").string() +
                         " --epochs 1 --te-epochs 1";
    CHECK(run_tool("run --strict" + common) == 1);
    CHECK(run_tool("run --strict --seed-split 1 --seed-model 2" + common) == 1);
    // all three present satisfies strict mode
    CHECK(run_tool("run --strict --seed-split 1 --seed-model 2 --seed-embed 3" +
                   common + " --source modules --method onehot") == 0);
}

TEST_CASE("embed writes a reloadable table with provenance") {
    TempDir tmp("embed");
    auto corpus_dir = tmp.path / "corpus";
    REQUIRE(run_tool(synth_args(corpus_dir)) == 0);
    auto out_dir = tmp.path / "emb";

    std::string args = "embed --dataset " + corpus_dir.string() + " --mapping " +
                       SCREP_MAPPING_FILE + " --out " + out_dir.string() +
                       " --source modules --method word2vec --te-epochs 2 "
                       "--seed-split 1 --seed-embed 5";
    REQUIRE(run_tool(args) == 0);
    auto file = out_dir / "embedding_modules_word2vec.txt";
    REQUIRE(fs::exists(file));
    auto first = slurp(file);
    CHECK(first.rfind("# alphabet: modules", 0) == 0);
    CHECK(embed::load_table_file(file.string()).dim == 3);

    // rerun reproduces the bytes
    REQUIRE(run_tool(args) == 0);
    CHECK(slurp(file) == first);
}

TEST_CASE("run writes results csv and a reloadable checkpoint") {
    TempDir tmp("run");
    auto corpus_dir = tmp.path / "corpus";
    REQUIRE(run_tool(synth_args(corpus_dir)) == 0);
    auto out_dir = tmp.path / "results";

    REQUIRE(run_tool("run --dataset " + corpus_dir.string() + " --mapping " +
                     SCREP_MAPPING_FILE + " --out " + out_dir.string() +
                     " --source modules --method additional --epochs 1") == 0);
    auto csv = slurp(out_dir / "results.csv");
    CHECK(csv.rfind("source,method,seed_rep,tp,fp,tn,fn,tpr,fpr,accuracy\n", 0) == 0);
    CHECK(csv.find("modules,additional,0,") != std::string::npos);

    auto ckpt = out_dir / "checkpoint_modules_additional_rep0.ckpt";
    REQUIRE(fs::exists(ckpt));
    auto model = nn::load_checkpoint_file(ckpt.string());
    CHECK(model.spec().input_width == 7);
    CHECK(model.spec().embed_size == 3);
    CHECK(model.spec().lstm_size == 5);
}

TEST_CASE("manifest file supplies defaults and flags override it") {
    TempDir tmp("manifest");
    auto manifest = tmp.path / "run.manifest";
    auto corpus_a = tmp.path / "a";
    auto corpus_b = tmp.path / "b";
    {
        std::ofstream f(manifest);
        f << "vocab = 9\n";
        f << "traces = 6\n";
        f << "trace-len = 7\n";
        f << "motif-rate = 0\n";
        f << "synth-seed = 2\n";
        f << "out = " << corpus_a.string() << "\n";
    }
    REQUIRE(run_tool("synth --manifest " + manifest.string()) == 0);
    auto some_file = corpus_a / "Training_Data_Master" / "trace_00000.txt";
    REQUIRE(fs::exists(some_file));
    {
        std::istringstream tokens(slurp(some_file));
        int n = 0, v;
        while (tokens >> v) ++n;
        CHECK(n == 7);
    }

    // command line overrides the manifest value
    REQUIRE(run_tool("synth --manifest " + manifest.string() + " --trace-len 4 --out " +
                     corpus_b.string()) == 0);
    std::istringstream tokens(slurp(corpus_b / "Training_Data_Master" /
                                    "trace_00000.txt"));
    int n = 0, v;
    while (tokens >> v) ++n;
    CHECK(n == 4);
}

TEST_CASE("matrix reruns are byte-identical") {
    TempDir tmp("matrix");
    auto corpus_dir = tmp.path / "corpus";
    REQUIRE(run_tool("synth --out " + corpus_dir.string() +
                     " --vocab 10 --traces 24 --trace-len 20 --motif 1,5,9 "
                     "--motif-rate 0.5 --synth-seed 4") == 0);

    std::string common = "matrix --dataset " + corpus_dir.string() + " --mapping " +
                         SCREP_MAPPING_FILE +
                         " --repetitions 1 --epochs 1 --te-epochs 1 --jobs 2 --out ";
    auto out1 = tmp.path / "m1";
    auto out2 = tmp.path / "m2";
    REQUIRE(run_tool(common + out1.string()) == 0);
    REQUIRE(run_tool(common + out2.string()) == 0);

    auto csv1 = slurp(out1 / "results.csv");
    CHECK(csv1 == slurp(out2 / "results.csv"));

    // 12 variant rows behind the header
    std::size_t rows = 0;
    for (char c : csv1)
        if (c == '\n') ++rows;
    CHECK(rows == 13);

    CHECK(fs::exists(out1 / "summary.txt"));
}
