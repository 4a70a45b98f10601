#include "screp/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "screp/errors.hpp"
#include "screp/rng.hpp"

namespace fs = std::filesystem;

namespace screp::corpus {

std::string_view partition_name(Partition p) {
    switch (p) {
        case Partition::training: return "training";
        case Partition::attack: return "attack";
        case Partition::validation: return "validation";
    }
    return "?";
}

std::string_view label_name(Label l) {
    return l == Label::benign ? "benign" : "malicious";
}

namespace {

// Returns {partition, family} inferred from path components.
std::pair<Partition, std::optional<std::string>> classify_path(const std::string& path) {
    fs::path p(path);
    std::vector<std::string> parts;
    for (const auto& c : p) parts.push_back(c.string());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] == "Training_Data_Master")
            return {Partition::training, std::nullopt};
        if (parts[i] == "Validation_Data_Master")
            return {Partition::validation, std::nullopt};
        if (parts[i] == "Attack_Data_Master") {
            std::optional<std::string> family;
            if (i + 2 < parts.size()) family = parts[i + 1]; // .../<family>/<file>
            return {Partition::attack, family};
        }
    }
    throw ValidationError("cannot infer dataset partition from path: " + path);
}

} // namespace

Trace parse_trace_file(std::string_view bytes, const std::string& path) {
    Trace t;
    t.id = path;
    auto [partition, family] = classify_path(path);
    t.partition = partition;
    t.attack_family = family;
    t.label = partition == Partition::attack ? Label::malicious : Label::benign;

    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(bytes[i]))) ++i;
        if (i >= n) break;
        std::size_t start = i;
        long value = 0;
        bool any_digit = false;
        while (i < n && !std::isspace(static_cast<unsigned char>(bytes[i]))) {
            char c = bytes[i];
            if (c < '0' || c > '9') {
                throw ParseError(path + ": non-integer token at byte offset " +
                                 std::to_string(start));
            }
            value = value * 10 + (c - '0');
            if (value > 1'000'000'000)
                throw ParseError(path + ": token out of range at byte offset " +
                                 std::to_string(start));
            any_digit = true;
            ++i;
        }
        if (any_digit) t.calls.push_back(static_cast<int>(value));
    }
    if (t.calls.empty()) throw ParseError(path + ": empty trace");
    return t;
}

std::vector<Trace> load_dataset(const std::string& root) {
    if (!fs::exists(root) || !fs::is_directory(root))
        throw IoError("dataset root is not a directory: " + root);

    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".txt") continue;
        files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());

    std::vector<Trace> traces;
    traces.reserve(files.size());
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw IoError("cannot open trace file: " + f);
        std::ostringstream buf;
        buf << in.rdbuf();
        traces.push_back(parse_trace_file(buf.str(), f));
    }
    if (traces.empty()) throw ValidationError("no trace files under " + root);
    return traces;
}

void check_coverage(const std::vector<Trace>& traces, const kmod::SyscallTable& table) {
    for (const auto& t : traces)
        for (std::size_t i = 0; i < t.calls.size(); ++i)
            if (!table.contains(t.calls[i]))
                throw ValidationError(t.id + ": syscall id " +
                                      std::to_string(t.calls[i]) + " at index " +
                                      std::to_string(i) + " not in mapping table");
}

SplitPlan plan_split(const std::set<std::string>& attack_trace_ids, std::uint64_t seed) {
    if (attack_trace_ids.empty())
        throw ValidationError("plan_split: no attack traces to split");
    std::vector<std::string> ids(attack_trace_ids.begin(), attack_trace_ids.end());
    Rng rng(seed);
    shuffle(ids, rng);
    // larger half to training when odd
    std::size_t to_train = (ids.size() + 1) / 2;
    SplitPlan plan;
    plan.seed = seed;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i < to_train)
            plan.attack_to_train.insert(ids[i]);
        else
            plan.attack_to_validation.insert(ids[i]);
    }
    return plan;
}

Splits assemble_splits(const std::vector<Trace>& traces, const SplitPlan& plan) {
    std::set<std::string> attack_present;
    for (const auto& t : traces)
        if (t.partition == Partition::attack) attack_present.insert(t.id);

    for (const auto& id : plan.attack_to_train)
        if (!attack_present.count(id))
            throw ValidationError("split plan references unknown trace id: " + id);
    for (const auto& id : plan.attack_to_validation)
        if (!attack_present.count(id))
            throw ValidationError("split plan references unknown trace id: " + id);
    std::size_t planned = plan.attack_to_train.size() + plan.attack_to_validation.size();
    if (planned != attack_present.size())
        throw ValidationError("split plan covers " + std::to_string(planned) +
                              " attack traces, corpus has " +
                              std::to_string(attack_present.size()));

    Splits out;
    for (const auto& t : traces) {
        switch (t.partition) {
            case Partition::training: out.train.push_back(t); break;
            case Partition::validation: out.validation.push_back(t); break;
            case Partition::attack:
                if (plan.attack_to_train.count(t.id))
                    out.train.push_back(t);
                else
                    out.validation.push_back(t);
                break;
        }
    }
    return out;
}

WindowSet make_windows(const std::vector<Trace>& traces, std::size_t window_length,
                       std::size_t stride) {
    if (window_length < 1 || stride < 1)
        throw ValidationError("make_windows: window_length and stride must be >= 1");
    WindowSet ws;
    for (const auto& t : traces) {
        if (t.calls.size() < window_length) {
            ++ws.skipped_short_traces;
            continue;
        }
        for (std::size_t start = 0; start + window_length <= t.calls.size();
             start += stride) {
            LabeledWindow w;
            w.trace_id = t.id;
            w.start = start;
            w.calls.assign(t.calls.begin() + start,
                           t.calls.begin() + start + window_length);
            w.label = t.label;
            if (w.label == Label::benign)
                ++ws.benign_count;
            else
                ++ws.malicious_count;
            ws.windows.push_back(std::move(w));
        }
    }
    return ws;
}

WindowSet oversample(const WindowSet& in, std::uint64_t seed) {
    if (in.benign_count == 0 || in.malicious_count == 0)
        throw ValidationError("oversample: both classes must be present");
    if (in.benign_count == in.malicious_count) return in;

    Label minority = in.benign_count < in.malicious_count ? Label::benign
                                                          : Label::malicious;
    std::vector<std::size_t> minority_idx;
    for (std::size_t i = 0; i < in.windows.size(); ++i)
        if (in.windows[i].label == minority) minority_idx.push_back(i);

    std::size_t need = in.benign_count > in.malicious_count
                           ? in.benign_count - in.malicious_count
                           : in.malicious_count - in.benign_count;

    WindowSet out = in;
    Rng rng(seed);
    for (std::size_t k = 0; k < need; ++k)
        out.windows.push_back(in.windows[minority_idx[rng.index(minority_idx.size())]]);
    if (minority == Label::benign)
        out.benign_count += need;
    else
        out.malicious_count += need;
    return out;
}

void write_window_set(std::ostream& out, const WindowSet& ws) {
    for (const auto& w : ws.windows) {
        for (std::size_t i = 0; i < w.calls.size(); ++i) {
            if (i) out << ',';
            out << w.calls[i];
        }
        out << '\t' << label_name(w.label) << '\n';
    }
}

WindowSet read_window_set(std::istream& in, std::size_t window_length) {
    WindowSet ws;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("window line " + std::to_string(lineno) + ": missing tab");
        LabeledWindow w;
        std::istringstream ids(line.substr(0, tab));
        std::string tok;
        while (std::getline(ids, tok, ','))
            w.calls.push_back(std::stoi(tok));
        if (w.calls.size() != window_length)
            throw ValidationError("window line " + std::to_string(lineno) + ": got " +
                                  std::to_string(w.calls.size()) + " calls, expected " +
                                  std::to_string(window_length));
        std::string label_tok = line.substr(tab + 1);
        if (!label_tok.empty() && label_tok.back() == '\r') label_tok.pop_back();
        if (label_tok == "benign")
            w.label = Label::benign;
        else if (label_tok == "malicious")
            w.label = Label::malicious;
        else
            throw ParseError("window line " + std::to_string(lineno) +
                             ": unknown label '" + label_tok + "'");
        if (w.label == Label::benign)
            ++ws.benign_count;
        else
            ++ws.malicious_count;
        ws.windows.push_back(std::move(w));
    }
    return ws;
}

PartitionStats partition_stats(const std::vector<Trace>& traces, Partition p) {
    PartitionStats s;
    for (const auto& t : traces) {
        if (t.partition != p) continue;
        ++s.traces;
        s.calls += t.calls.size();
    }
    return s;
}

} // namespace screp::corpus
