#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "screp/kmodmap.hpp"

namespace screp::corpus {

enum class Partition { training, attack, validation };
enum class Label { benign, malicious };

std::string_view partition_name(Partition p);
std::string_view label_name(Label l);

// One process execution: the ordered syscall numbers of one trace file.
struct Trace {
    std::string id;                           // source file path, unique
    Partition partition = Partition::training;
    std::optional<std::string> attack_family; // attack subdirectory name
    std::vector<int> calls;
    Label label = Label::benign;
};

// Seed-determined half/half assignment of the attack traces.
struct SplitPlan {
    std::uint64_t seed = 0;
    std::set<std::string> attack_to_train;
    std::set<std::string> attack_to_validation;
};

struct LabeledWindow {
    std::string trace_id;
    std::size_t start = 0;
    std::vector<int> calls; // exactly window_length entries
    Label label = Label::benign;
};

struct WindowSet {
    std::vector<LabeledWindow> windows;
    std::size_t benign_count = 0;
    std::size_t malicious_count = 0;
    std::size_t skipped_short_traces = 0;
};

inline constexpr std::size_t kDefaultWindowLength = 20;

// Tokenizes whitespace-separated decimal syscall numbers; partition and
// label are inferred from the path (Training_Data_Master, Attack_Data_Master/
// <family>/, Validation_Data_Master). Throws ParseError naming the byte
// offset of the first bad token, or on an empty trace.
Trace parse_trace_file(std::string_view bytes, const std::string& path);

// Recursive walk of an ADFA-LD-layout directory; paths are sorted
// lexicographically so enumeration order is platform-independent.
std::vector<Trace> load_dataset(const std::string& root);

// Throws ValidationError if any trace contains an id absent from the table.
void check_coverage(const std::vector<Trace>& traces, const kmod::SyscallTable& table);

// Uniformly random half/half partition of the attack trace ids, fully
// determined by seed. With an odd count the larger half goes to training.
SplitPlan plan_split(const std::set<std::string>& attack_trace_ids, std::uint64_t seed);

struct Splits {
    std::vector<Trace> train;
    std::vector<Trace> validation;
};

// train = training partition + attack_to_train; validation = validation
// partition + attack_to_validation. The plan must cover exactly the attack
// traces present.
Splits assemble_splits(const std::vector<Trace>& traces, const SplitPlan& plan);

WindowSet make_windows(const std::vector<Trace>& traces,
                       std::size_t window_length = kDefaultWindowLength,
                       std::size_t stride = 1);

// Duplicates minority windows (sampled uniformly with replacement) until the
// class counts are equal. Originals are all retained; requires both classes.
WindowSet oversample(const WindowSet& in, std::uint64_t seed);

// One window per line: comma-separated ids, a tab, then the label token.
void write_window_set(std::ostream& out, const WindowSet& ws);
WindowSet read_window_set(std::istream& in, std::size_t window_length = kDefaultWindowLength);

struct PartitionStats {
    std::size_t traces = 0;
    std::size_t calls = 0;
};

PartitionStats partition_stats(const std::vector<Trace>& traces, Partition p);

} // namespace screp::corpus
