#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace screp::kmod {

// The seven source subsystems of a 32-bit Linux 2.6.35-era kernel. The
// enumerator order is canonical and defines one-hot positions downstream.
enum class KernelModule : int {
    architecture = 0,
    file_systems = 1,
    ipc = 2,
    kernel = 3,
    memory_management = 4,
    networking = 5,
    security = 6,
};

inline constexpr int kModuleCount = 7;

// Expected size of the full i386 syscall table (numbers 0..340).
inline constexpr std::size_t kExpectedTableSize = 341;

const std::array<std::string_view, kModuleCount>& module_names();
std::string_view module_name(KernelModule m);

// Returns true and sets `out` if `token` names a module.
bool module_from_name(std::string_view token, KernelModule& out);

struct SyscallEntry {
    std::string name;
    KernelModule module;
};

// Immutable after load; safe for concurrent lookup.
class SyscallTable {
public:
    explicit SyscallTable(std::map<int, SyscallEntry> entries);

    std::size_t size() const { return entries_.size(); }
    bool complete() const { return entries_.size() == kExpectedTableSize; }
    bool contains(int id) const { return entries_.count(id) != 0; }

    const SyscallEntry& entry(int id) const;
    KernelModule map_call(int id) const;

    // Elementwise map_call; throws with the offending index on a miss.
    std::vector<KernelModule> project_trace(const std::vector<int>& calls) const;

    // Ascending syscall ids, the downstream one-hot vocabulary.
    std::vector<int> ids() const;

    const std::map<int, SyscallEntry>& entries() const { return entries_; }

private:
    std::map<int, SyscallEntry> entries_;
};

enum class CountPolicy {
    warn,    // accept tables of any size; caller may inspect complete()
    require, // throw unless exactly kExpectedTableSize entries
};

// Parses mapping text: one "<id> <name> <module-token>" entry per line,
// '#' starts a comment. Throws ParseError / ValidationError on bad input.
SyscallTable load_table(std::string_view text, CountPolicy policy = CountPolicy::warn);

SyscallTable load_table_file(const std::string& path, CountPolicy policy = CountPolicy::warn);

} // namespace screp::kmod
