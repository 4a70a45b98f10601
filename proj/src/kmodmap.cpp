#include "screp/kmodmap.hpp"

#include <fstream>
#include <sstream>

#include "screp/errors.hpp"

namespace screp::kmod {

const std::array<std::string_view, kModuleCount>& module_names() {
    static const std::array<std::string_view, kModuleCount> names = {
        "architecture", "file_systems", "ipc",        "kernel",
        "memory_management", "networking", "security",
    };
    return names;
}

std::string_view module_name(KernelModule m) {
    return module_names()[static_cast<int>(m)];
}

bool module_from_name(std::string_view token, KernelModule& out) {
    const auto& names = module_names();
    for (int i = 0; i < kModuleCount; ++i) {
        if (names[i] == token) {
            out = static_cast<KernelModule>(i);
            return true;
        }
    }
    return false;
}

SyscallTable::SyscallTable(std::map<int, SyscallEntry> entries)
    : entries_(std::move(entries)) {}

const SyscallEntry& SyscallTable::entry(int id) const {
    auto it = entries_.find(id);
    if (it == entries_.end())
        throw ValidationError("unknown syscall id " + std::to_string(id) +
                              " (corpus/table mismatch)");
    return it->second;
}

KernelModule SyscallTable::map_call(int id) const { return entry(id).module; }

std::vector<KernelModule> SyscallTable::project_trace(const std::vector<int>& calls) const {
    std::vector<KernelModule> out;
    out.reserve(calls.size());
    for (std::size_t i = 0; i < calls.size(); ++i) {
        auto it = entries_.find(calls[i]);
        if (it == entries_.end())
            throw ValidationError("unknown syscall id " + std::to_string(calls[i]) +
                                  " at index " + std::to_string(i));
        out.push_back(it->second.module);
    }
    return out;
}

std::vector<int> SyscallTable::ids() const {
    std::vector<int> out;
    out.reserve(entries_.size());
    for (const auto& [id, _] : entries_) out.push_back(id);
    return out;
}

SyscallTable load_table(std::string_view text, CountPolicy policy) {
    std::map<int, SyscallEntry> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        long id;
        std::string name, module_token;
        if (!(ls >> id))
            throw ParseError("mapping line " + std::to_string(lineno) +
                             ": expected \"<id> <name> <module>\"");
        if (!(ls >> name >> module_token))
            throw ParseError("mapping line " + std::to_string(lineno) +
                             ": expected \"<id> <name> <module>\"");
        std::string trailing;
        if (ls >> trailing)
            throw ParseError("mapping line " + std::to_string(lineno) +
                             ": unexpected trailing token '" + trailing + "'");
        if (id < 0)
            throw ValidationError("mapping line " + std::to_string(lineno) +
                                  ": negative syscall id");
        KernelModule mod;
        if (!module_from_name(module_token, mod))
            throw ValidationError("mapping line " + std::to_string(lineno) +
                                  ": unknown module token '" + module_token + "'");
        auto [it, inserted] = entries.emplace(static_cast<int>(id),
                                              SyscallEntry{name, mod});
        if (!inserted)
            throw ValidationError("mapping line " + std::to_string(lineno) +
                                  ": duplicate syscall id " + std::to_string(id));
    }
    if (policy == CountPolicy::require && entries.size() != kExpectedTableSize)
        throw ValidationError("mapping table has " + std::to_string(entries.size()) +
                              " entries, expected " + std::to_string(kExpectedTableSize));
    return SyscallTable(std::move(entries));
}

SyscallTable load_table_file(const std::string& path, CountPolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open mapping file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_table(buf.str(), policy);
}

} // namespace screp::kmod
