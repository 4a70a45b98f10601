#pragma once

#include <stdexcept>
#include <string>

namespace screp {

// Error taxonomy mirrors the CLI exit codes:
//   ParseError / ValidationError -> 1, IoError -> 2, NumericError -> 3.

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (trace files, mapping files, embedding files).
struct ParseError : Error {
    using Error::Error;
};

// A contract violation: bad counts, unknown tokens, inconsistent shapes.
struct ValidationError : Error {
    using Error::Error;
};

// Filesystem trouble: missing directories, unreadable or unwritable files.
struct IoError : Error {
    using Error::Error;
};

// Non-finite values where finite ones are required.
struct NumericError : Error {
    using Error::Error;
};

} // namespace screp
