#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fluted {

// Byte offsets into some input text, end exclusive.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArityConflict : Error {
    using Error::Error;
};

struct SyntaxError : Error {
    SourceSpan span;
    SyntaxError(const std::string& msg, SourceSpan s)
        : Error(msg + " at offset " + std::to_string(s.start)), span(s) {}
};

struct ElementOutOfRange : Error {
    SourceSpan span;
    ElementOutOfRange(const std::string& msg, SourceSpan s)
        : Error(msg + " at offset " + std::to_string(s.start)), span(s) {}
};

struct NotFluted : Error {
    using Error::Error;
};
struct WidthZero : Error {
    using Error::Error;
};
struct WidthTooLow : Error {
    using Error::Error;
};
struct CapExceeded : Error {
    using Error::Error;
};
struct LevelTooLow : Error {
    using Error::Error;
};
struct Inconsistent : Error {
    using Error::Error;
};
struct InternalInconsistency : Error {
    using Error::Error;
};
struct LiftFailure : Error {
    using Error::Error;
};
struct Overflow : Error {
    using Error::Error;
};
struct InvalidTiling : Error {
    using Error::Error;
};
struct UnboundVariable : Error {
    using Error::Error;
};

}  // namespace fluted
