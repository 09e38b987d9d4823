#pragma once

#include <stdexcept>
#include <string>

namespace bma {

// Mismatched vector lengths or matrix shapes.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Caller violated an operation's precondition.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed instance or witness file.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A desk-scale guard or an explicit node/time budget was exceeded.
// Never a wrong answer: callers treat this as "undecided".
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bma
