#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcids {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ingest
class SchemaError : public Error {
public:
    using Error::Error;
};

class RowError : public Error {
public:
    RowError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    /// 1-based line number in the source, header included.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class TruncationError : public Error {
public:
    using Error::Error;
};

class UnknownKindError : public Error {
public:
    using Error::Error;
};

class TlvError : public Error {
public:
    using Error::Error;
};

class EncodeError : public Error {
public:
    using Error::Error;
};

// detection
class OrderError : public Error {
public:
    OrderError(std::size_t index, const std::string& what)
        : Error("record " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// generation
class ProfileError : public Error {
public:
    using Error::Error;
};

class InjectError : public Error {
public:
    using Error::Error;
};

// evaluation / configuration
class EvalError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace mcids
