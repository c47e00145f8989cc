#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mugi {

// Base of every error the library throws. The CLI maps subclasses onto
// distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on an argument or configuration value was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Malformed input in a line-oriented file.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// References for a query are not available in cache-only mode.
class CacheMiss : public Error {
public:
    explicit CacheMiss(const std::string& query_id)
        : Error("no cached references for query '" + query_id + "'"), query_id_(query_id) {}

    const std::string& query_id() const noexcept { return query_id_; }

private:
    std::string query_id_;
};

// A remote LLM or embedding service failed after all retries.
class ServiceError : public Error {
public:
    using Error::Error;
};

}  // namespace mugi
