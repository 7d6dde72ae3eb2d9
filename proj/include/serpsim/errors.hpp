#pragma once

#include <stdexcept>
#include <string>

namespace serpsim {

// Base for every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A domain type was constructed with a violated invariant.
class InvariantError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data (bad record, duplicate key, unequal lists).
class DataError : public Error {
public:
    using Error::Error;
};

class UrlParseError : public Error {
public:
    explicit UrlParseError(std::string text)
        : Error("unparsable URL: '" + text + "'"), text_(std::move(text)) {}

    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

class RedirectError : public Error {
public:
    using Error::Error;
};

}  // namespace serpsim
