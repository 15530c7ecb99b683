// Error types shared across the library. Parse errors carry a source
// position; validation errors cover semantic problems in otherwise
// well-formed input; numerical errors signal solver breakdown.
#pragma once

#include <stdexcept>
#include <string>

namespace gridres {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, int line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          source_(std::move(source)),
          line_(line) {}

    const std::string& source() const { return source_; }
    int line() const { return line_; }

private:
    std::string source_;
    int line_;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gridres
