#pragma once

#include <stdexcept>
#include <string>

namespace dome {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- gateway ----

class MissingBindingError : public Error {
public:
    explicit MissingBindingError(const std::string& name)
        : Error("missing binding for placeholder {" + name + "}"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class UnknownPlaceholderError : public Error {
public:
    explicit UnknownPlaceholderError(const std::string& name)
        : Error("template body contains undeclared placeholder {" + name + "}"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class TransportError : public Error {
public:
    explicit TransportError(const std::string& what) : Error("transport error: " + what) {}
};

class ProviderError : public Error {
public:
    ProviderError(int status, const std::string& body)
        : Error("provider error: status " + std::to_string(status) + ": " + body),
          status_(status),
          body_(body) {}
    int status() const { return status_; }
    const std::string& body() const { return body_; }

private:
    int status_;
    std::string body_;
};

class EmptyCompletionError : public Error {
public:
    EmptyCompletionError() : Error("provider returned an empty completion") {}
};

class FixtureMissError : public Error {
public:
    FixtureMissError(const std::string& template_id, const std::string& digest)
        : Error("no fixture entry for (" + template_id + ", " + digest + ") and no default") {}
};

class DimensionMismatchError : public Error {
public:
    DimensionMismatchError(std::size_t expected, std::size_t got)
        : Error("embedding dimension changed mid-session: expected " + std::to_string(expected) +
                ", got " + std::to_string(got)) {}
};

// ---- memory ----

class ExtractionEmptyError : public Error {
public:
    explicit ExtractionEmptyError(const std::string& detail)
        : Error("no triples could be parsed from the completion: " + detail) {}
};

// ---- outline / pipeline ----

class OutlineParseError : public Error {
public:
    explicit OutlineParseError(const std::string& what) : Error("outline parse error: " + what) {}
};

class PremiseParseError : public Error {
public:
    PremiseParseError(int line, const std::string& what)
        : Error("premise parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// ---- conflict analyzer ----

class VerdictParseError : public Error {
public:
    explicit VerdictParseError(const std::string& what) : Error("verdict parse error: " + what) {}
};

// ---- configuration / input files ----

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

}  // namespace dome
