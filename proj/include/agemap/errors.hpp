#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agemap {

/// Base class for all library errors. Data-level problems derive from this;
/// anything else escaping the library is a plain std::exception (internal).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A record in a field-tagged export lacks its end-of-record tag.
class MalformedRecord : public Error {
public:
    MalformedRecord(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Input bytes are not valid UTF-8.
class EncodingError : public Error {
public:
    using Error::Error;
};

/// A record carries no parseable publication year. Reported and skipped by
/// the pipeline; only fatal when to_document is called directly.
class MissingYear : public Error {
public:
    using Error::Error;
};

class DuplicateDocId : public Error {
public:
    using Error::Error;
};

class NoYearsAvailable : public Error {
public:
    using Error::Error;
};

/// Every off-diagonal similarity is zero; no distance scale exists.
class DegenerateSimilarity : public Error {
public:
    using Error::Error;
};

/// One of the correlated matrices is constant off-diagonal.
class ZeroVariance : public Error {
public:
    using Error::Error;
};

/// Two clusterings/trees do not cover the same document list.
class MismatchedDocs : public Error {
public:
    using Error::Error;
};

/// Curve too short for knee detection (needs >= 3 points).
class TooShort : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace agemap
