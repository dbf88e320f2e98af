#pragma once

#include <stdexcept>
#include <string>

namespace synkit {

// Base class for all toolkit errors. Specific subclasses let callers and
// tests distinguish failure kinds without string matching.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed file structure (wrong header, ragged rows, unsupported quoting).
class FormatError : public Error {
public:
    using Error::Error;
};

// A cell or token could not be parsed; carries a position where available.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, long offset = -1)
        : Error(offset >= 0 ? msg + " (offset " + std::to_string(offset) + ")" : msg),
          offset_(offset) {}
    long offset() const { return offset_; }

private:
    long offset_;
};

class DuplicateKeyError : public Error {
public:
    using Error::Error;
};

class MissingKeyError : public Error {
public:
    using Error::Error;
};

// Dimension or length mismatch between containers that must align.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A record violates a domain invariant (e.g. a drug paired with itself).
class InvalidInstanceError : public Error {
public:
    using Error::Error;
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
public:
    using Error::Error;
};

// Training produced a non-finite loss; names the epoch it happened in.
class DivergenceError : public NumericError {
public:
    DivergenceError(const std::string& msg, int epoch)
        : NumericError(msg + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

// A constructed object violates one of its documented invariants.
class InvariantError : public Error {
public:
    using Error::Error;
};

// Statistic undefined on the given sample (constant input, all-zero diffs).
class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

// Run configuration failed validation; message carries field and line info.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace synkit
