#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace predsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A parameter is outside its admissible range.
struct DomainError : Error {
    using Error::Error;
};

// Requested Beta moments violate variance < mean*(1-mean).
struct InfeasibleVariance : DomainError {
    using DomainError::DomainError;
};

// An operation received an empty collection it cannot work with.
struct EmptyInput : Error {
    using Error::Error;
};

// A required key (vote set, verdict, truth row, ...) is absent.
struct MissingKey : Error {
    using Error::Error;
};

// F-score undefined: no positive ground truth and no positive predictions.
struct NoPositives : Error {
    using Error::Error;
};

// Malformed input file. line is 1-based; 0 means "not tied to a line".
struct ParseError : Error {
    std::size_t line;
    ParseError(std::size_t line_no, const std::string& reason)
        : Error("line " + std::to_string(line_no) + ": " + reason), line(line_no) {}
    explicit ParseError(const std::string& reason) : Error(reason), line(0) {}
};

struct UnknownCondition : ParseError {
    using ParseError::ParseError;
};

struct NonBinaryAnswer : ParseError {
    using ParseError::ParseError;
};

// Could not open or write a file.
struct IoError : Error {
    using Error::Error;
};

}  // namespace predsim
