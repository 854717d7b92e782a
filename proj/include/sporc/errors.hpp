#pragma once

#include <stdexcept>
#include <string>

namespace sporc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file. Carries the 1-based line number when known.
struct ParseError : Error {
    ParseError(const std::string& msg, long line = -1)
        : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line(line) {}
    long line;
};

/// Inconsistent dimensions between samples or against declared shapes.
struct DimMismatch : Error {
    using Error::Error;
};

/// A split fraction produced an empty part.
struct EmptyPart : Error {
    using Error::Error;
};

/// Bad or missing configuration value. Maps to CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

/// Truncation removed every sample; downstream stages cannot run.
struct AllTruncated : Error {
    using Error::Error;
};

/// Training diverged (non-finite loss or parameters).
struct Divergence : Error {
    using Error::Error;
};

/// A solve that the caller requires to be Optimal was not.
struct InfeasibleError : Error {
    using Error::Error;
};

/// Any pipeline-stage failure surfaced to the CLI. Maps to exit code 1.
struct PipelineError : Error {
    using Error::Error;
};

}  // namespace sporc
