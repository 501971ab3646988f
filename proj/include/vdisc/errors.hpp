#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vdisc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Slope ordering or offset constraint violated; the geometry would degenerate.
class ParamDomainError : public Error {
public:
    using Error::Error;
};

/// No sign change found while expanding the root bracket.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Iteration budget exhausted before the requested tolerance was met.
class ToleranceError : public Error {
public:
    using Error::Error;
};

/// Inputs to a comparison check are not sub/supersolutions.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A discount schedule would need a non-positive denominator.
class ScheduleDomainError : public Error {
public:
    using Error::Error;
};

/// Some rows of a sweep failed to solve; the message lists them.
class PartialReportError : public Error {
public:
    PartialReportError(const std::string& what, std::vector<std::size_t> failed_rows)
        : Error(what), failed_rows_(std::move(failed_rows)) {}

    const std::vector<std::size_t>& failed_rows() const noexcept { return failed_rows_; }

private:
    std::vector<std::size_t> failed_rows_;
};

/// Invalid run configuration (unknown key, malformed value, failed invariant).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vdisc
