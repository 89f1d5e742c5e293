#ifndef INFERXPATH_ERRORS_HPP
#define INFERXPATH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ixp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- document model ---------------------------------------------------------

struct CharsetError : Error {
    using Error::Error;
};

// Malformed sidecar / manifest / registry content.
struct FormatError : Error {
    using Error::Error;
};

// Sidecar entry addresses a node that does not exist or whose tag checksum
// disagrees with the document.
struct ResolveError : Error {
    using Error::Error;
};

struct CrossPageError : Error {
    using Error::Error;
};

// --- xpath language ----------------------------------------------------------

struct SyntaxError : Error {
    std::size_t offset = 0;
    std::vector<std::string> expected;

    SyntaxError(const std::string& msg, std::size_t off,
                std::vector<std::string> exp = {})
        : Error(msg), offset(off), expected(std::move(exp)) {}
};

struct ArityError : SyntaxError {
    using SyntaxError::SyntaxError;
};

struct UnknownAxisError : SyntaxError {
    using SyntaxError::SyntaxError;
};

struct UnknownFunctionError : SyntaxError {
    using SyntaxError::SyntaxError;
};

// --- evaluation --------------------------------------------------------------

struct EvalError : Error {
    using Error::Error;
};

struct UnknownVariableError : EvalError {
    using EvalError::EvalError;
};

struct TypeError : EvalError {
    using EvalError::EvalError;
};

// Raised when a link traversal would exceed the evaluation fetch budget.
struct FetchBudgetError : EvalError {
    using EvalError::EvalError;
};

// --- fetcher ------------------------------------------------------------------

struct FetchError : Error {
    using Error::Error;
};

struct HostDeniedError : FetchError {
    using FetchError::FetchError;
};

struct NetworkError : FetchError {
    using FetchError::FetchError;
};

// --- semantic sets -------------------------------------------------------------

struct PatternError : Error {
    using Error::Error;
};

struct ScopeError : Error {
    using Error::Error;
};

// --- inference ------------------------------------------------------------------

struct EmptySourceError : Error {
    using Error::Error;
};

struct EmptyTargetError : Error {
    using Error::Error;
};

struct NoPathFoundError : Error {
    std::size_t column = 0;

    NoPathFoundError(const std::string& msg, std::size_t col)
        : Error(msg), column(col) {}
};

} // namespace ixp

#endif
