#ifndef EDS_ERRORS_HPP
#define EDS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eds {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised by the parsers; carries the byte offset of the offending token.
struct SyntaxError : Error {
    std::size_t position;
    SyntaxError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// Evaluation outside a function's domain (log of a non-positive value,
/// division by zero, ...). `culprit` is the printed offending subexpression.
struct DomainError : Error {
    std::string culprit;
    DomainError(const std::string& msg, std::string offending)
        : Error(msg + ": " + offending), culprit(std::move(offending)) {}
};

/// Operands live on different charts.
struct ChartError : Error {
    using Error::Error;
};

/// A matrix or coframe turned out singular / dependent at the generic point.
struct SingularError : Error {
    using Error::Error;
};

/// The probabilistic zero test could not find enough admissible sample
/// points; the caller must treat the expression as nonzero and may retry.
struct IndeterminateError : Error {
    using Error::Error;
};

/// The symbolic and numerical paths of an operation disagree.  Carries both
/// answers so the caller can inspect them.
struct DisagreementError : Error {
    int symbolic_answer;
    int numeric_answer;
    DisagreementError(const std::string& msg, int sym, int num)
        : Error(msg + " (symbolic " + std::to_string(sym) + ", numeric " + std::to_string(num) + ")"),
          symbolic_answer(sym), numeric_answer(num) {}
};

} // namespace eds

#endif
