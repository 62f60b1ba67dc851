#ifndef INTWIST_ERRORS_HPP
#define INTWIST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace intwist {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct RegistryMismatch : Error {
    explicit RegistryMismatch(const std::string& msg) : Error(msg) {}
};

struct ZeroDenominator : Error {
    explicit ZeroDenominator(const std::string& msg) : Error(msg) {}
};

// A linear system that should be regular for generic exponents turned out
// singular (non-generic exponents, see the pole-reduction lemmata).
struct SingularSystem : Error {
    explicit SingularSystem(const std::string& msg) : Error(msg) {}
};

// gcd(P, Q_f) != 1: the function is singular on the critical variety.
struct NotCoprime : Error {
    explicit NotCoprime(const std::string& msg) : Error(msg) {}
};

struct NotZeroDimensional : Error {
    explicit NotZeroDimensional(const std::string& msg) : Error(msg) {}
};

// A connection matrix entry has a higher pole; transforming it away is out
// of scope, so we reject the basis choice.
struct HigherPoleConnection : Error {
    explicit HigherPoleConnection(const std::string& msg) : Error(msg) {}
};

// deg of the determinant numerator does not match the cohomology dimension.
struct DegenerateFibration : Error {
    DegenerateFibration(const std::string& msg, std::string hint = {})
        : Error(msg), rotation_hint(std::move(hint)) {}
    std::string rotation_hint;  // e.g. "rotate z1 z2 1 2", empty if unknown
};

struct GenericityError : Error {
    explicit GenericityError(const std::string& msg) : Error(msg) {}
};

struct ReductionLimitExceeded : Error {
    explicit ReductionLimitExceeded(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    ParseError(const std::string& msg, int line, int column)
        : Error(msg + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line(line), column(column) {}
    int line;
    int column;
};

struct UndeclaredName : Error {
    explicit UndeclaredName(const std::string& msg) : Error(msg) {}
};

// Numeric oracle: roots too close to separate reliably at this sample.
struct RootClustering : Error {
    explicit RootClustering(const std::string& msg) : Error(msg) {}
};

struct ToleranceExceeded : Error {
    explicit ToleranceExceeded(const std::string& msg) : Error(msg) {}
};

struct SingularCMatrix : Error {
    explicit SingularCMatrix(const std::string& msg) : Error(msg) {}
};

}  // namespace intwist

#endif
