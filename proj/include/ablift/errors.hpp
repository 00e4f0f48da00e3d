#ifndef ABLIFT_ERRORS_HPP
#define ABLIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ablift {

// Precondition violations: degree-1 factorization, rank-1 pipelines, bad overrides.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A configured cap (basis size, monomial count, series truncation, step) was hit.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Gradient data that is not mixed-partial compatible.
class InexactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operands living in different algebra contexts.
class ContextMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ablift

#endif  // ABLIFT_ERRORS_HPP
