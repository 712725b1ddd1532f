#ifndef PTSPEC_ERRORS_HPP
#define PTSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ptspec {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Series or iteration failed to converge within its cap.
class NonConvergenceError : public Error {
public:
    explicit NonConvergenceError(const std::string& msg) : Error(msg) {}
};

// Adaptive quadrature could not reach the requested tolerance.
class ToleranceError : public Error {
public:
    ToleranceError(const std::string& msg, double achieved)
        : Error(msg), achieved_error(achieved) {}
    double achieved_error;
};

// Root scan found no sign change.
class NoRootError : public Error {
public:
    explicit NoRootError(const std::string& msg) : Error(msg) {}
};

// The quantity expected to be (purely) real or imaginary is not.
class BranchInconsistencyError : public Error {
public:
    explicit BranchInconsistencyError(const std::string& msg) : Error(msg) {}
};

// Eq.-style bracket came out non-positive; usually the wrong shift root.
class NegativeBracketError : public Error {
public:
    explicit NegativeBracketError(const std::string& msg) : Error(msg) {}
};

} // namespace ptspec

#endif
