#ifndef ESCPROB_ERRORS_HPP
#define ESCPROB_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace escprob {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when mp_add is handed operands of opposite sign. Callers are
// expected to restructure the computation, never to catch and subtract.
class SignDisciplineError : public Error {
public:
    explicit SignDisciplineError(const std::string& what) : Error(what) {}
};

class DivisionByZeroError : public Error {
public:
    explicit DivisionByZeroError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

class SingularError : public Error {
public:
    explicit SingularError(const std::string& what) : Error(what) {}
};

class ZeroOutDegreeError : public Error {
public:
    explicit ZeroOutDegreeError(const std::string& what) : Error(what) {}
};

class InvalidQueryError : public Error {
public:
    explicit InvalidQueryError(const std::string& what) : Error(what) {}
};

class UnsupportedForBoundError : public Error {
public:
    explicit UnsupportedForBoundError(const std::string& what) : Error(what) {}
};

// Number of mixed-sign additions that reached mp_add since process start
// (each one also throws SignDisciplineError). The solver test suites run
// with this as a tripwire: it must stay at zero.
std::uint64_t sign_violation_count();

namespace detail {
void record_sign_violation();
}

} // namespace escprob

#endif
