#pragma once

#include <stdexcept>
#include <string>

namespace qtomo {

/// File could not be parsed or violates its declared header.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problem exceeds a hard size guard (solver capacity, variable budget).
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// QUBO whose variables have no ray coverage: nothing can be optimized.
class DegenerateProblemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Remote solver could not be reached after all retry attempts.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Remote solver response violates the wire contract.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Remote solver reported an energy that does not match local re-evaluation.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qtomo
