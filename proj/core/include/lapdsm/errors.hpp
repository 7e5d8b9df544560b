#pragma once

#include <stdexcept>
#include <string>

namespace lapdsm {

// Bad input: malformed configuration, mismatched sizes, out-of-range
// arguments. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Special function called outside its supported domain.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A computation that was well-posed on input but failed numerically
// (singular system, divergence). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lapdsm
