#pragma once

#include <stdexcept>
#include <string>

namespace looplab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A search or closure hit its configured budget before reaching a verdict.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// A constructed witness failed its independent check.
class VerificationFailed : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace looplab
