#pragma once

#include <stdexcept>
#include <string>

namespace imcpack {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input document: wrong type, missing field, unknown key value.
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace imcpack
