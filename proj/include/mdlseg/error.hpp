#pragma once

#include <stdexcept>
#include <string>

namespace mdlseg {

/// Raised for unreadable files and malformed input documents.
/// The command-line front end maps it to exit status 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when well-formed input violates a contract (bad indices,
/// mismatched sizes, instance too large). Maps to exit status 3.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace mdlseg
