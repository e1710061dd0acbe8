#pragma once

#include <stdexcept>
#include <string>

namespace relkit {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data or configuration: malformed records, out-of-scale grades,
// unbalanced pools, refused splits. CLI maps these to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Filesystem problems. Exit code 2.
class IoError : public Error {
public:
    using Error::Error;
};

// Backend unreachable / HTTP failure / timeout. Exit code 2.
class TransportError : public Error {
public:
    using Error::Error;
};

// Batch judging stopped because the failure rate crossed the configured
// threshold. Partial results are already persisted in the journal.
class AbortError : public Error {
public:
    using Error::Error;
};

}  // namespace relkit
