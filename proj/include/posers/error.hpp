#pragma once

#include <stdexcept>
#include <string>

namespace posers {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidCodeError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed input text (design files, FASTQ/FASTA, digests, registries).
class ParseError : public Error {
public:
    using Error::Error;
};

class VersionError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

/// Enumeration request refused because its estimated cost is too high.
class GuardError : public Error {
public:
    using Error::Error;
};

class LockError : public Error {
public:
    using Error::Error;
};

}  // namespace posers
