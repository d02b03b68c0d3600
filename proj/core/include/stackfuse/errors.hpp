#pragma once

#include <stdexcept>
#include <string>

namespace stackfuse {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape or size mismatch between networks, vectors or datasets.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An operation was given an empty sample set.
class EmptySetError : public Error {
public:
    using Error::Error;
};

/// Invalid argument values (fractions, labels, config fields).
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// Problems with input data: parse failures, bad file formats,
/// unknown subjects, not enough samples to split.
class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    using DataError::DataError;
};

class FormatError : public DataError {
public:
    using DataError::DataError;
};

class MissingSubjectError : public DataError {
public:
    using DataError::DataError;
};

class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

/// Filesystem-level failures (open/read/write).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace stackfuse
