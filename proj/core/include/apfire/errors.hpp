#pragma once

#include <stdexcept>
#include <string>

namespace apfire {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Stimulus description rejected (bad JSON, invalid breakpoints, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

/// The firing map is provably not defined on all of R for this input.
class UndefinedStimulusError : public Error {
public:
    using Error::Error;
};

/// No threshold crossing was found within the configured search horizon.
class NoFiringWithinHorizon : public Error {
public:
    using Error::Error;
};

/// Brute-force reference search ran past its span without a crossing.
class NoCrossingWithinSpan : public Error {
public:
    using Error::Error;
};

/// Operation requires a stimulus representation it does not support.
class UnsupportedStimulusError : public Error {
public:
    using Error::Error;
};

/// A positive lower bound on the stimulus could not be certified.
class CannotCertifyPositivity : public Error {
public:
    using Error::Error;
};

}  // namespace apfire
