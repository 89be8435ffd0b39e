#pragma once

#include <stdexcept>
#include <string>

namespace kbgain {

// Base class for all domain errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotHurwitz : public Error {
public:
    using Error::Error;
};

class SingularB : public Error {
public:
    using Error::Error;
};

class InvalidHorizon : public Error {
public:
    using Error::Error;
};

class InvalidSchedule : public Error {
public:
    using Error::Error;
};

class ResonantSpectrum : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class AsymmetricInput : public Error {
public:
    using Error::Error;
};

class IndefiniteInput : public Error {
public:
    using Error::Error;
};

class NegativeCovariance : public Error {
public:
    using Error::Error;
};

class ScheduleGap : public Error {
public:
    using Error::Error;
};

class RootBracketFailure : public Error {
public:
    using Error::Error;
};

class NoSubcaseMatch : public Error {
public:
    using Error::Error;
};

class InfeasibleDetected : public Error {
public:
    using Error::Error;
};

class IndefiniteS : public Error {
public:
    using Error::Error;
};

class GainBoundViolated : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace kbgain
