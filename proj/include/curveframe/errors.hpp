#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curveframe {

// Base of every exception the library throws on its own behalf.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Input geometry unusable: fewer than two distinct points, consecutive
// duplicates, non-finite coordinates.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

// A stencil or frame computation was asked for more samples than provided.
class InsufficientSamples : public Error {
public:
    using Error::Error;
};

// Derivative order outside the supported range 1..4.
class InvalidOrder : public Error {
public:
    using Error::Error;
};

// Expression text rejected by the parser; offset() is the byte position.
class ParseError : public Error {
public:
    ParseError(const std::string& what_arg, std::size_t offset)
        : Error(what_arg + " at byte " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// A scalar function hit a pole or produced a non-finite value; where() is the
// arc-length location of the failure.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what_arg, double s)
        : Error(what_arg + " at s = " + std::to_string(s)), s_(s) {}

    double where() const noexcept { return s_; }

private:
    double s_;
};

// A curvature profile is missing the channels an operation requires.
class IncompleteProfile : public Error {
public:
    using Error::Error;
};

// Every sample of the requested quantity is undefined (e.g. a straight line
// has no Frenet frame anywhere).
class NoValidSamples : public Error {
public:
    using Error::Error;
};

// A supplied reference normal is parallel (within tolerance) to the initial
// tangent and cannot seed a frame.
class DegenerateInitialNormal : public Error {
public:
    using Error::Error;
};

// Parameters leave the mathematical domain of an operation (pole inside the
// requested interval, non-orthonormal initial frame, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A file could not be read or its contents are malformed.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace curveframe
