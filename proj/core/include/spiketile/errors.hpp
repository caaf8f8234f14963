// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// errors.hpp - error hierarchy; each class maps to a distinct CLI exit code
#ifndef SPIKETILE_ERRORS_HPP
#define SPIKETILE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spiketile
{

// Malformed input text (bad syntax, unknown key, unparsable number).
class ParseError : public std::runtime_error
{
public:
    explicit ParseError(const std::string &what) : std::runtime_error(what) {}
};

// Structurally well-formed input that violates a model invariant.
class ValidationError : public std::runtime_error
{
public:
    explicit ValidationError(const std::string &what) : std::runtime_error(what) {}
};

// No feasible mapping exists for the requested capacity or tile count.
class InfeasibleError : public std::runtime_error
{
public:
    explicit InfeasibleError(const std::string &what) : std::runtime_error(what) {}
};

// A simulation hit its cycle budget with traffic still in flight.
class SimIncompleteError : public std::runtime_error
{
public:
    explicit SimIncompleteError(const std::string &what) : std::runtime_error(what) {}
};

}

#endif
