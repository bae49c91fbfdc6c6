// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_ERRORS_HPP
#define BIBEE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bibee
{

// All library failures derive from Error. The CLI maps each family to a
// stable exit code (see cli.hpp).
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (PQR, mesh, config). Carries the 1-based line when known.
class ParseError : public Error
{
public:
  ParseError(const std::string &what, long line = 0)
    : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line)
  {
  }
  long line() const noexcept { return line_; }

private:
  long line_;
};

class EmptyInputError : public Error
{
public:
  using Error::Error;
};

// Open or non-manifold surfaces, inconsistent orientation.
class TopologyError : public Error
{
public:
  using Error::Error;
};

// Degenerate panels.
class GeometryError : public Error
{
public:
  using Error::Error;
};

// Violated preconditions: charges outside the cavity, bad parameters, etc.
class DomainError : public Error
{
public:
  using Error::Error;
};

class NumericalError : public Error
{
public:
  using Error::Error;
};

class NonConvergenceError : public NumericalError
{
public:
  NonConvergenceError(const std::string &what, double residual)
    : NumericalError(what), residual_(residual)
  {
  }
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

// An internal invariant failed (e.g. a reconstructed real potential came out complex).
class ConsistencyError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

}  // namespace bibee

#endif  // BIBEE_ERRORS_HPP
