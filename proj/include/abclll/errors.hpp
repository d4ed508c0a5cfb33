#pragma once

#include <stdexcept>
#include <string>

namespace abclll {

class DependentRows : public std::runtime_error {
 public:
  DependentRows() : std::runtime_error("lattice rows are linearly dependent") {}
};

class ZeroDenominator : public std::invalid_argument {
 public:
  ZeroDenominator() : std::invalid_argument("continued fraction with zero denominator") {}
};

class DegenerateRelation : public std::invalid_argument {
 public:
  DegenerateRelation() : std::invalid_argument("relation has a zero coefficient") {}
};

class RadicalIsOne : public std::domain_error {
 public:
  RadicalIsOne() : std::domain_error("radical is 1, metric undefined") {}
};

class BoundsTooLarge : public std::runtime_error {
 public:
  explicit BoundsTooLarge(std::size_t cap)
      : std::runtime_error("smooth set exceeds member cap of " + std::to_string(cap)) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, long row = -1)
      : std::runtime_error(row >= 0 ? "row " + std::to_string(row) + ": " + what : what),
        row_(row) {}

  // Line number in the source file, or -1 when not applicable.
  long row() const { return row_; }

 private:
  long row_;
};

class InvalidTriple : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutputUnwritable : public std::runtime_error {
 public:
  explicit OutputUnwritable(const std::string& path)
      : std::runtime_error("cannot write output file '" + path + "'") {}
};

}  // namespace abclll
