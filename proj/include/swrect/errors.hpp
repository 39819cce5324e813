#pragma once

#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

namespace swrect {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DenominatorVanishes : public Error {
 public:
  DenominatorVanishes(std::size_t row, std::size_t col, std::string point)
      : Error("denominator vanishes at entry (" + std::to_string(row) + "," +
              std::to_string(col) + ") for " + point),
        row_(row), col_(col), point_(std::move(point)) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }
  const std::string& point() const { return point_; }

 private:
  std::size_t row_, col_;
  std::string point_;
};

class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(double condition)
      : Error("matrix is numerically singular (condition estimate " +
              std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(long index, long lo, long hi)
      : Error("index " + std::to_string(index) + " outside [" + std::to_string(lo) + "," +
              std::to_string(hi) + "]") {}
};

class Inconsistent : public Error {
 public:
  explicit Inconsistent(double residual)
      : Error("steady-state equations are inconsistent (residual " +
              std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class SpectrumCollision : public Error {
 public:
  SpectrumCollision(int q, double lambda)
      : Error("lambda = " + std::to_string(lambda) + " lies in the spectrum of A" +
              std::to_string(q)),
        q_(q), lambda_(lambda) {}
  int subsystem() const { return q_; }
  double lambda() const { return lambda_; }

 private:
  int q_;
  double lambda_;
};

class SingularTransform : public Error {
 public:
  explicit SingularTransform(int k)
      : Error("echelon transform for output slot " + std::to_string(k) +
              " is not invertible"),
        k_(k) {}
  int slot() const { return k_; }

 private:
  int k_;
};

class SubsetExplosion : public Error {
 public:
  explicit SubsetExplosion(int p)
      : Error("refusing to enumerate 2^" + std::to_string(p) + " output subsets") {}
};

class SelectionFailed : public Error {
 public:
  SelectionFailed(int retries, double condition)
      : Error("no invertible eigenvector matrix after " + std::to_string(retries) +
              " draws (best condition estimate " + std::to_string(condition) + ")"),
        retries_(retries) {}
  int retries() const { return retries_; }

 private:
  int retries_;
};

class KernelMembershipFailed : public Error {
 public:
  KernelMembershipFailed(int q, int k, int i, double residual)
      : Error("eigenvector v_{" + std::to_string(k) + "," + std::to_string(i) +
              "} is not assignable in subsystem " + std::to_string(q) + " (residual " +
              std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Raised when an eigenvalue plan does not fit the plant or its own invariants.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

/// Rado condition violated; carries the offending output subset (1-based).
class RadoViolation : public Error {
 public:
  explicit RadoViolation(std::vector<int> subset);
  const std::vector<int>& subset() const { return subset_; }

 private:
  std::vector<int> subset_;
};

/// Wraps an upstream failure with the synthesis step that produced it.
class SynthesisError : public Error {
 public:
  SynthesisError(int step, const std::string& what, std::exception_ptr cause = nullptr)
      : Error("synthesis step " + std::to_string(step) + ": " + what), step_(step), cause_(std::move(cause)) {}
  int step() const { return step_; }
  /// The original exception, rethrowable with std::rethrow_exception.
  const std::exception_ptr& cause() const { return cause_; }

 private:
  int step_;
  std::exception_ptr cause_;
};

/// Closed-loop check after feedback construction failed.
class RectificationFailed : public Error {
 public:
  RectificationFailed(int q, double residual)
      : Error("feedback for subsystem " + std::to_string(q) + " misses its eigenstructure (residual " +
              std::to_string(residual) + ")") {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// The dimension budget cannot reach n, so no partitioning exists.
class Infeasible : public Error {
 public:
  using Error::Error;
};

inline RadoViolation::RadoViolation(std::vector<int> subset)
    : Error([&] {
        std::string s = "Rado condition fails for S = {";
        for (std::size_t i = 0; i < subset.size(); ++i) {
          if (i) s += ",";
          s += std::to_string(subset[i]);
        }
        return s + "}";
      }()),
      subset_(std::move(subset)) {}

}  // namespace swrect
