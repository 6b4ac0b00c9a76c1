#pragma once

#include <stdexcept>
#include <string>

namespace siegel {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
  precondition,  // caller violated an operation's contract
  numerical,     // budget exhausted, divisor breakdown, stalled search
};

/// Base of every error raised by the library. `code()` is a stable
/// machine-readable tag that ends up in the CLI's JSON error body.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message)
      : Error(ErrorKind::precondition, "precondition", message) {}
};

class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& message)
      : Error(ErrorKind::precondition, "non_finite", message) {}
};

/// |lambda^k - lambda| fell under the guard threshold at index k.
class DivisorBreakdown : public Error {
 public:
  DivisorBreakdown(std::string code, int k, double divisor, const std::string& message)
      : Error(ErrorKind::numerical, std::move(code), message), k_(k), divisor_(divisor) {}

  int k() const noexcept { return k_; }
  double divisor() const noexcept { return divisor_; }

 private:
  int k_;
  double divisor_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& message, long iterations)
      : Error(ErrorKind::numerical, "no_convergence", message), iterations_(iterations) {}

  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

class PoleError : public Error {
 public:
  explicit PoleError(const std::string& message)
      : Error(ErrorKind::numerical, "pole", message) {}
};

class UnreliableRadius : public Error {
 public:
  UnreliableRadius(const std::string& message, double radius, double gap)
      : Error(ErrorKind::numerical, "unreliable_radius", message), radius_(radius), gap_(gap) {}

  double radius() const noexcept { return radius_; }
  double gap() const noexcept { return gap_; }

 private:
  double radius_;
  double gap_;
};

class EstimateUnavailable : public Error {
 public:
  explicit EstimateUnavailable(const std::string& message)
      : Error(ErrorKind::numerical, "estimate_unavailable", message) {}
};

class BracketFailure : public Error {
 public:
  explicit BracketFailure(const std::string& message)
      : Error(ErrorKind::numerical, "bracket_failure", message) {}
};

}  // namespace siegel
