#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>

#include "sweep/types.hpp"

namespace sweep {

struct ProjectionCertificate;
struct Trajectory;

class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class InvalidArgument : public SweepError {
 public:
  using SweepError::SweepError;
};

class UnsupportedKind : public SweepError {
 public:
  using SweepError::SweepError;
};

class OutOfRange : public SweepError {
 public:
  using SweepError::SweepError;
};

class SingularMetric : public SweepError {
 public:
  using SweepError::SweepError;
};

class ZeroMatrix : public SweepError {
 public:
  using SweepError::SweepError;
};

class NotPositiveDefinite : public SweepError {
 public:
  using SweepError::SweepError;
};

class InadmissibleExponents : public SweepError {
 public:
  using SweepError::SweepError;
};

class NonFiniteDrift : public SweepError {
 public:
  using SweepError::SweepError;
};

/// The drift selection broke the growth bound ||f(t,x)|| <= h(x) + sqrt(gamma).
class HypothesisViolation : public SweepError {
 public:
  using SweepError::SweepError;
};

class InfeasibleInitial : public SweepError {
 public:
  using SweepError::SweepError;
};

class NoMetricExists : public SweepError {
 public:
  NoMetricExists(const std::string& what, double residual, double min_eigenvalue)
      : SweepError(what), residual_(residual), min_eigenvalue_(min_eigenvalue) {}
  double residual() const { return residual_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double residual_;
  double min_eigenvalue_;
};

class ConfigError : public SweepError {
 public:
  using SweepError::SweepError;
};

/// Carries the best certificate a provider managed to produce.
class CertificateFailure : public SweepError {
 public:
  CertificateFailure(const std::string& what,
                     std::shared_ptr<const ProjectionCertificate> best);
  const ProjectionCertificate& best() const { return *best_; }

 private:
  std::shared_ptr<const ProjectionCertificate> best_;
};

/// Dual projected-gradient ran out of iterations before certifying.
class BudgetExhausted : public CertificateFailure {
 public:
  BudgetExhausted(const std::string& what,
                  std::shared_ptr<const ProjectionCertificate> best,
                  Vector best_multipliers);
  const Vector& best_multipliers() const { return best_multipliers_; }

 private:
  Vector best_multipliers_;
};

/// A catching-up step failed; the trajectory computed so far is attached.
class ProjectionFailure : public SweepError {
 public:
  ProjectionFailure(const std::string& what, std::size_t step,
                    std::shared_ptr<const ProjectionCertificate> best,
                    std::shared_ptr<const Trajectory> partial);
  std::size_t step() const { return step_; }
  const ProjectionCertificate& best() const { return *best_; }
  const Trajectory& partial() const { return *partial_; }

 private:
  std::size_t step_;
  std::shared_ptr<const ProjectionCertificate> best_;
  std::shared_ptr<const Trajectory> partial_;
};

}  // namespace sweep
