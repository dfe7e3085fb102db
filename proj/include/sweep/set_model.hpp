#pragma once

// Moving constraint sets C(t), exact projectors for the closed-form families,
// and the eps-eta approximate projection contract every provider satisfies.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "sweep/types.hpp"

namespace sweep {

class MetricPolyhedron;
class SetDescriptor;

enum class ProjectionMethod { Exact, DualProjectedGradient, Custom };

std::string to_string(ProjectionMethod method);

/// Evidence that a point z is an eps-eta approximate projection of x.
///
/// value_gap over-approximates ||x - z||^2 - d_S(x)^2 and enlargement_residual
/// over-approximates d_S(z). The enlarged set S_eta is never materialized; a
/// point belongs to it whenever its residual is at most eta.
struct ProjectionCertificate {
  double epsilon = 0.0;
  double eta = 0.0;
  double value_gap = 0.0;
  double enlargement_residual = 0.0;
  std::size_t iterations = 0;
  ProjectionMethod method = ProjectionMethod::Exact;

  bool valid() const {
    return value_gap <= epsilon && enlargement_residual <= eta;
  }
  /// max(value_gap / epsilon, residual / eta); <= 1 iff valid.
  double violation_ratio() const;
};

/// {x : normal . x >= offset}
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

/// Componentwise [lower, upper]; infinite bounds allowed.
struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

/// R^d_+, dimension taken from the query point.
struct NonnegativeOrthant {};

/// C(t) = C0 + t * velocity for a closed-form base set C0.
struct TranslatingSet {
  std::shared_ptr<const SetDescriptor> base;
  Vector velocity;
};

/// R * K(t) for a polyhedron K(t) under the metric R = sqrt(P).
struct MetricPolyhedronRef {
  std::shared_ptr<const MetricPolyhedron> poly;
};

/// Two-sided estimate of a distance d: lower <= d <= upper.
struct DistanceEstimate {
  double lower = 0.0;
  double upper = 0.0;
};

struct CustomProjection {
  Point point;
  ProjectionCertificate certificate;
};

/// Externally supplied set. The callbacks must be pure.
struct CustomSet {
  std::function<DistanceEstimate(double t, const Point& x)> distance;
  std::function<CustomProjection(double t, const Point& x, double epsilon,
                                 double eta)>
      project;
};

using SetKind = std::variant<Halfspace, Box, Ball, NonnegativeOrthant,
                             TranslatingSet, MetricPolyhedronRef, CustomSet>;

/// An immutable moving set C(t) with its time-Lipschitz constant L_C
/// (Haus(C(t), C(s)) <= L_C |t - s|).
class SetDescriptor {
 public:
  static SetDescriptor halfspace(Vector normal, double offset);
  static SetDescriptor box(Vector lower, Vector upper);
  static SetDescriptor ball(Vector center, double radius);
  static SetDescriptor nonnegative_orthant();
  /// lipschitz_const defaults to ||velocity|| and may not be smaller.
  static SetDescriptor translating(SetDescriptor base, Vector velocity,
                                   std::optional<double> lipschitz_const = {});
  static SetDescriptor metric_polyhedron(
      std::shared_ptr<const MetricPolyhedron> poly);
  static SetDescriptor custom(CustomSet callbacks, double lipschitz_const);

  const SetKind& kind() const { return kind_; }
  double lipschitz_const() const { return lipschitz_const_; }
  /// Halfspace, Box, Ball, orthant, or a translation of one of those.
  bool is_closed_form() const;

 private:
  SetDescriptor(SetKind kind, double lipschitz_const)
      : kind_(std::move(kind)), lipschitz_const_(lipschitz_const) {}

  SetKind kind_;
  double lipschitz_const_;
};

/// Exact d_{C(t)}(x) for closed-form kinds; throws UnsupportedKind otherwise.
double distance_exact(const SetDescriptor& set, double t, const Point& x);

/// Exact proj_{C(t)}(x) for closed-form kinds; throws UnsupportedKind otherwise.
Point project_exact(const SetDescriptor& set, double t, const Point& x);

/// Sound two-sided distance estimate for every kind. Closed-form kinds return
/// lower == upper.
DistanceEstimate distance_bounds(const SetDescriptor& set, double t,
                                 const Point& x);

/// Budget handed to iterative providers.
struct ProjectionOptions {
  std::size_t max_iters = 200000;
  std::size_t check_every = 5;
  /// Dual starting point for the projected-gradient provider.
  const Vector* warm_start = nullptr;
};

struct ProjectionResult {
  Point point;
  ProjectionCertificate certificate;
  /// Dual multipliers when the provider is the dual projected gradient;
  /// empty otherwise.
  Vector multipliers;
};

/// Returns z with ||x - z||^2 <= d^2 + epsilon and d_{C(t)}(z) <= eta, together
/// with a VALID certificate. Throws CertificateFailure when the provider
/// cannot certify within its budget, InvalidArgument when epsilon or eta <= 0.
ProjectionResult eps_eta_project(const SetDescriptor& set, double t,
                                 const Point& x, double epsilon, double eta,
                                 const ProjectionOptions& options = {});

/// Closed-form set whose provider answers from outside: it returns the exact
/// projection moved back toward x by min(lag_fraction * eta, d). The result
/// lies outside the set by up to lag_fraction * eta yet is still an eps-eta
/// approximate projection. lag_fraction must lie in [0, 1).
SetDescriptor outside_lagging(const SetDescriptor& closed_form,
                              double lag_fraction);

/// Certificate for an arbitrary candidate z, closed-form kinds only.
ProjectionCertificate certify_candidate(const SetDescriptor& set, double t,
                                        const Point& x, const Point& z,
                                        double epsilon, double eta);

}  // namespace sweep
