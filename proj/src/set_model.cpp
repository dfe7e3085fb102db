#include "sweep/set_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sweep/dual_qp.hpp"
#include "sweep/errors.hpp"

namespace sweep {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(const Vector& v, const Point& x, const char* what) {
  if (v.size() != x.size()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (set " +
                          std::to_string(v.size()) + ", point " +
                          std::to_string(x.size()) + ")");
  }
}

void require_finite(const Point& x) {
  if (!all_finite(x)) throw InvalidArgument("point has non-finite entries");
}

void require_tolerances(double epsilon, double eta) {
  if (!(epsilon > 0.0) || !(eta > 0.0) || !std::isfinite(epsilon) ||
      !std::isfinite(eta)) {
    throw InvalidArgument("epsilon and eta must be positive and finite");
  }
}

[[noreturn]] void unsupported(const char* op) {
  throw UnsupportedKind(std::string(op) +
                        " requires a closed-form set (halfspace, box, ball, "
                        "orthant, or a translation of one)");
}

Point project_closed(const SetKind& kind, double t, const Point& x);

double distance_closed(const SetKind& kind, double t, const Point& x) {
  return std::visit(
      Overloaded{
          [&](const Halfspace& h) {
            require_dim(h.normal, x, "halfspace");
            return std::max(0.0, h.offset - h.normal.dot(x)) / h.normal.norm();
          },
          [&](const Box& b) {
            require_dim(b.lower, x, "box");
            return (x - x.cwiseMax(b.lower).cwiseMin(b.upper)).norm();
          },
          [&](const Ball& b) {
            require_dim(b.center, x, "ball");
            return std::max(0.0, (x - b.center).norm() - b.radius);
          },
          [&](const NonnegativeOrthant&) { return x.cwiseMin(0.0).norm(); },
          [&](const TranslatingSet& s) {
            require_dim(s.velocity, x, "translating set");
            return distance_closed(s.base->kind(), t, x - t * s.velocity);
          },
          [&](const MetricPolyhedronRef&) -> double { unsupported("distance_exact"); },
          [&](const CustomSet&) -> double { unsupported("distance_exact"); },
      },
      kind);
}

Point project_closed(const SetKind& kind, double t, const Point& x) {
  return std::visit(
      Overloaded{
          [&](const Halfspace& h) -> Point {
            require_dim(h.normal, x, "halfspace");
            const double slack = h.offset - h.normal.dot(x);
            if (slack <= 0.0) return x;
            return x + (slack / h.normal.squaredNorm()) * h.normal;
          },
          [&](const Box& b) -> Point {
            require_dim(b.lower, x, "box");
            return x.cwiseMax(b.lower).cwiseMin(b.upper);
          },
          [&](const Ball& b) -> Point {
            require_dim(b.center, x, "ball");
            const Vector offset = x - b.center;
            const double r = offset.norm();
            if (r <= b.radius) return x;
            return b.center + (b.radius / r) * offset;
          },
          [&](const NonnegativeOrthant&) -> Point { return x.cwiseMax(0.0); },
          [&](const TranslatingSet& s) -> Point {
            require_dim(s.velocity, x, "translating set");
            const Vector shift = t * s.velocity;
            return project_closed(s.base->kind(), t, x - shift) + shift;
          },
          [&](const MetricPolyhedronRef&) -> Point { unsupported("project_exact"); },
          [&](const CustomSet&) -> Point { unsupported("project_exact"); },
      },
      kind);
}

DistanceEstimate polyhedron_distance(const MetricPolyhedron& poly, double t,
                                     const Point& x) {
  const double upper = poly.distance_upper_bound(t, x);
  if (upper == 0.0) return {0.0, 0.0};
  const DualProblem dual = assemble_dual(poly, t, x);
  const Vector lambda =
      projected_gradient_steps(dual, Vector::Zero(dual.q.size()), 2000);
  const double lower = std::sqrt(std::max(0.0, dual_lower_bound(dual, lambda)));
  const Point z = poly.R() * primal_recover(poly, lambda, x);
  const double via_point = (x - z).norm() + poly.distance_upper_bound(t, z);
  return {std::min(lower, upper), std::min(upper, via_point)};
}

}  // namespace

std::string to_string(ProjectionMethod method) {
  switch (method) {
    case ProjectionMethod::Exact:
      return "exact";
    case ProjectionMethod::DualProjectedGradient:
      return "dual-projected-gradient";
    case ProjectionMethod::Custom:
      return "custom";
  }
  return "unknown";
}

double ProjectionCertificate::violation_ratio() const {
  return std::max(value_gap / epsilon, enlargement_residual / eta);
}

SetDescriptor SetDescriptor::halfspace(Vector normal, double offset) {
  if (normal.size() == 0 || normal.norm() == 0.0 || !all_finite(normal) ||
      !std::isfinite(offset)) {
    throw InvalidArgument("halfspace normal must be finite and nonzero");
  }
  return SetDescriptor(Halfspace{std::move(normal), offset}, 0.0);
}

SetDescriptor SetDescriptor::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw InvalidArgument("box bounds must have equal, nonzero length");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower(i)) || std::isnan(upper(i)) || lower(i) > upper(i) ||
        lower(i) == std::numeric_limits<double>::infinity() ||
        upper(i) == -std::numeric_limits<double>::infinity()) {
      throw InvalidArgument("box requires lower <= upper componentwise");
    }
  }
  return SetDescriptor(Box{std::move(lower), std::move(upper)}, 0.0);
}

SetDescriptor SetDescriptor::ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) || !all_finite(center)) {
    throw InvalidArgument("ball radius must be positive and finite");
  }
  return SetDescriptor(Ball{std::move(center), radius}, 0.0);
}

SetDescriptor SetDescriptor::nonnegative_orthant() {
  return SetDescriptor(NonnegativeOrthant{}, 0.0);
}

SetDescriptor SetDescriptor::translating(SetDescriptor base, Vector velocity,
                                         std::optional<double> lipschitz_const) {
  if (!base.is_closed_form()) {
    throw InvalidArgument("translating set needs a closed-form base");
  }
  if (!all_finite(velocity)) {
    throw InvalidArgument("translation velocity must be finite");
  }
  const double speed = velocity.norm();
  const double L = lipschitz_const.value_or(speed);
  if (L < speed) {
    throw InvalidArgument("lipschitz_const must be at least ||velocity||");
  }
  return SetDescriptor(
      TranslatingSet{std::make_shared<const SetDescriptor>(std::move(base)),
                     std::move(velocity)},
      L);
}

SetDescriptor SetDescriptor::metric_polyhedron(
    std::shared_ptr<const MetricPolyhedron> poly) {
  if (!poly) throw InvalidArgument("null polyhedron handle");
  const double L = poly->R_norm() * poly->hoffman() *
                   spectral_norm(poly->G()) * poly->u().lipschitz();
  // 0 * inf when G = 0 and u jumps: the set does not move.
  const double lipschitz = std::isnan(L) ? 0.0 : L;
  return SetDescriptor(MetricPolyhedronRef{std::move(poly)}, lipschitz);
}

SetDescriptor SetDescriptor::custom(CustomSet callbacks, double lipschitz_const) {
  if (!callbacks.distance || !callbacks.project) {
    throw InvalidArgument("custom set needs distance and projection callbacks");
  }
  if (!(lipschitz_const >= 0.0)) {
    throw InvalidArgument("lipschitz_const must be nonnegative");
  }
  return SetDescriptor(std::move(callbacks), lipschitz_const);
}

bool SetDescriptor::is_closed_form() const {
  return !std::holds_alternative<MetricPolyhedronRef>(kind_) &&
         !std::holds_alternative<CustomSet>(kind_);
}

double distance_exact(const SetDescriptor& set, double t, const Point& x) {
  require_finite(x);
  return distance_closed(set.kind(), t, x);
}

Point project_exact(const SetDescriptor& set, double t, const Point& x) {
  require_finite(x);
  return project_closed(set.kind(), t, x);
}

DistanceEstimate distance_bounds(const SetDescriptor& set, double t,
                                 const Point& x) {
  require_finite(x);
  if (set.is_closed_form()) {
    const double d = distance_closed(set.kind(), t, x);
    return {d, d};
  }
  if (const auto* ref = std::get_if<MetricPolyhedronRef>(&set.kind())) {
    return polyhedron_distance(*ref->poly, t, x);
  }
  return std::get<CustomSet>(set.kind()).distance(t, x);
}

ProjectionResult eps_eta_project(const SetDescriptor& set, double t,
                                 const Point& x, double epsilon, double eta,
                                 const ProjectionOptions& options) {
  require_tolerances(epsilon, eta);
  require_finite(x);

  if (set.is_closed_form()) {
    ProjectionResult result;
    result.point = project_closed(set.kind(), t, x);
    result.certificate.epsilon = epsilon;
    result.certificate.eta = eta;
    result.certificate.method = ProjectionMethod::Exact;
    return result;
  }

  if (const auto* ref = std::get_if<MetricPolyhedronRef>(&set.kind())) {
    const MetricPolyhedron& poly = *ref->poly;
    const StoppingRule stop{epsilon, eta, options.max_iters, options.check_every};
    DualSolution sol =
        projected_gradient_solve(poly, t, x, stop, options.warm_start);
    ProjectionResult result;
    result.point = poly.R() * primal_recover(poly, sol.lambda, x);
    result.certificate = sol.certificate;
    result.multipliers = std::move(sol.lambda);
    return result;
  }

  const auto& custom = std::get<CustomSet>(set.kind());
  CustomProjection proposed = custom.project(t, x, epsilon, eta);
  if (proposed.point.size() != x.size() || !all_finite(proposed.point)) {
    throw CertificateFailure(
        "custom provider returned a malformed point",
        std::make_shared<const ProjectionCertificate>(proposed.certificate));
  }
  // Re-derive both quantities from the distance oracle and keep the worse one.
  const DistanceEstimate dx = custom.distance(t, x);
  const DistanceEstimate dz = custom.distance(t, proposed.point);
  ProjectionCertificate cert = proposed.certificate;
  cert.epsilon = epsilon;
  cert.eta = eta;
  cert.method = ProjectionMethod::Custom;
  cert.value_gap = std::max(
      cert.value_gap, (x - proposed.point).squaredNorm() - dx.lower * dx.lower);
  cert.enlargement_residual = std::max(cert.enlargement_residual, dz.upper);
  if (!cert.valid()) {
    throw CertificateFailure("custom provider failed to certify its projection",
                             std::make_shared<const ProjectionCertificate>(cert));
  }
  return {std::move(proposed.point), cert, Vector()};
}

SetDescriptor outside_lagging(const SetDescriptor& closed_form,
                              double lag_fraction) {
  if (!closed_form.is_closed_form()) {
    throw InvalidArgument("outside_lagging wraps closed-form sets only");
  }
  if (!(lag_fraction >= 0.0 && lag_fraction < 1.0)) {
    throw InvalidArgument("lag_fraction must lie in [0, 1)");
  }
  CustomSet callbacks;
  callbacks.distance = [closed_form](double t, const Point& x) {
    const double d = distance_exact(closed_form, t, x);
    return DistanceEstimate{d, d};
  };
  callbacks.project = [closed_form, lag_fraction](double t, const Point& x,
                                                  double epsilon, double eta) {
    const Point p = project_exact(closed_form, t, x);
    const Vector back = x - p;
    const double d = back.norm();
    CustomProjection out;
    out.point = p;
    if (d > 0.0) out.point += (std::min(lag_fraction * eta, d) / d) * back;
    out.certificate = certify_candidate(closed_form, t, x, out.point, epsilon, eta);
    out.certificate.method = ProjectionMethod::Custom;
    return out;
  };
  return SetDescriptor::custom(std::move(callbacks), closed_form.lipschitz_const());
}

ProjectionCertificate certify_candidate(const SetDescriptor& set, double t,
                                        const Point& x, const Point& z,
                                        double epsilon, double eta) {
  require_finite(z);
  const double d = distance_exact(set, t, x);
  ProjectionCertificate cert;
  cert.epsilon = epsilon;
  cert.eta = eta;
  cert.value_gap = (x - z).squaredNorm() - d * d;
  cert.enlargement_residual = distance_exact(set, t, z);
  cert.method = ProjectionMethod::Exact;
  return cert;
}

}  // namespace sweep
