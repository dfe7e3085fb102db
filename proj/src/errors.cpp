#include "sweep/errors.hpp"

#include "sweep/catching_up.hpp"
#include "sweep/set_model.hpp"

namespace sweep {

CertificateFailure::CertificateFailure(
    const std::string& what, std::shared_ptr<const ProjectionCertificate> best)
    : SweepError(what), best_(std::move(best)) {}

BudgetExhausted::BudgetExhausted(
    const std::string& what, std::shared_ptr<const ProjectionCertificate> best,
    Vector best_multipliers)
    : CertificateFailure(what, std::move(best)),
      best_multipliers_(std::move(best_multipliers)) {}

ProjectionFailure::ProjectionFailure(
    const std::string& what, std::size_t step,
    std::shared_ptr<const ProjectionCertificate> best,
    std::shared_ptr<const Trajectory> partial)
    : SweepError(what),
      step_(step),
      best_(std::move(best)),
      partial_(std::move(partial)) {}

}  // namespace sweep
