#include "hmf/perturbation.hpp"

#include <cmath>

#include "hmf/error.hpp"

namespace hmf {

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::None: return "none";
    case PerturbationKind::Cosine: return "cosine";
    case PerturbationKind::Sine: return "sine";
  }
  return "none";
}

PerturbationKind parse_perturbation_kind(std::string_view name) {
  if (name == "none") return PerturbationKind::None;
  if (name == "cosine" || name == "cos") return PerturbationKind::Cosine;
  if (name == "sine" || name == "sin") return PerturbationKind::Sine;
  throw InvalidParameter("unknown perturbation kind '" + std::string(name) + "'");
}

Density perturbed_density(const EquilibriumState& eq, const PerturbationSpec& spec) {
  const double a = spec.amplitude;
  if (!(std::abs(a) < 1.0))
    throw InvalidParameter("perturbation amplitude must satisfy |a| < 1, got " + std::to_string(a));
  switch (spec.kind) {
    case PerturbationKind::Cosine:
      return [eq, a](double x, double p) { return f0_density(x, p, eq) * (1.0 + a * std::cos(x)); };
    case PerturbationKind::Sine:
      return [eq, a](double x, double p) { return f0_density(x, p, eq) * (1.0 + a * std::sin(x)); };
    case PerturbationKind::None:
      break;
  }
  return [eq](double x, double p) { return f0_density(x, p, eq); };
}

}  // namespace hmf
