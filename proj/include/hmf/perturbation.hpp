#pragma once

#include <string>
#include <string_view>

#include "hmf/ensemble.hpp"
#include "hmf/equilibrium.hpp"

namespace hmf {

enum class PerturbationKind { None, Cosine, Sine };

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::None;
  double amplitude = 0.0;

  bool operator==(const PerturbationSpec&) const = default;
};

std::string_view to_string(PerturbationKind kind);
PerturbationKind parse_perturbation_kind(std::string_view name);

/// f0(x,p) (1 + a g(x)) with g = cos or sin. The density is left
/// unnormalized; init_lattice renormalizes the weights.
Density perturbed_density(const EquilibriumState& eq, const PerturbationSpec& spec);

}  // namespace hmf
