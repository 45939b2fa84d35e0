#pragma once

#include "mms/mesh.hpp"

#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mms {

/// Interior elevation constraint W(location) = target. With `zeta` set, the
/// reaction load is spread over neighboring elements by the kernel weight;
/// without it the load stays on the attachment element.
struct PointConstraint {
  Point location;
  double target = 0;
  std::optional<double> zeta;
  std::optional<double> cutoff;  // center-to-center radius, default min(lx, ly) / 5
};

/// 1 / (1 + (d / (zeta min(lx, ly)))^2), or 0 beyond the cutoff radius.
double kernel_weight(double d, double zeta, double lx, double ly,
                     double cutoff = std::numeric_limits<double>::infinity());

double default_cutoff(const Rect& domain);

struct SpreadWeights {
  std::vector<std::pair<int, double>> weights;  // (element, alpha), attachment element first
};

/// Everything a constraint adds to the global system: the multiplier unknown
/// lambda, the load couplings P_e += alpha_e * lambda, and the target row
/// w^x(a/2) of the attachment element = target.
struct ConstraintContribution {
  int multiplier = 0;
  int attachment = 0;
  double target = 0;
  SpreadWeights spread;
};

SpreadWeights spread_weights(const Mesh& mesh, const PointConstraint& pc, int attachment);

ConstraintContribution constraint_contribution(const Mesh& mesh, const PointConstraint& pc, int multiplier);

/// Contributions for a whole constraint set; two constraints attached to the
/// same element are rejected.
std::vector<ConstraintContribution> constraint_contributions(const Mesh& mesh,
                                                             std::span<const PointConstraint> constraints,
                                                             int first_multiplier);

}  // namespace mms
