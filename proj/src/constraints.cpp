#include "mms/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace mms {

double kernel_weight(double d, double zeta, double lx, double ly, double cutoff) {
  if (d > cutoff) return 0.0;
  const double r = d / (zeta * std::min(lx, ly));
  return 1.0 / (1.0 + r * r);
}

double default_cutoff(const Rect& domain) { return std::min(domain.lx(), domain.ly()) / 5; }

SpreadWeights spread_weights(const Mesh& mesh, const PointConstraint& pc, int attachment) {
  SpreadWeights sw;
  sw.weights.emplace_back(attachment, 1.0);
  if (!pc.zeta) return sw;
  if (!(*pc.zeta > 0)) throw std::invalid_argument("regularization parameter zeta must be positive");

  const Rect& d = mesh.domain();
  const double cutoff = pc.cutoff.value_or(default_cutoff(d));
  const Element& home = mesh.element(attachment);
  const Point c0 = home.center();

  // Only the index window that can fall inside the cutoff is scanned.
  const auto& xs = mesh.x_lines();
  const auto& ys = mesh.y_lines();
  auto lo = [](const std::vector<double>& v, double t) {
    return std::max<int>(0, static_cast<int>(std::lower_bound(v.begin(), v.end(), t) - v.begin()) - 1);
  };
  auto hi = [](const std::vector<double>& v, double t) {
    return std::min<int>(static_cast<int>(v.size()) - 2,
                         static_cast<int>(std::upper_bound(v.begin(), v.end(), t) - v.begin()));
  };
  const int c_lo = lo(xs, c0.x - cutoff), c_hi = hi(xs, c0.x + cutoff);
  const int r_lo = lo(ys, c0.y - cutoff), r_hi = hi(ys, c0.y + cutoff);
  for (int row = r_lo; row <= r_hi; ++row) {
    for (int col = c_lo; col <= c_hi; ++col) {
      const int id = mesh.element_id(col, row);
      if (id == attachment) continue;
      const Point c = mesh.element(id).center();
      const double dist = std::hypot(c.x - c0.x, c.y - c0.y);
      const double alpha = kernel_weight(dist, *pc.zeta, d.lx(), d.ly(), cutoff);
      if (alpha > 0) sw.weights.emplace_back(id, alpha);
    }
  }
  return sw;
}

ConstraintContribution constraint_contribution(const Mesh& mesh, const PointConstraint& pc, int multiplier) {
  const Located loc = locate_element(mesh, pc.location);
  ConstraintContribution cc;
  cc.multiplier = multiplier;
  cc.attachment = loc.element;
  cc.target = pc.target;
  cc.spread = spread_weights(mesh, pc, loc.element);
  return cc;
}

std::vector<ConstraintContribution> constraint_contributions(const Mesh& mesh,
                                                             std::span<const PointConstraint> constraints,
                                                             int first_multiplier) {
  std::vector<ConstraintContribution> out;
  std::set<int> attached;
  int k = first_multiplier;
  for (const PointConstraint& pc : constraints) {
    ConstraintContribution cc = constraint_contribution(mesh, pc, k++);
    if (!attached.insert(cc.attachment).second)
      throw std::invalid_argument("two constraints attach to element " + std::to_string(cc.attachment));
    out.push_back(std::move(cc));
  }
  return out;
}

}  // namespace mms
