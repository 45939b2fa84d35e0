#include "mms/boundary.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mms {

int side_offset(Side side) {
  switch (side) {
    case Side::Left: return 0;
    case Side::Bottom: return 6;
    case Side::Right: return 12;
    case Side::Top: return 18;
  }
  return 0;
}

namespace {

bool corner_on_side(Corner c, Side side) {
  switch (side) {
    case Side::Left: return c == Corner::LowerLeft || c == Corner::UpperLeft;
    case Side::Right: return c == Corner::LowerRight || c == Corner::UpperRight;
    case Side::Bottom: return c == Corner::LowerLeft || c == Corner::LowerRight;
    case Side::Top: return c == Corner::UpperLeft || c == Corner::UpperRight;
  }
  return false;
}

// -1 when the corner sits at the start of the side (lower or left end),
// +1 when it sits at the far end.
double corner_direction(Corner c, Side side) {
  const bool vertical_side = side == Side::Left || side == Side::Right;
  const bool at_end = vertical_side ? (c == Corner::UpperLeft || c == Corner::UpperRight)
                                    : (c == Corner::LowerRight || c == Corner::UpperRight);
  return at_end ? 1.0 : -1.0;
}

BoundaryRow pin(int index, double value) { return {{{index, 1.0}}, value}; }

}  // namespace

std::array<BoundaryRow, 3> boundary_rows(Side side, const BoundaryCondition& bc,
                                         const ElementGeometry<double>& geom) {
  const int o = side_offset(side);
  const int w = o + kW, tn = o + kThetaN, tt = o + kThetaTau;
  const int mn = o + kMn, mt = o + kMtau, q = o + kQ;
  const double half = (side == Side::Left || side == Side::Right) ? geom.b / 2 : geom.a / 2;

  return std::visit(
      [&](const auto& c) -> std::array<BoundaryRow, 3> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PrescribedKinematic>) {
          return {pin(w, c.w), pin(tn, c.theta_n), pin(tt, c.theta_tau)};
        } else if constexpr (std::is_same_v<T, PrescribedCurvature>) {
          return {pin(w, c.w), pin(mn, c.m_n), pin(mt, c.m_tau)};
        } else if constexpr (std::is_same_v<T, FreeEdge>) {
          return {pin(mn, 0), pin(mt, 0), pin(q, 0)};
        } else {
          if (!corner_on_side(c.corner, side))
            throw std::invalid_argument(std::string("corner support does not touch the ") +
                                        side_name(side) + " side");
          const double s = corner_direction(c.corner, side) * half;
          switch (c.variant) {
            case CornerVariant::B:
              return {pin(w, 0), pin(mn, 0), pin(mt, 0)};
            case CornerVariant::BA:
              return {BoundaryRow{{{w, 1.0}, {tt, s}}, 0}, pin(mn, 0), pin(mt, 0)};
            case CornerVariant::BAM:
              return {BoundaryRow{{{w, 1.0}, {tt, s}}, 0}, pin(mn, 0),
                      BoundaryRow{{{mt, 1.0}, {q, s}}, 0}};
          }
          throw std::logic_error("unhandled corner variant");
        }
      },
      bc);
}

Point side_midpoint(const Element& e, Side side) {
  switch (side) {
    case Side::Left: return {e.x0, e.y0 + e.b / 2};
    case Side::Right: return {e.x0 + e.a, e.y0 + e.b / 2};
    case Side::Bottom: return {e.x0 + e.a / 2, e.y0};
    case Side::Top: return {e.x0 + e.a / 2, e.y0 + e.b};
  }
  return {};
}

BoundaryCondition sample_boundary_data(const AnalyticSurface& s, const Point& midpoint, Side side,
                                       BoundaryDataKind kind, double D, double nu) {
  const SurfaceJet j = s.jet(midpoint.x, midpoint.y);
  const bool x_section = side == Side::Left || side == Side::Right;
  const double dn = x_section ? j.wx : j.wy;
  const double dt = x_section ? j.wy : j.wx;
  const double dnn = x_section ? j.wxx : j.wyy;
  const double dtt = x_section ? j.wyy : j.wxx;
  if (kind == BoundaryDataKind::Kinematic) return PrescribedKinematic{j.w, dn, dt};
  return PrescribedCurvature{j.w, D * (dnn + nu * dtt), D * (1 - nu) * j.wxy};
}

void BoundarySpec::assign(int element, Side side, BoundaryCondition bc) {
  const auto key = std::make_pair(element, static_cast<int>(side));
  if (auto it = conditions_.find(key); it != conditions_.end()) {
    const bool free_vs_corner =
        (std::holds_alternative<FreeEdge>(it->second) && std::holds_alternative<CornerSupport>(bc)) ||
        (std::holds_alternative<CornerSupport>(it->second) && std::holds_alternative<FreeEdge>(bc));
    throw std::invalid_argument(
        std::string(free_vs_corner ? "free edge conflicts with corner support" : "conflicting boundary conditions") +
        " on element " + std::to_string(element) + " " + side_name(side) + " side");
  }
  conditions_.emplace(key, std::move(bc));
}

const BoundaryCondition* BoundarySpec::find(int element, Side side) const {
  auto it = conditions_.find(std::make_pair(element, static_cast<int>(side)));
  return it == conditions_.end() ? nullptr : &it->second;
}

BoundarySpec surface_boundary(const Mesh& mesh, const AnalyticSurface& s, BoundaryDataKind kind,
                              double D, double nu) {
  BoundarySpec spec;
  for (const BoundarySide& bs : mesh.boundary_sides()) {
    const Element& e = mesh.element(bs.element);
    spec.assign(bs.element, bs.side, sample_boundary_data(s, side_midpoint(e, bs.side), bs.side, kind, D, nu));
  }
  return spec;
}

BoundarySpec clamped_boundary(const Mesh& mesh) {
  BoundarySpec spec;
  for (const BoundarySide& bs : mesh.boundary_sides()) spec.assign(bs.element, bs.side, PrescribedKinematic{});
  return spec;
}

BoundarySpec corner_plate_boundary(const Mesh& mesh, CornerVariant variant) {
  if (mesh.nx() < 2) throw std::invalid_argument("corner plate needs at least two element columns");
  BoundarySpec spec;
  const int lower_left = mesh.element_id(0, 0);
  const int lower_right = mesh.element_id(mesh.nx() - 1, 0);
  spec.assign(lower_left, Side::Left, CornerSupport{variant, Corner::LowerLeft});
  spec.assign(lower_left, Side::Bottom, CornerSupport{variant, Corner::LowerLeft});
  spec.assign(lower_right, Side::Right, CornerSupport{variant, Corner::LowerRight});
  spec.assign(lower_right, Side::Bottom, CornerSupport{variant, Corner::LowerRight});
  for (const BoundarySide& bs : mesh.boundary_sides()) {
    if (spec.has(bs.element, bs.side)) continue;
    if (bs.side == Side::Top)
      spec.assign(bs.element, bs.side, PrescribedKinematic{});
    else
      spec.assign(bs.element, bs.side, FreeEdge{});
  }
  return spec;
}

BoundarySample interpolate_boundary(const std::vector<BoundarySample>& rows, double s) {
  if (rows.empty()) throw std::invalid_argument("empty boundary table");
  if (s <= rows.front().s) return rows.front();
  if (s >= rows.back().s) return rows.back();
  auto hi = std::lower_bound(rows.begin(), rows.end(), s,
                             [](const BoundarySample& r, double v) { return r.s < v; });
  auto lo = hi - 1;
  const double t = (s - lo->s) / (hi->s - lo->s);
  return {s, lo->w + t * (hi->w - lo->w), lo->d1 + t * (hi->d1 - lo->d1),
          lo->d2 + t * (hi->d2 - lo->d2)};
}

double boundary_arclength(const Mesh& mesh, const BoundarySide& bs) {
  const Point m = side_midpoint(mesh.element(bs.element), bs.side);
  const bool vertical_side = bs.side == Side::Left || bs.side == Side::Right;
  return vertical_side ? m.y - mesh.domain().y_min : m.x - mesh.domain().x_min;
}

BoundaryCondition tabulated_condition(const BoundarySample& v, BoundaryDataKind kind) {
  if (kind == BoundaryDataKind::Kinematic) return PrescribedKinematic{v.w, v.d1, v.d2};
  return PrescribedCurvature{v.w, v.d1, v.d2};
}

BoundaryTable sorted_table(BoundaryTable table) {
  for (auto& [side, rows] : table)
    std::sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) { return l.s < r.s; });
  return table;
}

BoundarySpec tabulated_boundary(const Mesh& mesh, const BoundaryTable& table, BoundaryDataKind kind) {
  const BoundaryTable sorted = sorted_table(table);
  BoundarySpec spec;
  for (const BoundarySide& bs : mesh.boundary_sides()) {
    auto it = sorted.find(bs.side);
    if (it == sorted.end())
      throw std::invalid_argument(std::string("boundary table has no rows for the ") + side_name(bs.side) + " side");
    spec.assign(bs.element, bs.side,
                tabulated_condition(interpolate_boundary(it->second, boundary_arclength(mesh, bs)), kind));
  }
  return spec;
}

}  // namespace mms
