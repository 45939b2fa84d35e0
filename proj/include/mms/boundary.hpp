#pragma once

#include "mms/element.hpp"
#include "mms/mesh.hpp"
#include "mms/surfaces.hpp"

#include <array>
#include <map>
#include <utility>
#include <variant>
#include <vector>

namespace mms {

/// Elevation and both first derivatives at the side midpoint.
struct PrescribedKinematic {
  double w = 0;
  double theta_n = 0;
  double theta_tau = 0;
};

/// Elevation and the bending / twisting moments at the side midpoint.
struct PrescribedCurvature {
  double w = 0;
  double m_n = 0;
  double m_tau = 0;
};

/// Traction-free side: M_n = M_tau = Q = 0.
struct FreeEdge {};

enum class CornerVariant { B, BA, BAM };
enum class Corner { LowerLeft, LowerRight, UpperLeft, UpperRight };

/// Point support at a domain corner, imposed on one side of the corner element.
struct CornerSupport {
  CornerVariant variant = CornerVariant::B;
  Corner corner = Corner::LowerLeft;
};

using BoundaryCondition = std::variant<PrescribedKinematic, PrescribedCurvature, FreeEdge, CornerSupport>;

enum class BoundaryDataKind { Kinematic, Curvature };

/// One linear equation over an element's 24 local unknowns.
struct BoundaryRow {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0;
};

/// Local unknown index of the first section parameter on a side:
/// left 0 (X inlet), bottom 6 (Y inlet), right 12 (X outlet), top 18 (Y outlet).
int side_offset(Side side);

/// The three equations a boundary condition imposes on one element side.
std::array<BoundaryRow, 3> boundary_rows(Side side, const BoundaryCondition& bc,
                                         const ElementGeometry<double>& geom);

Point side_midpoint(const Element& e, Side side);

/// Boundary values a surface prescribes at a side midpoint. Moments are
/// D (W_nn + nu W_tt) and D (1 - nu) W_nt.
BoundaryCondition sample_boundary_data(const AnalyticSurface& s, const Point& midpoint, Side side,
                                       BoundaryDataKind kind, double D = 1, double nu = 0);

/// Boundary condition per (element, side). Assigning a side twice is an error.
class BoundarySpec {
 public:
  void assign(int element, Side side, BoundaryCondition bc);
  const BoundaryCondition* find(int element, Side side) const;
  bool has(int element, Side side) const { return find(element, side) != nullptr; }
  std::size_t size() const { return conditions_.size(); }

 private:
  std::map<std::pair<int, int>, BoundaryCondition> conditions_;
};

BoundarySpec surface_boundary(const Mesh& mesh, const AnalyticSurface& s, BoundaryDataKind kind,
                              double D = 1, double nu = 0);

/// Every boundary side clamped at zero (w = theta_n = theta_tau = 0).
BoundarySpec clamped_boundary(const Mesh& mesh);

/// Square plate clamped along the top edge, free along the other three, with
/// point supports at the two lower corners.
BoundarySpec corner_plate_boundary(const Mesh& mesh, CornerVariant variant);

/// Tabulated boundary data for one domain side: arclength s from the side
/// start (x_min or y_min), elevation and two derivative values.
struct BoundarySample {
  double s = 0;
  double w = 0;
  double d1 = 0;
  double d2 = 0;
};

using BoundaryTable = std::map<Side, std::vector<BoundarySample>>;

/// Linear interpolation in rows sorted by s; clamps outside the table.
BoundarySample interpolate_boundary(const std::vector<BoundarySample>& rows, double s);

/// Arclength of a boundary side midpoint, measured from x_min or y_min.
double boundary_arclength(const Mesh& mesh, const BoundarySide& bs);

/// d1, d2 are (theta_n, theta_tau) for kinematic data, (M_n, M_tau) otherwise.
BoundaryCondition tabulated_condition(const BoundarySample& v, BoundaryDataKind kind);

BoundaryTable sorted_table(BoundaryTable table);

/// Linear interpolation of the tabulated data at each boundary side midpoint.
BoundarySpec tabulated_boundary(const Mesh& mesh, const BoundaryTable& table, BoundaryDataKind kind);

}  // namespace mms
