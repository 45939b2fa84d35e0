#pragma once

#include "mms/mesh.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mms {

/// Value, gradient and Hessian of a surface at one point.
struct SurfaceJet {
  double w = 0;
  double wx = 0;
  double wy = 0;
  double wxx = 0;
  double wyy = 0;
  double wxy = 0;
};

/// Analytic generating surface W(x, y) with first and second derivatives.
struct AnalyticSurface {
  std::string id;
  Rect domain;
  std::function<SurfaceJet(double, double)> jet;
  std::optional<double> known_energy;  // published thin-plate energy, when one exists

  double value(double x, double y) const { return jet(x, y).w; }
};

/// Known identifiers: cosine_biharmonic, nonsymmetric_biharmonic,
/// cosine_product, multipeak.
AnalyticSurface surface(const std::string& id);

std::vector<std::string> surface_ids();

/// Second-order 13-point bilaplacian stencil, Richardson-extrapolated over
/// steps h and h/2.
double biharmonic_residual(const AnalyticSurface& s, const Point& p, double h = 1e-2);

/// Thin-plate energy W_xx^2 + 2 W_xy^2 + W_yy^2 sampled at element centers
/// and weighted by element area.
double midpoint_energy(const AnalyticSurface& s, const Mesh& mesh);

/// Thin-plate energy by tensor Gauss-Legendre quadrature on a cells x cells grid.
double quadrature_energy(const AnalyticSurface& s, int cells = 200);

/// Published approximate extremum locations of the multipeak surface.
std::vector<Point> multipeak_extrema_guess();

/// Newton refinement of gradient zeros starting from the published guesses.
std::vector<Point> multipeak_extrema();

struct CornerTableRow {
  double y_rel = 0;  // y / ly
  double x_rel = 0;  // x / lx
  double deflection = 0;  // D W / (q lx^4)
  double moment_x = 0;    // M_x / (q lx^2)
  double moment_y = 0;    // M_y / (q lx^2)
};

/// Reference values for the uniformly loaded square plate clamped along
/// y = ly, free elsewhere, point-supported at (0, 0) and (lx, 0); nu = 0.3.
std::vector<CornerTableRow> exact_corner_table();

}  // namespace mms
