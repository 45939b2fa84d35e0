#pragma once

#include "mms/assembly.hpp"
#include "mms/mesh.hpp"
#include "mms/surfaces.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace mms {

struct FieldSample {
  double x = 0;
  double y = 0;
  SectionSample<double> values;
};

struct LineSamples {
  SkeletonLine line;
  std::vector<FieldSample> samples;
  /// Largest disagreement of each parameter between the outlet of one element
  /// and the inlet of the next along the line.
  std::array<double, 6> edge_jump{};
};

/// `resolution` >= 2 evenly spaced points per element, shared element
/// boundaries emitted once.
LineSamples sample_line(const Solution& sol, const Mesh& mesh, const SkeletonLine& line, int resolution = 3);

/// Section parameters of one element at a local coordinate of its section.
SectionSample<double> element_section(const Solution& sol, const Mesh& mesh, int element, Axis axis, double t);

/// Field value at an arbitrary domain point, taken from the nearest skeleton
/// line (X-line if the row center is at least as close as the column center).
struct PointSample {
  FieldSample sample;
  Axis line = Axis::X;
  double offset = 0;  // transverse distance between the point and the line
};

PointSample sample_point(const Solution& sol, const Mesh& mesh, const Point& p);

/// Sample on the requested line orientation only.
PointSample sample_point(const Solution& sol, const Mesh& mesh, const Point& p, Axis orientation);

struct EnergyReport {
  double total = 0;
  std::vector<double> per_element;
};

EnergyReport total_energy(const Solution& sol, const Mesh& mesh);

struct ErrorNorms {
  double max_w = 0, rms_w = 0;
  double max_theta = 0, rms_theta = 0;
  double max_mn = 0, rms_mn = 0;
  std::size_t samples = 0;
};

/// Errors of w, theta_n and M_n (geometric: D = 1, nu = 0) against a
/// reference surface over the given lines.
ErrorNorms compare_to_reference(const Solution& sol, const Mesh& mesh, const AnalyticSurface& s,
                                const std::vector<SkeletonLine>& lines, int resolution = 3);

void write_line_csv(const LineSamples& samples, std::ostream& out);

/// x,y,w at every element center.
void write_grid_csv(const Solution& sol, const Mesh& mesh, std::ostream& out);

}  // namespace mms
