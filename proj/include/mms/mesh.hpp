#pragma once

#include "mms/element.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mms {

struct Point {
  double x{0};
  double y{0};
};

struct Rect {
  double x_min{0};
  double x_max{1};
  double y_min{0};
  double y_max{1};

  double lx() const { return x_max - x_min; }
  double ly() const { return y_max - y_min; }
  bool contains(const Point& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

/// Linear narrowing of the outermost element rows and columns. The outermost
/// row has width `factor * h` and the following rows grow linearly towards
/// the uniform interior width h.
struct BoundaryScaling {
  int rows = 4;
  double factor = 0.25;
};

struct MeshSpec {
  Rect domain;
  int nx = 1;
  int ny = 1;
  std::optional<BoundaryScaling> scaling;
};

enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };

const char* side_name(Side side);

struct Element {
  int id = 0;
  int col = 0;
  int row = 0;
  double x0 = 0;  // lower-left corner
  double y0 = 0;
  double a = 0;
  double b = 0;

  Point center() const { return {x0 + a / 2, y0 + b / 2}; }
};

/// Interior edge shared by `first` (left or lower element) and `second`.
struct Edge {
  int first = 0;
  int second = 0;
  Side first_side = Side::Right;
  Side second_side = Side::Left;
};

struct BoundarySide {
  int element = 0;
  Side side = Side::Left;
};

/// A row (X) or column (Y) center line of the element grid.
struct SkeletonLine {
  Axis orientation = Axis::X;
  int index = 0;            // row for X-lines, column for Y-lines
  double coordinate = 0;    // fixed transverse coordinate
  std::vector<int> elements;
};

struct Located {
  int element = 0;
  Point offset;  // point minus element center
};

class Mesh {
 public:
  explicit Mesh(MeshSpec spec);

  const MeshSpec& spec() const { return spec_; }
  const Rect& domain() const { return spec_.domain; }
  int nx() const { return spec_.nx; }
  int ny() const { return spec_.ny; }
  int size() const { return static_cast<int>(elements_.size()); }

  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(int id) const { return elements_.at(static_cast<std::size_t>(id)); }
  int element_id(int col, int row) const { return row * spec_.nx + col; }

  /// Edges between horizontally adjacent elements (vertical edge lines).
  const std::vector<Edge>& vertical_edges() const { return vertical_edges_; }
  /// Edges between vertically adjacent elements (horizontal edge lines).
  const std::vector<Edge>& horizontal_edges() const { return horizontal_edges_; }
  const std::vector<BoundarySide>& boundary_sides() const { return boundary_sides_; }

  const std::vector<double>& column_widths() const { return widths_; }
  const std::vector<double>& row_heights() const { return heights_; }
  /// Grid line positions: nx + 1 (resp. ny + 1) entries.
  const std::vector<double>& x_lines() const { return x_lines_; }
  const std::vector<double>& y_lines() const { return y_lines_; }

  double column_center(int col) const;
  double row_center(int row) const;

  bool is_boundary(int element, Side side) const;

  ElementGeometry<double> geometry(int element, double D, double nu) const {
    const Element& e = this->element(element);
    return {e.a, e.b, D, nu};
  }

  /// Plain-text summary (sizes and edge counts).
  std::string summary() const;

 private:
  MeshSpec spec_;
  std::vector<double> widths_;
  std::vector<double> heights_;
  std::vector<double> x_lines_;
  std::vector<double> y_lines_;
  std::vector<Element> elements_;
  std::vector<Edge> vertical_edges_;
  std::vector<Edge> horizontal_edges_;
  std::vector<BoundarySide> boundary_sides_;
};

Mesh build_mesh(const MeshSpec& spec);

/// Element widths along one direction, symmetric about the mid-axis.
std::vector<double> grid_widths(double extent, int count, const std::optional<BoundaryScaling>& scaling);

/// Containing element; points on shared edges go to the lower element index.
Located locate_element(const Mesh& mesh, const Point& p);

std::vector<SkeletonLine> skeleton_lines(const Mesh& mesh);

SkeletonLine skeleton_line(const Mesh& mesh, Axis orientation, int index);

/// Line of the given orientation whose coordinate is closest to `coordinate`.
SkeletonLine nearest_skeleton_line(const Mesh& mesh, Axis orientation, double coordinate);

}  // namespace mms
