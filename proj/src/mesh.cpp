#include "mms/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mms {

const char* side_name(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
  }
  return "?";
}

std::vector<double> grid_widths(double extent, int count,
                                const std::optional<BoundaryScaling>& scaling) {
  if (count < 1) throw std::invalid_argument("element count must be at least 1");
  if (!(extent > 0)) throw std::invalid_argument("domain extent must be positive");
  if (!scaling) return std::vector<double>(static_cast<std::size_t>(count), extent / count);

  const int rows = scaling->rows;
  const double factor = scaling->factor;
  if (rows < 1) throw std::invalid_argument("boundary scaling needs at least one row");
  if (!(factor > 0 && factor <= 1)) throw std::invalid_argument("boundary scaling factor must be in (0, 1]");
  if (2 * rows > count)
    throw std::invalid_argument("scaled boundary rows exceed half of the element count");

  // Relative widths r_k = factor + (1 - factor) k / rows for the scaled rows,
  // 1 for the interior; the uniform width h follows from the total extent.
  std::vector<double> rel(static_cast<std::size_t>(count), 1.0);
  for (int k = 0; k < rows; ++k) {
    const double r = factor + (1.0 - factor) * k / rows;
    rel[static_cast<std::size_t>(k)] = r;
    rel[static_cast<std::size_t>(count - 1 - k)] = r;
  }
  double total = 0;
  for (double r : rel) total += r;
  const double h = extent / total;
  std::vector<double> widths(rel.size());
  std::transform(rel.begin(), rel.end(), widths.begin(), [h](double r) { return r * h; });
  return widths;
}

namespace {

// Cumulative positions; the last line is pinned to the domain end and the
// grid is mirrored so that symmetric meshes have symmetric coordinates.
std::vector<double> grid_lines(double start, double end, const std::vector<double>& widths) {
  const std::size_t n = widths.size();
  std::vector<double> lines(n + 1);
  lines[0] = start;
  lines[n] = end;
  double acc = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    acc += widths[i];
    lines[i + 1] = start + acc;
  }
  const double mid = 0.5 * (start + end);
  for (std::size_t i = 0; i <= n / 2; ++i) {
    const std::size_t j = n - i;
    if (widths[i] != widths[n - 1 - i]) return lines;
    const double d = 0.5 * ((mid - lines[i]) + (lines[j] - mid));
    lines[i] = mid - d;
    lines[j] = mid + d;
  }
  if (n % 2 == 0) lines[n / 2] = mid;
  return lines;
}

}  // namespace

Mesh::Mesh(MeshSpec spec) : spec_(std::move(spec)) {
  const Rect& d = spec_.domain;
  if (!(d.lx() > 0) || !(d.ly() > 0)) throw std::invalid_argument("domain must have positive extent");
  widths_ = grid_widths(d.lx(), spec_.nx, spec_.scaling);
  heights_ = grid_widths(d.ly(), spec_.ny, spec_.scaling);
  x_lines_ = grid_lines(d.x_min, d.x_max, widths_);
  y_lines_ = grid_lines(d.y_min, d.y_max, heights_);

  const int nx = spec_.nx;
  const int ny = spec_.ny;
  elements_.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int row = 0; row < ny; ++row) {
    for (int col = 0; col < nx; ++col) {
      Element e;
      e.id = element_id(col, row);
      e.col = col;
      e.row = row;
      e.x0 = x_lines_[static_cast<std::size_t>(col)];
      e.y0 = y_lines_[static_cast<std::size_t>(row)];
      e.a = widths_[static_cast<std::size_t>(col)];
      e.b = heights_[static_cast<std::size_t>(row)];
      elements_.push_back(e);
    }
  }

  for (int row = 0; row < ny; ++row) {
    for (int col = 0; col < nx; ++col) {
      const int id = element_id(col, row);
      if (col + 1 < nx) vertical_edges_.push_back({id, element_id(col + 1, row), Side::Right, Side::Left});
      if (row + 1 < ny) horizontal_edges_.push_back({id, element_id(col, row + 1), Side::Top, Side::Bottom});
      if (col == 0) boundary_sides_.push_back({id, Side::Left});
      if (col == nx - 1) boundary_sides_.push_back({id, Side::Right});
      if (row == 0) boundary_sides_.push_back({id, Side::Bottom});
      if (row == ny - 1) boundary_sides_.push_back({id, Side::Top});
    }
  }
}

double Mesh::column_center(int col) const {
  const auto c = static_cast<std::size_t>(col);
  return 0.5 * (x_lines_.at(c) + x_lines_.at(c + 1));
}

double Mesh::row_center(int row) const {
  const auto r = static_cast<std::size_t>(row);
  return 0.5 * (y_lines_.at(r) + y_lines_.at(r + 1));
}

bool Mesh::is_boundary(int element, Side side) const {
  const Element& e = this->element(element);
  switch (side) {
    case Side::Left: return e.col == 0;
    case Side::Right: return e.col == spec_.nx - 1;
    case Side::Bottom: return e.row == 0;
    case Side::Top: return e.row == spec_.ny - 1;
  }
  return false;
}

std::string Mesh::summary() const {
  std::ostringstream out;
  out.precision(12);
  const Rect& d = domain();
  out << "domain " << d.x_min << ' ' << d.x_max << ' ' << d.y_min << ' ' << d.y_max << '\n';
  out << "elements " << nx() << " x " << ny() << " = " << size() << '\n';
  out << "vertical_edges " << vertical_edges_.size() << '\n';
  out << "horizontal_edges " << horizontal_edges_.size() << '\n';
  out << "boundary_sides " << boundary_sides_.size() << '\n';
  if (spec_.scaling) out << "scaling rows " << spec_.scaling->rows << " factor " << spec_.scaling->factor << '\n';
  out << "column_widths";
  for (double w : widths_) out << ' ' << w;
  out << "\nrow_heights";
  for (double h : heights_) out << ' ' << h;
  out << '\n';
  return out.str();
}

Mesh build_mesh(const MeshSpec& spec) { return Mesh(spec); }

namespace {

// Index of the cell containing v; values on an interior grid line go to the
// lower cell.
int cell_index(const std::vector<double>& lines, double v) {
  auto it = std::lower_bound(lines.begin() + 1, lines.end(), v);
  const int n = static_cast<int>(lines.size()) - 1;
  const int idx = static_cast<int>(it - (lines.begin() + 1));
  return std::clamp(idx, 0, n - 1);
}

}  // namespace

Located locate_element(const Mesh& mesh, const Point& p) {
  if (!mesh.domain().contains(p)) throw std::out_of_range("point outside the mesh domain");
  const int col = cell_index(mesh.x_lines(), p.x);
  const int row = cell_index(mesh.y_lines(), p.y);
  const int id = mesh.element_id(col, row);
  const Point c = mesh.element(id).center();
  return {id, {p.x - c.x, p.y - c.y}};
}

SkeletonLine skeleton_line(const Mesh& mesh, Axis orientation, int index) {
  SkeletonLine line;
  line.orientation = orientation;
  line.index = index;
  if (orientation == Axis::X) {
    if (index < 0 || index >= mesh.ny()) throw std::out_of_range("skeleton row out of range");
    line.coordinate = mesh.row_center(index);
    for (int col = 0; col < mesh.nx(); ++col) line.elements.push_back(mesh.element_id(col, index));
  } else {
    if (index < 0 || index >= mesh.nx()) throw std::out_of_range("skeleton column out of range");
    line.coordinate = mesh.column_center(index);
    for (int row = 0; row < mesh.ny(); ++row) line.elements.push_back(mesh.element_id(index, row));
  }
  return line;
}

std::vector<SkeletonLine> skeleton_lines(const Mesh& mesh) {
  std::vector<SkeletonLine> lines;
  lines.reserve(static_cast<std::size_t>(mesh.nx() + mesh.ny()));
  for (int row = 0; row < mesh.ny(); ++row) lines.push_back(skeleton_line(mesh, Axis::X, row));
  for (int col = 0; col < mesh.nx(); ++col) lines.push_back(skeleton_line(mesh, Axis::Y, col));
  return lines;
}

SkeletonLine nearest_skeleton_line(const Mesh& mesh, Axis orientation, double coordinate) {
  const int n = orientation == Axis::X ? mesh.ny() : mesh.nx();
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double c = orientation == Axis::X ? mesh.row_center(i) : mesh.column_center(i);
    const double dist = std::abs(c - coordinate);
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return skeleton_line(mesh, orientation, best);
}

}  // namespace mms
