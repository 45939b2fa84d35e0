#include "mms/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string_view>

namespace mms {

const char* workflow_name(Workflow w) {
  switch (w) {
    case Workflow::ValidateCorner: return "validate-corner";
    case Workflow::Blend: return "blend";
    case Workflow::Reconstruct: return "reconstruct";
    case Workflow::Report: return "report";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> to_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<Side> parse_side(std::string_view s) {
  const std::string v = lower(s);
  if (v == "left") return Side::Left;
  if (v == "right") return Side::Right;
  if (v == "bottom") return Side::Bottom;
  if (v == "top") return Side::Top;
  return std::nullopt;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"", {"workflow"}},
      {"mesh", {"nx", "ny", "domain", "scaling_rows", "scaling_factor"}},
      {"material", {"D", "nu"}},
      {"load", {"q"}},
      {"boundary", {"surface", "table", "data", "left", "right", "bottom", "top", "corner"}},
      {"reference", {"surface"}},
      {"constraints", {"file", "zeta", "cutoff"}},
      {"output", {"dir", "resolution", "lines", "probes", "matrix", "mesh_summary"}},
  };
  return keys;
}

class ConfigReader {
 public:
  ConfigReader(std::string name, std::filesystem::path base) : name_(std::move(name)), base_(std::move(base)) {}

  [[noreturn]] void fail(int line, const std::string& msg) const {
    if (line > 0) throw ConfigError(name_ + ":" + std::to_string(line) + ": " + msg);
    throw ConfigError(name_ + ": " + msg);
  }

  RunConfig read(const std::string& text) {
    RunConfig c;
    c.source = name_;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(n, "malformed section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (!known_keys().count(section)) fail(n, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(n, "expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) fail(n, "missing key before '='");
      if (value.empty()) fail(n, "empty value for '" + key + "'");
      if (!known_keys().at(section).count(key))
        fail(n, "unknown key '" + key + "' " + (section.empty() ? std::string("at top level") : "in [" + section + "]"));
      const std::string full = section.empty() ? key : section + "." + key;
      if (auto it = lines_.find(full); it != lines_.end())
        fail(n, "duplicate key '" + full + "' (first set on line " + std::to_string(it->second) + ")");
      lines_[full] = n;
      apply(c, full, value, n);
    }
    finish(c);
    return c;
  }

 private:
  double number(const std::string& v, int line, const std::string& key) const {
    const auto d = to_double(v);
    if (!d) fail(line, "malformed number '" + v + "' for '" + key + "'");
    return *d;
  }

  int integer(const std::string& v, int line, const std::string& key) const {
    const auto i = to_int(v);
    if (!i) fail(line, "malformed integer '" + v + "' for '" + key + "'");
    return *i;
  }

  bool flag(const std::string& v, int line, const std::string& key) const {
    const std::string s = lower(v);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    fail(line, "expected true or false for '" + key + "', got '" + v + "'");
  }

  std::filesystem::path file(const std::string& v) const {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base_ / p;
  }

  std::string surface_id(const std::string& v, int line) const {
    const auto ids = surface_ids();
    if (std::find(ids.begin(), ids.end(), v) == ids.end()) fail(line, "unknown surface '" + v + "'");
    return v;
  }

  void apply(RunConfig& c, const std::string& key, const std::string& v, int line) {
    if (key == "workflow") {
      if (v == "validate-corner") c.workflow = Workflow::ValidateCorner;
      else if (v == "blend") c.workflow = Workflow::Blend;
      else if (v == "reconstruct") c.workflow = Workflow::Reconstruct;
      else if (v == "report") c.workflow = Workflow::Report;
      else fail(line, "unknown workflow '" + v + "'");
    } else if (key == "mesh.nx" || key == "mesh.ny") {
      const int n = integer(v, line, key);
      if (n < 1) fail(line, key + " must be at least 1");
      (key == "mesh.nx" ? c.nx : c.ny) = n;
    } else if (key == "mesh.domain") {
      const auto parts = split(v, ',');
      if (parts.size() != 4) fail(line, "domain needs four numbers: x_min, x_max, y_min, y_max");
      Rect r{number(parts[0], line, key), number(parts[1], line, key), number(parts[2], line, key),
             number(parts[3], line, key)};
      if (!(r.x_max > r.x_min && r.y_max > r.y_min)) fail(line, "domain is empty");
      c.domain = r;
    } else if (key == "mesh.scaling_rows") {
      if (!c.scaling) c.scaling = BoundaryScaling{};
      c.scaling->rows = integer(v, line, key);
      if (c.scaling->rows < 1) fail(line, "scaling_rows must be at least 1");
    } else if (key == "mesh.scaling_factor") {
      if (!c.scaling) c.scaling = BoundaryScaling{};
      c.scaling->factor = number(v, line, key);
      if (!(c.scaling->factor > 0 && c.scaling->factor <= 1)) fail(line, "scaling_factor must lie in (0, 1]");
    } else if (key == "material.D") {
      c.material.D = number(v, line, key);
      if (!(c.material.D > 0)) fail(line, "D must be positive");
    } else if (key == "material.nu") {
      c.material.nu = number(v, line, key);
      if (!(c.material.nu >= 0 && c.material.nu < 0.5)) fail(line, "nu must lie in [0, 0.5)");
    } else if (key == "load.q") {
      c.q = number(v, line, key);
    } else if (key == "boundary.surface") {
      c.surface = surface_id(v, line);
    } else if (key == "boundary.table") {
      c.boundary_table = file(v);
    } else if (key == "boundary.data") {
      if (v == "kinematic") c.data = BoundaryDataKind::Kinematic;
      else if (v == "curvature") c.data = BoundaryDataKind::Curvature;
      else fail(line, "boundary data must be 'kinematic' or 'curvature'");
    } else if (key == "boundary.left" || key == "boundary.right" || key == "boundary.bottom" || key == "boundary.top") {
      const Side side = *parse_side(key.substr(9));
      if (v == "data") c.sides[side] = SideKind::Data;
      else if (v == "clamped") c.sides[side] = SideKind::Clamped;
      else if (v == "free") c.sides[side] = SideKind::Free;
      else fail(line, "side condition must be 'data', 'clamped' or 'free'");
    } else if (key == "boundary.corner") {
      if (v == "B") c.corner = CornerVariant::B;
      else if (v == "BA") c.corner = CornerVariant::BA;
      else if (v == "BAM") c.corner = CornerVariant::BAM;
      else fail(line, "corner variant must be B, BA or BAM");
    } else if (key == "reference.surface") {
      c.reference = surface_id(v, line);
    } else if (key == "constraints.file") {
      c.constraints_file = file(v);
    } else if (key == "constraints.zeta") {
      c.zeta = number(v, line, key);
      if (!(*c.zeta > 0)) fail(line, "zeta must be positive");
    } else if (key == "constraints.cutoff") {
      c.cutoff = number(v, line, key);
      if (!(*c.cutoff > 0)) fail(line, "cutoff must be positive");
    } else if (key == "output.dir") {
      c.output = file(v);
    } else if (key == "output.resolution") {
      c.resolution = integer(v, line, key);
      if (c.resolution < 2) fail(line, "resolution must be at least 2");
    } else if (key == "output.lines") {
      for (const std::string& item : split(v, ';')) {
        const auto eq = item.find('=');
        const std::string axis = eq == std::string::npos ? item : std::string(trim(std::string_view(item).substr(0, eq)));
        if (eq == std::string::npos || (axis != "x" && axis != "y"))
          fail(line, "line '" + item + "' must look like 'y = 0' or 'x = 0.5'");
        // y = c is a row line (X-section), x = c a column line.
        c.lines.emplace_back(axis == "y" ? Axis::X : Axis::Y, number(item.substr(eq + 1), line, key));
      }
    } else if (key == "output.probes") {
      for (const std::string& item : split(v, ';')) {
        const auto xy = split(item, ',');
        if (xy.size() != 2) fail(line, "probe '" + item + "' must be 'x, y'");
        c.probes.push_back({number(xy[0], line, key), number(xy[1], line, key)});
      }
    } else if (key == "output.matrix") {
      c.write_matrix = flag(v, line, key);
    } else if (key == "output.mesh_summary") {
      c.write_mesh_summary = flag(v, line, key);
    }
  }

  int line_of(const std::string& key) const {
    auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
  }

  void finish(RunConfig& c) const {
    if (!lines_.count("workflow")) fail(0, "missing required key 'workflow'");
    if (!lines_.count("mesh.nx")) fail(0, "missing required key [mesh] nx");
    if (!lines_.count("mesh.ny")) fail(0, "missing required key [mesh] ny");

    if (c.surface && c.boundary_table)
      fail(line_of("boundary.table"), "boundary surface (line " + std::to_string(line_of("boundary.surface")) +
                                          ") and boundary table are mutually exclusive");
    const bool has_source = c.surface || c.boundary_table;

    if (c.corner) {
      if (c.workflow != Workflow::ValidateCorner)
        fail(line_of("boundary.corner"), "corner supports are only used by the validate-corner workflow");
      if (has_source || !c.sides.empty())
        fail(line_of("boundary.corner"), "conflicting boundary assignments: the corner plate fixes every side");
    }
    for (const auto& [side, kind] : c.sides)
      if (kind == SideKind::Data && !has_source)
        fail(line_of(std::string("boundary.") + lower(side_name(side))),
             "side uses boundary data but no surface or table is given");

    switch (c.workflow) {
      case Workflow::ValidateCorner:
        if (!c.corner) fail(0, "validate-corner needs [boundary] corner");
        if (c.q == 0) fail(line_of("load.q"), "validate-corner needs a nonzero load [load] q");
        if (c.constraints_file) fail(line_of("constraints.file"), "validate-corner takes no point constraints");
        break;
      case Workflow::Blend:
        if (c.constraints_file) fail(line_of("constraints.file"), "blend takes no point constraints; use reconstruct");
        break;
      case Workflow::Reconstruct:
        if (!c.constraints_file) fail(0, "reconstruct needs [constraints] file");
        break;
      case Workflow::Report:
        if (!c.surface && !c.reference) fail(0, "report needs [boundary] surface or [reference] surface");
        break;
    }
    if ((c.zeta || c.cutoff) && !c.constraints_file)
      fail(line_of(c.zeta ? "constraints.zeta" : "constraints.cutoff"), "zeta and cutoff need a constraint file");

    for (const auto& [key, path] : {std::pair{std::string("boundary.table"), c.boundary_table},
                                    std::pair{std::string("constraints.file"), c.constraints_file}})
      if (path && !std::filesystem::exists(*path)) fail(line_of(key), "file not found: " + path->string());
  }

  std::string name_;
  std::filesystem::path base_;
  std::map<std::string, int> lines_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Rows of comma-separated values with `#` comments and an optional header
// (a first row without any number).
template <class Row>
void for_each_csv_row(const std::string& text, const std::string& name, std::size_t columns, Row&& row) {
  std::istringstream in(text);
  std::string raw;
  int n = 0;
  bool first = true;
  while (std::getline(in, raw)) {
    ++n;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != columns)
      throw ConfigError(name + ":" + std::to_string(n) + ": expected " + std::to_string(columns) + " columns, got " +
                        std::to_string(cells.size()));
    const bool header =
        first && std::none_of(cells.begin(), cells.end(), [](const std::string& c) { return to_double(c).has_value(); });
    first = false;
    if (header) continue;
    row(cells, n);
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base, const std::string& name) {
  return ConfigReader(name, base).read(text);
}

RunConfig parse_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return parse_config_text(text, path.parent_path().empty() ? "." : path.parent_path(), path.string());
}

std::vector<PointConstraint> parse_constraints(const std::string& text, const std::string& name) {
  std::vector<PointConstraint> out;
  for_each_csv_row(text, name, 3, [&](const std::vector<std::string>& cells, int n) {
    double v[3];
    for (int i = 0; i < 3; ++i) {
      const auto d = to_double(cells[static_cast<std::size_t>(i)]);
      if (!d) throw ConfigError(name + ":" + std::to_string(n) + ": malformed number '" + cells[static_cast<std::size_t>(i)] + "'");
      v[i] = *d;
    }
    out.push_back(PointConstraint{{v[0], v[1]}, v[2], std::nullopt, std::nullopt});
  });
  return out;
}

std::vector<PointConstraint> read_constraints(const std::filesystem::path& path) {
  return parse_constraints(read_file(path), path.string());
}

BoundaryTable parse_boundary_table(const std::string& text, const std::string& name) {
  BoundaryTable table;
  for_each_csv_row(text, name, 5, [&](const std::vector<std::string>& cells, int n) {
    const auto side = parse_side(cells[0]);
    if (!side) throw ConfigError(name + ":" + std::to_string(n) + ": unknown side '" + cells[0] + "'");
    double v[4];
    for (int i = 0; i < 4; ++i) {
      const auto d = to_double(cells[static_cast<std::size_t>(i + 1)]);
      if (!d) throw ConfigError(name + ":" + std::to_string(n) + ": malformed number '" + cells[static_cast<std::size_t>(i + 1)] + "'");
      v[i] = *d;
    }
    table[*side].push_back({v[0], v[1], v[2], v[3]});
  });
  return table;
}

BoundaryTable read_boundary_table(const std::filesystem::path& path) {
  return parse_boundary_table(read_file(path), path.string());
}

namespace {

Rect resolve_domain(const RunConfig& c) {
  if (c.domain) return *c.domain;
  if (c.surface) return surface(*c.surface).domain;
  if (c.reference) return surface(*c.reference).domain;
  return Rect{0, 1, 0, 1};
}

}  // namespace

BoundarySpec build_boundary(const RunConfig& c, const Mesh& mesh) {
  if (c.corner) return corner_plate_boundary(mesh, *c.corner);

  std::optional<AnalyticSurface> s;
  if (c.surface) s = surface(*c.surface);
  std::optional<BoundaryTable> table;
  if (c.boundary_table) table = sorted_table(read_boundary_table(*c.boundary_table));

  BoundarySpec spec;
  for (const BoundarySide& bs : mesh.boundary_sides()) {
    SideKind kind = s || table ? SideKind::Data : SideKind::Clamped;
    if (auto it = c.sides.find(bs.side); it != c.sides.end()) kind = it->second;
    switch (kind) {
      case SideKind::Clamped:
        spec.assign(bs.element, bs.side, PrescribedKinematic{});
        break;
      case SideKind::Free:
        spec.assign(bs.element, bs.side, FreeEdge{});
        break;
      case SideKind::Data:
        if (s) {
          spec.assign(bs.element, bs.side,
                      sample_boundary_data(*s, side_midpoint(mesh.element(bs.element), bs.side), bs.side, c.data,
                                           c.material.D, c.material.nu));
        } else {
          auto it = table->find(bs.side);
          if (it == table->end())
            throw ConfigError(c.boundary_table->string() + ": no rows for the " + side_name(bs.side) + " side");
          spec.assign(bs.element, bs.side,
                      tabulated_condition(interpolate_boundary(it->second, boundary_arclength(mesh, bs)), c.data));
        }
        break;
    }
  }
  return spec;
}

RunResult execute(const RunConfig& c) {
  RunResult r{Mesh(MeshSpec{resolve_domain(c), c.nx, c.ny, c.scaling})};
  r.config = c;
  if (c.reference) r.reference = surface(*c.reference);
  else if (c.surface) r.reference = surface(*c.surface);

  const Rect& d = r.mesh.domain();
  if (c.workflow == Workflow::Report) {
    for (const Point& p : c.probes) {
      ProbeResult pr;
      pr.requested = p;
      pr.sample.sample.x = p.x;
      pr.sample.sample.y = p.y;
      if (d.contains(p)) pr.reference = r.reference->jet(p.x, p.y);
      r.probes.push_back(pr);
    }
    return r;
  }

  const BoundarySpec boundary = build_boundary(c, r.mesh);
  if (c.constraints_file) {
    r.constraints = read_constraints(*c.constraints_file);
    for (PointConstraint& pc : r.constraints) {
      pc.zeta = c.zeta;
      pc.cutoff = c.cutoff;
    }
  }
  GlobalSystem system = assemble(r.mesh, boundary, r.constraints, c.q, c.material);
  r.solution = solve(system);
  if (c.write_matrix) r.system = std::move(system);
  const Solution& sol = *r.solution;

  r.energy = total_energy(sol, r.mesh);

  std::vector<std::pair<Axis, double>> lines = c.lines;
  if (lines.empty()) {
    lines.emplace_back(Axis::X, (d.y_min + d.y_max) / 2);
    lines.emplace_back(Axis::Y, (d.x_min + d.x_max) / 2);
  }
  std::vector<SkeletonLine> skeleton;
  for (const auto& [axis, coordinate] : lines) {
    skeleton.push_back(nearest_skeleton_line(r.mesh, axis, coordinate));
    r.lines.push_back(sample_line(sol, r.mesh, skeleton.back(), c.resolution));
  }

  for (const Point& p : c.probes) {
    ProbeResult pr;
    pr.requested = p;
    pr.sample = sample_point(sol, r.mesh, p);
    if (r.reference && r.reference->domain.contains(p)) pr.reference = r.reference->jet(p.x, p.y);
    r.probes.push_back(pr);
  }

  if (c.workflow == Workflow::ValidateCorner) {
    const double lx = d.lx();
    for (const CornerTableRow& row : exact_corner_table()) {
      const Point p{d.x_min + row.x_rel * lx, d.y_min + row.y_rel * d.ly()};
      const PointSample w = sample_point(sol, r.mesh, p);
      const PointSample mx = sample_point(sol, r.mesh, p, Axis::X);
      const PointSample my = sample_point(sol, r.mesh, p, Axis::Y);
      CornerRowResult cr;
      cr.exact = row;
      cr.deflection = c.material.D * w.sample.values.w / (c.q * std::pow(lx, 4));
      cr.moment_x = -mx.sample.values.m_n / (c.q * lx * lx);
      cr.moment_y = -my.sample.values.m_n / (c.q * lx * lx);
      cr.offset_x = mx.offset;
      cr.offset_y = my.offset;
      r.corner_rows.push_back(cr);
    }
  } else if (r.reference) {
    r.norms = compare_to_reference(sol, r.mesh, *r.reference, skeleton, c.resolution);
  }
  return r;
}

namespace {

struct Num {
  double v;
  int precision = 10;
};

std::ostream& operator<<(std::ostream& out, Num n) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(n.precision) << (n.v == 0.0 ? 0.0 : n.v);
  out.flags(flags);
  out.precision(prec);
  return out;
}

const char* variant_name(CornerVariant v) {
  switch (v) {
    case CornerVariant::B: return "B";
    case CornerVariant::BA: return "BA";
    case CornerVariant::BAM: return "BAM";
  }
  return "?";
}

void write_sample(std::ostream& out, const SectionSample<double>& s) {
  out << "w " << Num{s.w} << " theta_n " << Num{s.theta_n} << " theta_tau " << Num{s.theta_tau} << " m_n "
      << Num{s.m_n} << " m_tau " << Num{s.m_tau} << " q " << Num{s.q};
}

}  // namespace

std::string format_report(const RunResult& r) {
  const RunConfig& c = r.config;
  const Rect& d = r.mesh.domain();
  std::ostringstream out;
  out << "workflow " << workflow_name(c.workflow) << "\n";
  out << "mesh " << r.mesh.nx() << " x " << r.mesh.ny() << " domain [" << Num{d.x_min} << ", " << Num{d.x_max}
      << "] x [" << Num{d.y_min} << ", " << Num{d.y_max} << "]";
  if (c.scaling) out << " scaling rows " << c.scaling->rows << " factor " << Num{c.scaling->factor};
  out << "\n";
  out << "material D " << Num{c.material.D} << " nu " << Num{c.material.nu} << "\n";
  out << "load q " << Num{c.q} << "\n";
  if (c.corner) {
    out << "boundary corner plate " << variant_name(*c.corner) << "\n";
  } else if (c.workflow != Workflow::Report) {
    if (c.surface) out << "boundary surface " << *c.surface;
    else if (c.boundary_table) out << "boundary table " << c.boundary_table->filename().string();
    else out << "boundary clamped";
    out << (c.data == BoundaryDataKind::Kinematic ? " kinematic" : " curvature");
    for (const auto& [side, kind] : c.sides)
      out << " " << side_name(side) << "=" << (kind == SideKind::Data ? "data" : kind == SideKind::Free ? "free" : "clamped");
    out << "\n";
  }

  if (r.reference) {
    out << "reference " << r.reference->id;
    out << " energy midpoint " << Num{midpoint_energy(*r.reference, r.mesh)};
    out << " quadrature " << Num{quadrature_energy(*r.reference)};
    if (r.reference->known_energy) out << " published " << Num{*r.reference->known_energy};
    out << "\n";
  }

  if (c.workflow == Workflow::Report) {
    if (r.reference) {
      const Point mid{(d.x_min + d.x_max) / 2, (d.y_min + d.y_max) / 2};
      out << "biharmonic residual at center " << Num{biharmonic_residual(*r.reference, mid), 6} << "\n";
      if (r.reference->id == "multipeak") {
        out << "extrema\n";
        for (const Point& p : multipeak_extrema())
          out << "  " << Num{p.x, 17} << ", " << Num{p.y, 17} << ", " << Num{r.reference->jet(p.x, p.y).w, 17} << "\n";
      }
    }
    for (const ProbeResult& p : r.probes) {
      out << "probe " << Num{p.requested.x} << ", " << Num{p.requested.y};
      if (p.reference) out << " reference w " << Num{p.reference->w} << " wx " << Num{p.reference->wx} << " wy " << Num{p.reference->wy};
      out << "\n";
    }
    return out.str();
  }

  const Solution& sol = *r.solution;
  out << "constraints " << r.constraints.size();
  if (c.zeta) out << " zeta " << Num{*c.zeta};
  if (c.cutoff) out << " cutoff " << Num{*c.cutoff};
  out << "\n";
  out << "unknowns " << sol.unknowns.size() << " reduced " << sol.diagnostics.reduced_unknowns << "\n";
  out << "residual " << Num{sol.diagnostics.max_relative_residual, 3} << "\n";
  out << "condition estimate " << Num{sol.diagnostics.condition_estimate, 3} << "\n";
  out << "energy " << Num{r.energy.total} << "\n";

  for (std::size_t k = 0; k < r.constraints.size(); ++k) {
    const PointConstraint& pc = r.constraints[k];
    const PointSample s = sample_point(sol, r.mesh, pc.location);
    out << "constraint " << k << " at " << Num{pc.location.x} << ", " << Num{pc.location.y} << " target "
        << Num{pc.target} << " solved " << Num{s.sample.values.w} << " multiplier " << Num{sol.multipliers[k]} << "\n";
  }

  for (const ProbeResult& p : r.probes) {
    out << "probe " << Num{p.requested.x} << ", " << Num{p.requested.y} << " line "
        << (p.sample.line == Axis::X ? "x" : "y") << " offset " << Num{p.sample.offset, 3} << ": ";
    write_sample(out, p.sample.sample.values);
    out << "\n";
    if (p.reference) {
      const bool x = p.sample.line == Axis::X;
      out << "  reference w " << Num{p.reference->w} << " theta_n " << Num{x ? p.reference->wx : p.reference->wy}
          << " m_n " << Num{x ? p.reference->wxx : p.reference->wyy} << "\n";
    }
  }

  if (!r.corner_rows.empty()) {
    out << "corner plate (D W / q lx^4, M / q lx^2; exact in parentheses)\n";
    for (const CornerRowResult& row : r.corner_rows) {
      out << "  y " << Num{row.exact.y_rel} << " x " << Num{row.exact.x_rel} << ": W " << Num{row.deflection, 6}
          << " (" << Num{row.exact.deflection, 6} << ") Mx " << Num{row.moment_x, 6} << " ("
          << Num{row.exact.moment_x, 6} << ") My " << Num{row.moment_y, 6} << " (" << Num{row.exact.moment_y, 6} << ")";
      if (row.offset_x > 0 || row.offset_y > 0)
        out << " line offsets " << Num{row.offset_x, 3} << " " << Num{row.offset_y, 3};
      out << "\n";
    }
  }

  for (const LineSamples& ls : r.lines) {
    out << "line " << (ls.line.orientation == Axis::X ? "y = " : "x = ") << Num{ls.line.coordinate} << " jumps";
    for (double j : ls.edge_jump) out << " " << Num{j, 3};
    out << "\n";
  }
  if (r.norms) {
    out << "error vs reference: w max " << Num{r.norms->max_w, 6} << " rms " << Num{r.norms->rms_w, 6}
        << "; theta max " << Num{r.norms->max_theta, 6} << " rms " << Num{r.norms->rms_theta, 6} << "; m_n max "
        << Num{r.norms->max_mn, 6} << " rms " << Num{r.norms->rms_mn, 6} << " (" << r.norms->samples << " samples)\n";
  }
  return out.str();
}

std::string format_energy(const RunResult& r) {
  std::ostringstream out;
  if (r.solution) {
    const auto& e = r.energy.per_element;
    out << "total " << Num{r.energy.total, 12} << "\n";
    out << "elements " << e.size() << "\n";
    if (!e.empty()) {
      const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
      out << "min " << Num{*lo, 12} << "\n";
      out << "max " << Num{*hi, 12} << "\n";
      out << "mean " << Num{r.energy.total / static_cast<double>(e.size()), 12} << "\n";
    }
  }
  if (r.reference) {
    out << "reference_midpoint " << Num{midpoint_energy(*r.reference, r.mesh), 12} << "\n";
    if (r.reference->known_energy) out << "reference_published " << Num{*r.reference->known_energy, 12} << "\n";
  }
  return out.str();
}

void write_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
  };
  if (r.solution) {
    std::filesystem::create_directories(dir / "solution_lines");
    for (const LineSamples& ls : r.lines) {
      const std::string name = (ls.line.orientation == Axis::X ? "row_" : "col_") + std::to_string(ls.line.index) + ".csv";
      auto f = open(dir / "solution_lines" / name);
      write_line_csv(ls, f);
    }
    auto grid = open(dir / "grid.csv");
    write_grid_csv(*r.solution, r.mesh, grid);
  }
  open(dir / "energy.txt") << format_energy(r);
  open(dir / "report.txt") << format_report(r);
  if (r.system) {
    auto f = open(dir / "matrix.txt");
    write_matrix(*r.system, f);
  }
  if (r.config.write_mesh_summary) open(dir / "mesh.txt") << r.mesh.summary();
}

}  // namespace mms
