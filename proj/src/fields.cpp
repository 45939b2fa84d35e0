#include "mms/fields.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mms {

SectionSample<double> element_section(const Solution& sol, const Mesh& mesh, int element, Axis axis, double t) {
  const ElementGeometry<double> g = mesh.geometry(element, sol.material.D, sol.material.nu);
  const auto& cc = shared_coupling_cache().get(g);
  return evaluate_section(g, cc, sol.inlet(element), sol.loads.at(static_cast<std::size_t>(element)), axis, t);
}

LineSamples sample_line(const Solution& sol, const Mesh& mesh, const SkeletonLine& line, int resolution) {
  if (resolution < 2) throw std::invalid_argument("line sampling needs at least 2 points per element");
  const int count = line.orientation == Axis::X ? mesh.ny() : mesh.nx();
  if (line.index < 0 || line.index >= count || line.elements.empty())
    throw std::out_of_range("skeleton line is not part of this mesh");

  LineSamples out;
  out.line = line;
  SectionVector<double> previous_outlet;
  bool have_previous = false;
  for (int id : line.elements) {
    const Element& e = mesh.element(id);
    const double span = line.orientation == Axis::X ? e.a : e.b;
    for (int i = 0; i < resolution; ++i) {
      const double t = i == resolution - 1 ? span : span * i / (resolution - 1);
      const SectionSample<double> s = element_section(sol, mesh, id, line.orientation, t);
      if (i == 0 && have_previous) {
        const SectionVector<double> diff = (s.vector() - previous_outlet).cwiseAbs();
        for (int k = 0; k < 6; ++k) out.edge_jump[static_cast<std::size_t>(k)] = std::max(out.edge_jump[static_cast<std::size_t>(k)], diff(k));
        continue;
      }
      FieldSample fs;
      fs.x = line.orientation == Axis::X ? e.x0 + t : line.coordinate;
      fs.y = line.orientation == Axis::X ? line.coordinate : e.y0 + t;
      fs.values = s;
      out.samples.push_back(fs);
      if (i == resolution - 1) {
        previous_outlet = s.vector();
        have_previous = true;
      }
    }
  }
  return out;
}

PointSample sample_point(const Solution& sol, const Mesh& mesh, const Point& p, Axis orientation) {
  const Located loc = locate_element(mesh, p);
  const Element& e = mesh.element(loc.element);
  PointSample ps;
  ps.line = orientation;
  if (orientation == Axis::X) {
    ps.offset = std::abs(loc.offset.y);
    ps.sample.x = p.x;
    ps.sample.y = e.y0 + e.b / 2;
    ps.sample.values = element_section(sol, mesh, loc.element, Axis::X, std::clamp(p.x - e.x0, 0.0, e.a));
  } else {
    ps.offset = std::abs(loc.offset.x);
    ps.sample.x = e.x0 + e.a / 2;
    ps.sample.y = p.y;
    ps.sample.values = element_section(sol, mesh, loc.element, Axis::Y, std::clamp(p.y - e.y0, 0.0, e.b));
  }
  return ps;
}

PointSample sample_point(const Solution& sol, const Mesh& mesh, const Point& p) {
  const Located loc = locate_element(mesh, p);
  const Axis axis = std::abs(loc.offset.y) <= std::abs(loc.offset.x) ? Axis::X : Axis::Y;
  return sample_point(sol, mesh, p, axis);
}

EnergyReport total_energy(const Solution& sol, const Mesh& mesh) {
  EnergyReport r;
  r.per_element.resize(static_cast<std::size_t>(mesh.size()));
  for (const Element& el : mesh.elements()) {
    const ElementGeometry<double> g = mesh.geometry(el.id, sol.material.D, sol.material.nu);
    const double e = element_energy(g, shared_coupling_cache().get(g), sol.inlet(el.id),
                                    sol.loads[static_cast<std::size_t>(el.id)]);
    r.per_element[static_cast<std::size_t>(el.id)] = e;
    r.total += e;
  }
  return r;
}

ErrorNorms compare_to_reference(const Solution& sol, const Mesh& mesh, const AnalyticSurface& s,
                                const std::vector<SkeletonLine>& lines, int resolution) {
  ErrorNorms n;
  double sw = 0, st = 0, sm = 0;
  for (const SkeletonLine& line : lines) {
    for (const FieldSample& fs : sample_line(sol, mesh, line, resolution).samples) {
      const SurfaceJet j = s.jet(fs.x, fs.y);
      const bool x_line = line.orientation == Axis::X;
      const double dw = std::abs(fs.values.w - j.w);
      const double dt = std::abs(fs.values.theta_n - (x_line ? j.wx : j.wy));
      const double dm = std::abs(fs.values.m_n - (x_line ? j.wxx : j.wyy));
      n.max_w = std::max(n.max_w, dw);
      n.max_theta = std::max(n.max_theta, dt);
      n.max_mn = std::max(n.max_mn, dm);
      sw += dw * dw;
      st += dt * dt;
      sm += dm * dm;
      ++n.samples;
    }
  }
  if (n.samples > 0) {
    const double c = static_cast<double>(n.samples);
    n.rms_w = std::sqrt(sw / c);
    n.rms_theta = std::sqrt(st / c);
    n.rms_mn = std::sqrt(sm / c);
  }
  return n;
}

namespace {

void put(std::ostream& out, double v) {
  // Normalize negative zero so repeated runs print identically.
  out << (v == 0.0 ? 0.0 : v);
}

}  // namespace

void write_line_csv(const LineSamples& samples, std::ostream& out) {
  out << "x,y,w,theta_n,theta_tau,m_n,m_tau,q\n";
  out.precision(12);
  for (const FieldSample& fs : samples.samples) {
    const double vals[8] = {fs.x, fs.y, fs.values.w, fs.values.theta_n, fs.values.theta_tau,
                            fs.values.m_n, fs.values.m_tau, fs.values.q};
    for (int i = 0; i < 8; ++i) {
      if (i) out << ',';
      put(out, vals[i]);
    }
    out << '\n';
  }
}

void write_grid_csv(const Solution& sol, const Mesh& mesh, std::ostream& out) {
  out << "x,y,w\n";
  out.precision(12);
  for (const Element& e : mesh.elements()) {
    const Point c = e.center();
    const SectionSample<double> s = element_section(sol, mesh, e.id, Axis::X, e.a / 2);
    put(out, c.x);
    out << ',';
    put(out, c.y);
    out << ',';
    put(out, s.w);
    out << '\n';
  }
}

}  // namespace mms
