// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.
// Runs the shipped configs; the 251 x 251 cases take several minutes in total.

#include "mms/cli.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace mms;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  std::string what;
  bool ok = true;
};

class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  // |got - want| <= tol
  void near(const std::string& label, double got, double want, double tol) {
    std::ostringstream s;
    s << std::setprecision(8) << label << ": " << got << " vs " << want << " (tol " << std::setprecision(3) << tol
      << ")";
    add(s.str(), std::abs(got - want) <= tol);
  }
  // |got - want| <= rel |want|
  void relative(const std::string& label, double got, double want, double rel) {
    std::ostringstream s;
    s << std::setprecision(10) << label << ": " << got << " vs " << want << " (deviation " << std::setprecision(3)
      << 100 * std::abs(got - want) / std::abs(want) << "%, tol " << 100 * rel << "%)";
    add(s.str(), std::abs(got - want) <= rel * std::abs(want));
  }
  void at_most(const std::string& label, double got, double limit) {
    std::ostringstream s;
    s << std::setprecision(4) << label << ": " << got << " <= " << limit;
    add(s.str(), got <= limit);
  }
  void holds(const std::string& label, bool ok) { add(label, ok); }

  bool passed() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.ok; });
  }

  void print(std::ostream& out) const {
    out << (passed() ? "[PASS]" : "[FAIL]") << " criterion " << id_ << ": " << title_ << "\n";
    for (const Check& c : checks_) out << "    " << (c.ok ? "ok   " : "FAIL ") << c.what << "\n";
    out.flush();
  }

 private:
  void add(std::string what, bool ok) { checks_.push_back({std::move(what), ok}); }

  int id_;
  std::string title_;
  std::vector<Check> checks_;
};

RunConfig load(const std::string& name) {
  return parse_config(std::filesystem::path(MMS_CONFIG_DIR) / (name + ".ini"));
}

RunConfig with_mesh(RunConfig c, int n) {
  c.nx = c.ny = n;
  return c;
}

struct Timed {
  RunResult result;
  double seconds;
};

Timed run(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  RunResult r = execute(c);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  std::cerr << "  ran " << c.source.filename().string() << " " << c.nx << "x" << c.ny << " in " << std::fixed
            << std::setprecision(1) << dt.count() << " s\n"
            << std::defaultfloat;
  return {std::move(r), dt.count()};
}

const SectionSample<double>& probe(const RunResult& r, Point p) {
  for (const ProbeResult& pr : r.probes)
    if (std::abs(pr.requested.x - p.x) <= 1e-12 && std::abs(pr.requested.y - p.y) <= 1e-12) return pr.sample.sample.values;
  throw std::runtime_error("probe not configured");
}

std::string mesh_label(int n) { return std::to_string(n) + "x" + std::to_string(n); }

AnalyticSurface quadratic(double c0, double c1, double c2, double c3, double c4, double c5) {
  AnalyticSurface s;
  s.id = "quadratic";
  s.domain = {-0.7, 1.3, -0.4, 0.9};
  s.jet = [=](double x, double y) {
    return SurfaceJet{c0 + c1 * x + c2 * y + c3 * x * x + c4 * x * y + c5 * y * y,
                      c1 + 2 * c3 * x + c4 * y,
                      c2 + c4 * x + 2 * c5 * y,
                      2 * c3,
                      2 * c5,
                      c4};
  };
  return s;
}

// Largest mismatch of w / theta_n / theta_tau between the X-section at a/2 and
// the Y-section at b/2 of every element, relative to the state magnitude.
double matching_residual(const Solution& sol, const Mesh& mesh) {
  double worst = 0;
  for (const Element& e : mesh.elements()) {
    const ElementGeometry<double> g = mesh.geometry(e.id, sol.material.D, sol.material.nu);
    const CouplingCoefficients<double>& cc = shared_coupling_cache().get(g);
    const StateVector<double> z = sol.inlet(e.id);
    const double p = sol.loads[static_cast<std::size_t>(e.id)];
    const auto sx = transfer_x(g, cc, g.a / 2).apply(z, p);
    const auto sy = transfer_y(g, cc, g.b / 2).apply(z, p);
    const double scale = std::max({1.0, z.cwiseAbs().maxCoeff(), std::abs(p)});
    worst = std::max({worst, std::abs(sx(kW) - sy(kW)) / scale, std::abs(sx(kThetaN) - sy(kThetaTau)) / scale,
                      std::abs(sx(kThetaTau) - sy(kThetaN)) / scale});
  }
  return worst;
}

// Largest disagreement of any section parameter across interior edges,
// relative to the largest parameter magnitude.
double edge_continuity(const Solution& sol, const Mesh& mesh) {
  double worst = 0, scale = 1;
  auto compare = [&](int first, int second, Axis axis) {
    const double span = axis == Axis::X ? mesh.element(first).a : mesh.element(first).b;
    const SectionVector<double> out = element_section(sol, mesh, first, axis, span).vector();
    const SectionVector<double> in = element_section(sol, mesh, second, axis, 0).vector();
    worst = std::max(worst, (out - in).cwiseAbs().maxCoeff());
    scale = std::max(scale, out.cwiseAbs().maxCoeff());
  };
  for (const Edge& e : mesh.vertical_edges()) compare(e.first, e.second, Axis::X);
  for (const Edge& e : mesh.horizontal_edges()) compare(e.first, e.second, Axis::Y);
  return worst / scale;
}

// Per-parameter errors of a blended quadratic, relative to max(1, |parameter|).
std::array<double, 6> quadratic_errors(const AnalyticSurface& s, const Mesh& m, const Material& mat) {
  const BoundarySpec bs = surface_boundary(m, s, BoundaryDataKind::Kinematic, mat.D, mat.nu);
  const Solution sol = solve(assemble(m, bs, {}, 0, mat));
  std::array<double, 6> err{};
  double scale = 1;
  for (const SkeletonLine& line : skeleton_lines(m)) {
    for (const FieldSample& f : sample_line(sol, m, line, 3).samples) {
      const SurfaceJet j = s.jet(f.x, f.y);
      const bool x = line.orientation == Axis::X;
      const double wnn = x ? j.wxx : j.wyy, wtt = x ? j.wyy : j.wxx;
      const double expected[6] = {j.w, x ? j.wx : j.wy, x ? j.wy : j.wx, mat.D * (wnn + mat.nu * wtt),
                                  mat.D * (1 - mat.nu) * j.wxy, 0};
      const SectionVector<double> got = f.values.vector();
      for (int k = 0; k < 6; ++k) {
        err[static_cast<std::size_t>(k)] = std::max(err[static_cast<std::size_t>(k)], std::abs(got(k) - expected[k]));
        scale = std::max(scale, std::abs(expected[k]));
      }
    }
  }
  for (double& e : err) e /= scale;
  return err;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int main() {
  std::cout << std::setprecision(10);
  std::vector<Criterion> results;
  auto report = [&](Criterion c) {
    c.print(std::cout);
    results.push_back(std::move(c));
  };

  // Runs reused by several criteria.
  std::map<std::string, RunResult> keep;

  {
    Criterion c(1, "blending convergence, cosine-like surface, kinematic boundary data");
    const int meshes[4] = {7, 21, 31, 71};
    const double w_ref[4] = {0.9973, 0.9997, 0.9999, 1.0000};
    const double m_ref[4] = {1.0125, 1.0156, 1.0146, 1.0147};
    double seconds = 0;
    for (int i = 0; i < 4; ++i) {
      Timed t = run(with_mesh(load("cosine_biharmonic_kinematic"), meshes[i]));
      seconds += t.seconds;
      c.near("w(0,0) " + mesh_label(meshes[i]), probe(t.result, {0, 0}).w, w_ref[i], 1e-3);
      c.near("|Mn(pi/3,0)| " + mesh_label(meshes[i]), std::abs(probe(t.result, {kPi / 3, 0}).m_n), m_ref[i], 1e-3);
      if (meshes[i] == 71) keep.emplace("cosine_kinematic_71", std::move(t.result));
    }
    c.at_most("runtime [s]", seconds, 10);
    report(std::move(c));
  }

  {
    Criterion c(2, "curvature boundary data, cosine-like surface");
    double seconds = 0;
    for (auto [n, w] : {std::pair{7, 1.0062}, std::pair{71, 1.0001}}) {
      Timed t = run(with_mesh(load("cosine_biharmonic_curvature"), n));
      seconds += t.seconds;
      c.near("w(0,0) " + mesh_label(n), probe(t.result, {0, 0}).w, w, 1e-3);
      if (n == 71) keep.emplace("cosine_curvature_71", std::move(t.result));
    }
    c.at_most("runtime [s]", seconds, 10);
    report(std::move(c));
  }

  {
    Criterion c(3, "nonsymmetric biharmonic surface, kinematic boundary data");
    for (auto [n, w] : {std::pair{21, 8.1251}, std::pair{51, 8.2612}, std::pair{101, 8.2801}}) {
      Timed t = run(with_mesh(load("nonsymmetric_kinematic"), n));
      c.near("w(pi/4,0) " + mesh_label(n), probe(t.result, {kPi / 4, 0}).w, w, 5e-3);
      if (n == 21) keep.emplace("nonsymmetric_21", std::move(t.result));
    }
    Timed t = run(load("nonsymmetric_kinematic"));
    c.near("w(pi/4,0) 251x251", probe(t.result, {kPi / 4, 0}).w, 8.2855, 5e-3);
    c.near("|M(3pi/8,0)| 251x251", std::abs(probe(t.result, {3 * kPi / 8, 0}).m_n), 84.4930, 5e-3);
    report(std::move(c));
  }

  {
    Criterion c(4, "corner-supported plate, 171x171, nu = 0.3");
    double w[3];
    const char* names[3] = {"B", "BA", "BAM"};
    const double ref[3] = {0.007936, 0.008026, 0.008064};
    for (int i = 0; i < 3; ++i) {
      Timed t = run(load(std::string("corner_plate_") + names[i]));
      w[i] = t.result.corner_rows.at(7).deflection;
      c.near(std::string("D W / q lx^4 at center, ") + names[i], w[i], ref[i], 5e-5);
    }
    c.holds("ordering B < BA < BAM", w[0] < w[1] && w[1] < w[2]);
    report(std::move(c));
  }

  {
    Criterion c(5, "corner-supported plate with boundary scaling, 251x251");
    Timed t = run(load("corner_plate_scaled"));
    const auto& rows = t.result.corner_rows;
    c.near("center vs published 0.008053", rows.at(7).deflection, 0.008053, 2e-5);
    c.near("center vs exact 0.008052", rows.at(7).deflection, 0.008052, 2e-5);
    for (const CornerRowResult& row : rows) {
      std::ostringstream label;
      label << "deflection at y " << row.exact.y_rel << " ly, x " << row.exact.x_rel << " lx";
      c.near(label.str(), row.deflection, row.exact.deflection, 5e-5);
    }
    report(std::move(c));
  }

  {
    Criterion c(6, "energy values");
    c.relative("cosine-like, kinematic, 71x71", keep.at("cosine_kinematic_71").energy.total, 17.1785, 5e-4);
    c.relative("cosine-like, curvature, 71x71", keep.at("cosine_curvature_71").energy.total, 17.1821, 5e-4);
    const std::pair<const char*, double> cos_runs[] = {
        {"cos_product_boundary_only", 6.9089}, {"cos_product_center", 9.3161},
        {"cos_product_center_fine", 9.3145},   {"cos_product_center_zeta", 9.5280},
        {"cos_product_five", 9.5445},          {"cos_product_five_zeta", 9.7271},
        {"multipeak_six", 2731.5228},          {"multipeak_six_zeta", 3112.1235},
    };
    for (const auto& [name, energy] : cos_runs) {
      Timed t = run(load(name));
      c.relative(name, t.result.energy.total, energy, 5e-3);
      keep.emplace(name, std::move(t.result));
    }
    Timed t = run(load("multipeak_fifteen"));
    const double e15 = t.result.energy.total;
    std::ostringstream label;
    label << std::setprecision(10) << "multipeak_fifteen: 3112 < " << e15 << " <= 4161.9368";
    c.holds(label.str(), e15 > 3112 && e15 <= 4161.9368);
    report(std::move(c));
  }

  {
    Criterion c(7, "boundary-only blends have less energy than their generating surfaces");
    const RunResult& blend = keep.at("cos_product_boundary_only");
    const double generating = midpoint_energy(surface("cosine_product"), blend.mesh);
    std::ostringstream a;
    a << std::setprecision(8) << "cos(x) cos(y), 11x11: E_blend " << blend.energy.total << " < midpoint E_surface "
      << generating << " (exact pi^2 = " << kPi * kPi << ")";
    c.holds(a.str(), blend.energy.total < generating && blend.energy.total < kPi * kPi);

    RunConfig mp = load("multipeak_six");
    mp.workflow = Workflow::Blend;
    mp.constraints_file.reset();
    mp.zeta.reset();
    mp.cutoff.reset();
    mp.nx = mp.ny = 71;
    Timed t = run(mp);
    const double mp_surface = midpoint_energy(surface("multipeak"), t.result.mesh);
    std::ostringstream b;
    b << std::setprecision(8) << "multipeak, 71x71: E_blend " << t.result.energy.total << " < midpoint E_surface "
      << mp_surface;
    c.holds(b.str(), t.result.energy.total < mp_surface);

    Timed forced = run(load("cos_product_center_forced"));
    c.relative("forced center 0.3, 11x11", forced.result.energy.total, 8.9159, 5e-3);
    std::ostringstream d;
    d << std::setprecision(8) << "deviation penalty: " << forced.result.energy.total << " > " << blend.energy.total;
    c.holds(d.str(), forced.result.energy.total > blend.energy.total);
    report(std::move(c));
  }

  {
    Criterion c(8, "property suite");
    // (a)
    const RunResult& ns = keep.at("nonsymmetric_21");
    const RunResult& cc = keep.at("cos_product_center");
    c.at_most("(a) matching residual, nonsymmetric 21x21", matching_residual(*ns.solution, ns.mesh), 1e-10);
    c.at_most("(a) matching residual, cos(x) cos(y) with input, 11x11", matching_residual(*cc.solution, cc.mesh), 1e-10);
    // (b)
    const RunResult& ck = keep.at("cosine_kinematic_71");
    c.at_most("(b) interior edge continuity, cosine-like 71x71", edge_continuity(*ck.solution, ck.mesh), 1e-9);
    c.at_most("(b) interior edge continuity, cos(x) cos(y) with input", edge_continuity(*cc.solution, cc.mesh), 1e-9);
    c.at_most("(b) interior edge continuity, nonsymmetric 21x21", edge_continuity(*ns.solution, ns.mesh), 1e-9);
    // (c)
    struct Field {
      const char* name;
      AnalyticSurface s;
      Material mat;
    };
    const Field fields[] = {
        {"constant", quadratic(1.5, 0, 0, 0, 0, 0), {}},
        {"linear", quadratic(0.2, -0.7, 1.1, 0, 0, 0), {}},
        {"x^2", quadratic(0, 0, 0, 1, 0, 0), {}},
        {"general quadratic, D 2.5, nu 0.3", quadratic(0.3, 0.1, -0.2, 0.8, -0.5, 0.35), {2.5, 0.3}},
    };
    for (const Field& f : fields) {
      std::array<double, 6> worst{};
      for (int n : {1, 4, 7, 12}) {
        const auto e = quadratic_errors(f.s, Mesh(MeshSpec{f.s.domain, n, n + 1, std::nullopt}), f.mat);
        for (std::size_t k = 0; k < 6; ++k) worst[k] = std::max(worst[k], e[k]);
      }
      c.at_most(std::string("(c) ") + f.name + ", w / slopes / moments", *std::max_element(worst.begin(), worst.begin() + 5),
                1e-9);
      c.at_most(std::string("(c) ") + f.name + ", Q", worst[5], 1e-9);
    }
    {
      const AnalyticSurface plane = quadratic(0.2, -0.7, 1.1, 0, 0, 0);
      const Mesh m(MeshSpec{plane.domain, 9, 7, std::nullopt});
      const Solution sol = solve(assemble(m, surface_boundary(m, plane, BoundaryDataKind::Kinematic), {}));
      c.at_most("(c) linear field energy", total_energy(sol, m).total, 1e-18);
    }
    // (d)
    double identity = 0;
    for (auto [a, b, nu] : {std::tuple{1.0, 1.0, 0.0}, std::tuple{0.3, 2.0, 0.3}, std::tuple{2.5, 0.01, 0.45}}) {
      const ElementGeometry<double> g{a, b, 1.0, nu};
      const CouplingCoefficients<double> co = coupling_coefficients(g);
      Eigen::Matrix<double, 6, 12> ex = Eigen::Matrix<double, 6, 12>::Zero(), ey = ex;
      ex.leftCols<6>().setIdentity();
      ey.rightCols<6>().setIdentity();
      const TransferOperator<double> tx = transfer_x(g, co, 0.0), ty = transfer_y(g, co, 0.0);
      identity = std::max({identity, (tx.coeff - ex).cwiseAbs().maxCoeff(), (ty.coeff - ey).cwiseAbs().maxCoeff(),
                           tx.load.cwiseAbs().maxCoeff(), ty.load.cwiseAbs().maxCoeff()});
    }
    c.at_most("(d) transfer operator at coordinate 0 minus identity", identity, 1e-12);
    // (e)
    const Rect dom{-kPi / 2, kPi / 2, -kPi / 2, kPi / 2};
    const double cut = default_cutoff(dom);
    c.near("(e) kernel at d = 0", kernel_weight(0, 50, kPi, kPi, cut), 1.0, 0);
    c.near("(e) kernel at d = zeta min(lx, ly)", kernel_weight(0.1 * kPi, 0.1, kPi, kPi, cut), 0.5, 1e-15);
    c.near("(e) kernel beyond the cutoff", kernel_weight(cut * 1.0001, 50, kPi, kPi, cut), 0.0, 0);
    // (f)
    c.at_most("(f) |biharmonic residual|, cosine-like at (0.3, -0.2)",
              std::abs(biharmonic_residual(surface("cosine_biharmonic"), {0.3, -0.2})), 1e-3);
    c.at_most("(f) |biharmonic residual|, nonsymmetric at (0.5, 1)",
              std::abs(biharmonic_residual(surface("nonsymmetric_biharmonic"), {0.5, 1.0})), 1e-3);
    c.near("(f) biharmonic residual, cos(x) cos(y) at origin", biharmonic_residual(surface("cosine_product"), {0, 0}),
           4.0, 1e-6);
    // (g)
    bool counts = true;
    for (int mx = 1; mx <= 6; ++mx) {
      for (int my = 1; my <= 6; ++my) {
        const Mesh m(MeshSpec{{0, 1, 0, 1}, mx, my, std::nullopt});
        for (int k : {0, 1, 3}) {
          if (k > mx * my) continue;
          std::vector<PointConstraint> pcs;
          for (int i = 0; i < k; ++i) pcs.push_back({m.element(i).center(), 0.0, {}, {}});
          const GlobalSystem sys = assemble(m, clamped_boundary(m), pcs);
          const long expected = 24L * mx * my + k;
          counts = counts && sys.matrix.rows() == expected && sys.matrix.cols() == expected &&
                   static_cast<long>(sys.rhs.size()) == expected;
        }
      }
    }
    c.holds("(g) rows = unknowns = 24 M N + constraints for M, N in 1..6", counts);
    report(std::move(c));
  }

  {
    Criterion c(9, "shear discontinuity is confined to the constrained element, 251x251");
    const RunResult& r = keep.at("cos_product_center_fine");
    const Solution& sol = *r.solution;
    const SkeletonLine line = nearest_skeleton_line(r.mesh, Axis::X, 0);
    const int hit = locate_element(r.mesh, {0, 0}).element;
    std::vector<double> change;
    double at_hit = 0;
    for (int e : line.elements) {
      const double a = r.mesh.element(e).a;
      const double dq = std::abs(element_section(sol, r.mesh, e, Axis::X, a).q - element_section(sol, r.mesh, e, Axis::X, 0).q);
      change.push_back(dq);
      if (e == hit) at_hit = dq;
    }
    const double med = median(change);
    std::ostringstream a;
    a << std::setprecision(4) << "y = 0: Q change across the constrained element " << at_hit
      << " > 10 x median over the line " << med;
    c.holds(a.str(), at_hit > 10 * med);
    double jump_q0 = 0;
    for (const LineSamples& ls : r.lines)
      if (ls.line.orientation == Axis::X && ls.line.index == line.index) jump_q0 = ls.edge_jump[kQ];
    c.at_most("y = 0: largest Q jump between neighboring elements", jump_q0, 1e-6);

    const LineSamples* quarter = nullptr;
    for (const LineSamples& ls : r.lines)
      if (ls.line.orientation == Axis::X && std::abs(ls.line.coordinate - 0.25) <= r.mesh.row_heights()[0]) quarter = &ls;
    c.holds("y = 0.25 line sampled", quarter != nullptr);
    if (quarter) c.at_most("y = 0.25: largest Mn jump between neighboring elements", quarter->edge_jump[kMn], 1e-6);
    report(std::move(c));
  }

  int failed = 0;
  for (const Criterion& c : results) failed += c.passed() ? 0 : 1;
  std::cout << "summary: " << results.size() - static_cast<std::size_t>(failed) << " of " << results.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
