#include "mms/surfaces.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mms {

namespace {

using std::numbers::pi;

// F(t) = cosh(t)/2 - coth(pi/2) t sinh(t) / pi, which vanishes at t = +-pi/2.
struct CoshProfile {
  double c = 1.0 / std::tanh(pi / 2);
  double f(double t) const { return 0.5 * std::cosh(t) - c * t * std::sinh(t) / pi; }
  double d1(double t) const {
    return 0.5 * std::sinh(t) - c * (std::sinh(t) + t * std::cosh(t)) / pi;
  }
  double d2(double t) const {
    return 0.5 * std::cosh(t) - c * (2 * std::cosh(t) + t * std::sinh(t)) / pi;
  }
};

SurfaceJet cosine_biharmonic(double x, double y) {
  const CoshProfile F;
  const double cx = std::cos(x), sx = std::sin(x), cy = std::cos(y), sy = std::sin(y);
  SurfaceJet j;
  j.w = cx * F.f(y) + cy * F.f(x);
  j.wx = -sx * F.f(y) + cy * F.d1(x);
  j.wy = cx * F.d1(y) - sy * F.f(x);
  j.wxx = -cx * F.f(y) + cy * F.d2(x);
  j.wyy = -cy * F.f(x) + cx * F.d2(y);
  j.wxy = -sx * F.d1(y) - sy * F.d1(x);
  return j;
}

SurfaceJet nonsymmetric_biharmonic(double x, double y) {
  const double e = std::exp(3 * x);
  const double g = (pi / 2 - x) * e;
  const double g1 = (3 * (pi / 2 - x) - 1) * e;
  const double g2 = (9 * (pi / 2 - x) - 6) * e;
  const double c = std::cos(3 * y), s = std::sin(3 * y);
  SurfaceJet j;
  j.w = g * c;
  j.wx = g1 * c;
  j.wy = -3 * g * s;
  j.wxx = g2 * c;
  j.wyy = -9 * g * c;
  j.wxy = -3 * g1 * s;
  return j;
}

SurfaceJet cosine_product(double x, double y) {
  const double cx = std::cos(x), sx = std::sin(x), cy = std::cos(y), sy = std::sin(y);
  return {cx * cy, -sx * cy, -cx * sy, -cx * cy, -cx * cy, sx * sy};
}

// p(x, y) * exp(q(x, y)) with separable quadratic q.
struct GaussTerm {
  double p, px, py, pxx, pyy, pxy;
  double qx, qy, qxx, qyy, q;

  void add_to(SurfaceJet& j) const {
    const double e = std::exp(q);
    j.w += p * e;
    j.wx += (px + p * qx) * e;
    j.wy += (py + p * qy) * e;
    j.wxx += (pxx + 2 * px * qx + p * qxx + p * qx * qx) * e;
    j.wyy += (pyy + 2 * py * qy + p * qyy + p * qy * qy) * e;
    j.wxy += (pxy + px * qy + py * qx + p * qx * qy) * e;
  }
};

SurfaceJet multipeak(double x, double y) {
  SurfaceJet j;
  const double u = 1 - x;
  GaussTerm{3 * u * u, -6 * u, 0, 6, 0, 0,
            -2 * x, -2 * (y + 1), -2, -2, -x * x - (y + 1) * (y + 1)}
      .add_to(j);
  const double y4 = y * y * y * y;
  GaussTerm{-2 * x + 10 * x * x * x + 10 * y4 * y, -2 + 30 * x * x, 50 * y4, 60 * x,
            200 * y * y * y, 0, -2 * x, -2 * y, -2, -2, -x * x - y * y}
      .add_to(j);
  GaussTerm{-1.0 / 3, 0, 0, 0, 0, 0,
            -2 * (x + 1), -2 * y, -2, -2, -(x + 1) * (x + 1) - y * y}
      .add_to(j);
  return j;
}

}  // namespace

std::vector<std::string> surface_ids() {
  return {"cosine_biharmonic", "nonsymmetric_biharmonic", "cosine_product", "multipeak"};
}

AnalyticSurface surface(const std::string& id) {
  if (id == "cosine_biharmonic")
    return {id, {-pi / 2, pi / 2, -pi / 2, pi / 2}, cosine_biharmonic, 17.1850};
  if (id == "nonsymmetric_biharmonic")
    return {id, {0, pi / 2, -pi, pi}, nonsymmetric_biharmonic, 233228.4505};
  if (id == "cosine_product")
    return {id, {-pi / 2, pi / 2, -pi / 2, pi / 2}, cosine_product, pi * pi};
  if (id == "multipeak") return {id, {-3, 3, -4, 4}, multipeak, 4161.9368};
  throw std::invalid_argument("unknown surface identifier '" + id + "'");
}

double biharmonic_residual(const AnalyticSurface& s, const Point& p, double h) {
  const Rect& d = s.domain;
  if (p.x - 2 * h < d.x_min || p.x + 2 * h > d.x_max || p.y - 2 * h < d.y_min ||
      p.y + 2 * h > d.y_max)
    throw std::out_of_range("finite-difference stencil leaves the surface domain");

  auto stencil = [&](double step) {
    auto W = [&](int i, int j) { return s.value(p.x + i * step, p.y + j * step); };
    const double sum = 20 * W(0, 0) - 8 * (W(1, 0) + W(-1, 0) + W(0, 1) + W(0, -1)) +
                       2 * (W(1, 1) + W(1, -1) + W(-1, 1) + W(-1, -1)) +
                       (W(2, 0) + W(-2, 0) + W(0, 2) + W(0, -2));
    return sum / (step * step * step * step);
  };
  // The 13-point stencil is second order; one Richardson step makes it fourth order.
  return (4 * stencil(h / 2) - stencil(h)) / 3;
}

double midpoint_energy(const AnalyticSurface& s, const Mesh& mesh) {
  double total = 0;
  for (const Element& e : mesh.elements()) {
    const Point c = e.center();
    const SurfaceJet j = s.jet(c.x, c.y);
    total += (j.wxx * j.wxx + 2 * j.wxy * j.wxy + j.wyy * j.wyy) * e.a * e.b;
  }
  return total;
}

double quadrature_energy(const AnalyticSurface& s, int cells) {
  // 4-point Gauss-Legendre on [-1, 1].
  const std::array<double, 4> nodes{-0.8611363115940526, -0.3399810435848563,
                                    0.3399810435848563, 0.8611363115940526};
  const std::array<double, 4> weights{0.3478548451374538, 0.6521451548625461,
                                      0.6521451548625461, 0.3478548451374538};
  const Rect& d = s.domain;
  const double hx = d.lx() / cells, hy = d.ly() / cells;
  double total = 0;
  for (int i = 0; i < cells; ++i) {
    for (int k = 0; k < cells; ++k) {
      const double cx = d.x_min + (i + 0.5) * hx, cy = d.y_min + (k + 0.5) * hy;
      for (std::size_t m = 0; m < nodes.size(); ++m) {
        for (std::size_t n = 0; n < nodes.size(); ++n) {
          const SurfaceJet j = s.jet(cx + 0.5 * hx * nodes[m], cy + 0.5 * hy * nodes[n]);
          total += weights[m] * weights[n] *
                   (j.wxx * j.wxx + 2 * j.wxy * j.wxy + j.wyy * j.wyy);
        }
      }
    }
  }
  return total * 0.25 * hx * hy;
}

std::vector<Point> multipeak_extrema_guess() {
  return {{0, 1.59}, {-0.45, -0.64}, {1.29, 0}, {0.24, -1.63}, {-1.34, 0.19}, {0.29, 0.32}};
}

std::vector<Point> multipeak_extrema() {
  const AnalyticSurface s = surface("multipeak");
  std::vector<Point> out;
  for (Point p : multipeak_extrema_guess()) {
    for (int it = 0; it < 50; ++it) {
      const SurfaceJet j = s.jet(p.x, p.y);
      Eigen::Matrix2d H;
      H << j.wxx, j.wxy, j.wxy, j.wyy;
      const Eigen::Vector2d step = H.fullPivLu().solve(Eigen::Vector2d(j.wx, j.wy));
      p.x -= step(0);
      p.y -= step(1);
      if (step.norm() < 1e-14) break;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<CornerTableRow> exact_corner_table() {
  return {
      {0.0, 0.25, 0.008098, 0.076216, 0.0},
      {0.0, 0.5, 0.011237, 0.094329, 0.0},
      {0.25, 0.0, 0.005163, 0.0, 0.071900},
      {0.25, 0.25, 0.008934, 0.050837, 0.056157},
      {0.25, 0.5, 0.010596, 0.066909, 0.052390},
      {0.5, 0.0, 0.005797, 0.0, 0.062840},
      {0.5, 0.25, 0.007316, 0.029028, 0.052692},
      {0.5, 0.5, 0.008052, 0.037900, 0.049495},
  };
}

}  // namespace mms
