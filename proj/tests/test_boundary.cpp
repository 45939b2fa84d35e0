#include "mms/assembly.hpp"
#include "mms/boundary.hpp"
#include "mms/fields.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mms;

namespace {

constexpr double kPi = std::numbers::pi;

double coeff(const BoundaryRow& row, int index) {
  double v = 0;
  for (const auto& [i, c] : row.coeffs)
    if (i == index) v += c;
  return v;
}

int nonzeros(const BoundaryRow& row) {
  int n = 0;
  for (const auto& [i, c] : row.coeffs) n += c != 0;
  return n;
}

}  // namespace

TEST_CASE("side offsets select inlet or outlet section unknowns") {
  CHECK(side_offset(Side::Left) == 0);
  CHECK(side_offset(Side::Bottom) == 6);
  CHECK(side_offset(Side::Right) == 12);
  CHECK(side_offset(Side::Top) == 18);
}

TEST_CASE("kinematic, curvature and free rows") {
  const ElementGeometry<double> g{0.5, 0.5, 1, 0};
  const auto kin = boundary_rows(Side::Left, PrescribedKinematic{1, 2, 3}, g);
  for (int k = 0; k < 3; ++k) {
    CHECK(nonzeros(kin[static_cast<std::size_t>(k)]) == 1);
    CHECK(coeff(kin[static_cast<std::size_t>(k)], k) == 1.0);
    CHECK(kin[static_cast<std::size_t>(k)].rhs == 1.0 + k);
  }
  const auto curv = boundary_rows(Side::Top, PrescribedCurvature{4, 5, 6}, g);
  CHECK(coeff(curv[0], 18) == 1.0);
  CHECK(coeff(curv[1], 21) == 1.0);
  CHECK(coeff(curv[2], 22) == 1.0);
  CHECK(curv[1].rhs == 5.0);
  const auto free = boundary_rows(Side::Bottom, FreeEdge{}, g);
  CHECK(coeff(free[0], 9) == 1.0);
  CHECK(coeff(free[1], 10) == 1.0);
  CHECK(coeff(free[2], 11) == 1.0);
  for (const auto& r : free) CHECK(r.rhs == 0.0);
}

TEST_CASE("corner support B on the left side") {
  const ElementGeometry<double> g{0.5, 0.5, 1, 0};
  const auto rows = boundary_rows(Side::Left, CornerSupport{CornerVariant::B, Corner::LowerLeft}, g);
  CHECK(coeff(rows[0], 0) == 1.0);
  CHECK(nonzeros(rows[0]) == 1);
  CHECK(coeff(rows[1], 3) == 1.0);
  CHECK(coeff(rows[2], 4) == 1.0);
  for (const auto& r : rows) CHECK(r.rhs == 0.0);
}

TEST_CASE("corner support BAM with b = 0.5") {
  const ElementGeometry<double> g{1, 0.5, 1, 0};
  const auto rows = boundary_rows(Side::Left, CornerSupport{CornerVariant::BAM, Corner::LowerLeft}, g);
  CHECK(coeff(rows[0], 0) == 1.0);
  CHECK(coeff(rows[0], 2) == -0.25);
  CHECK(coeff(rows[1], 3) == 1.0);
  CHECK(nonzeros(rows[1]) == 1);
  CHECK(coeff(rows[2], 4) == 1.0);
  CHECK(coeff(rows[2], 5) == -0.25);

  const auto ba = boundary_rows(Side::Left, CornerSupport{CornerVariant::BA, Corner::LowerLeft}, g);
  CHECK(coeff(ba[0], 2) == -0.25);
  CHECK(nonzeros(ba[2]) == 1);
}

TEST_CASE("corner half-length terms flip sign at the far end of a side") {
  const ElementGeometry<double> g{0.4, 0.6, 1, 0};
  // Bottom side of the lower-right element: the corner is at the end of the
  // side, half-length a/2.
  const auto br = boundary_rows(Side::Bottom, CornerSupport{CornerVariant::BAM, Corner::LowerRight}, g);
  CHECK(coeff(br[0], 6) == 1.0);
  CHECK(coeff(br[0], 8) == doctest::Approx(0.2));
  CHECK(coeff(br[2], 11) == doctest::Approx(0.2));
  // Right side of the same element: corner at the start, half-length b/2.
  const auto rr = boundary_rows(Side::Right, CornerSupport{CornerVariant::BAM, Corner::LowerRight}, g);
  CHECK(coeff(rr[0], 12) == 1.0);
  CHECK(coeff(rr[0], 14) == doctest::Approx(-0.3));
  CHECK(coeff(rr[2], 17) == doctest::Approx(-0.3));
  // Top side near an upper-left corner: start of the side.
  const auto tl = boundary_rows(Side::Top, CornerSupport{CornerVariant::BA, Corner::UpperLeft}, g);
  CHECK(coeff(tl[0], 20) == doctest::Approx(-0.2));
  const auto lu = boundary_rows(Side::Left, CornerSupport{CornerVariant::BA, Corner::UpperLeft}, g);
  CHECK(coeff(lu[0], 2) == doctest::Approx(0.3));
}

TEST_CASE("a corner support on a side that does not touch the corner is rejected") {
  const ElementGeometry<double> g{1, 1, 1, 0};
  CHECK_THROWS_AS(boundary_rows(Side::Top, CornerSupport{CornerVariant::B, Corner::LowerLeft}, g),
                  std::invalid_argument);
  CHECK_THROWS_AS(boundary_rows(Side::Right, CornerSupport{CornerVariant::B, Corner::UpperLeft}, g),
                  std::invalid_argument);
}

TEST_CASE("free edge and corner support on the same side conflict") {
  BoundarySpec spec;
  spec.assign(0, Side::Left, CornerSupport{CornerVariant::BAM, Corner::LowerLeft});
  CHECK_THROWS_WITH_AS(spec.assign(0, Side::Left, FreeEdge{}), doctest::Contains("free edge conflicts with corner support"),
                       std::invalid_argument);
  spec.assign(1, Side::Top, PrescribedKinematic{});
  CHECK_THROWS_AS(spec.assign(1, Side::Top, PrescribedKinematic{}), std::invalid_argument);
  CHECK(spec.size() == 2);
  CHECK(spec.has(1, Side::Top));
  CHECK(!spec.has(1, Side::Left));
}

TEST_CASE("sampling boundary data from a surface") {
  const AnalyticSurface cc = surface("cosine_product");
  const auto left = std::get<PrescribedKinematic>(sample_boundary_data(cc, {-kPi / 2, 0}, Side::Left, BoundaryDataKind::Kinematic));
  CHECK(left.w == doctest::Approx(0).epsilon(1e-15));
  CHECK(left.theta_n == doctest::Approx(1).epsilon(1e-15));
  CHECK(left.theta_tau == doctest::Approx(0).epsilon(1e-15));

  // theta_tau on an X-inlet side is dW/dy.
  const Point p{-kPi / 2 + 0.0, 0.4};
  const auto k = std::get<PrescribedKinematic>(sample_boundary_data(cc, p, Side::Left, BoundaryDataKind::Kinematic));
  CHECK(k.theta_tau == doctest::Approx(cc.jet(p.x, p.y).wy));
  const auto bottom = std::get<PrescribedKinematic>(sample_boundary_data(cc, {0.3, -kPi / 2}, Side::Bottom, BoundaryDataKind::Kinematic));
  CHECK(bottom.theta_n == doctest::Approx(cc.jet(0.3, -kPi / 2).wy));
  CHECK(bottom.theta_tau == doctest::Approx(cc.jet(0.3, -kPi / 2).wx));

  const AnalyticSurface cb = surface("cosine_biharmonic");
  for (double y : {-1.0, 0.0, 0.7}) {
    const auto v = std::get<PrescribedKinematic>(sample_boundary_data(cb, {kPi / 2, y}, Side::Right, BoundaryDataKind::Kinematic));
    CHECK(std::abs(v.w) <= 1e-14);
  }

  const auto curv = std::get<PrescribedCurvature>(
      sample_boundary_data(cc, {0.2, kPi / 2 - 0.1}, Side::Top, BoundaryDataKind::Curvature, 2.0, 0.3));
  const SurfaceJet j = cc.jet(0.2, kPi / 2 - 0.1);
  CHECK(curv.m_n == doctest::Approx(2.0 * (j.wyy + 0.3 * j.wxx)));
  CHECK(curv.m_tau == doctest::Approx(2.0 * 0.7 * j.wxy));
}

TEST_CASE("corner plate boundary layout") {
  const Mesh m(MeshSpec{{0, 1, 0, 1}, 4, 3, std::nullopt});
  const BoundarySpec spec = corner_plate_boundary(m, CornerVariant::BA);
  CHECK(spec.size() == m.boundary_sides().size());
  CHECK(std::holds_alternative<CornerSupport>(*spec.find(0, Side::Left)));
  CHECK(std::holds_alternative<CornerSupport>(*spec.find(0, Side::Bottom)));
  CHECK(std::holds_alternative<CornerSupport>(*spec.find(3, Side::Right)));
  CHECK(std::holds_alternative<FreeEdge>(*spec.find(1, Side::Bottom)));
  CHECK(std::holds_alternative<FreeEdge>(*spec.find(4, Side::Left)));
  CHECK(std::holds_alternative<PrescribedKinematic>(*spec.find(9, Side::Top)));
}

TEST_CASE("tabulated boundary data interpolates linearly along each side") {
  const Mesh m(MeshSpec{{0, 2, 0, 1}, 2, 2, std::nullopt});
  BoundaryTable t;
  for (Side s : {Side::Left, Side::Right, Side::Bottom, Side::Top})
    t[s] = {{2.0, 2, 20, 200}, {0.0, 0, 0, 0}};  // unsorted on purpose
  const BoundarySpec spec = tabulated_boundary(m, t, BoundaryDataKind::Kinematic);
  // Bottom side of element 1 has its midpoint at x = 1.5.
  const auto b = std::get<PrescribedKinematic>(*spec.find(1, Side::Bottom));
  CHECK(b.w == doctest::Approx(1.5));
  CHECK(b.theta_n == doctest::Approx(15));
  CHECK(b.theta_tau == doctest::Approx(150));
  // Left side of element 2 has its midpoint at y = 0.75.
  CHECK(std::get<PrescribedKinematic>(*spec.find(2, Side::Left)).w == doctest::Approx(0.75));

  t.erase(Side::Top);
  CHECK_THROWS_AS(tabulated_boundary(m, t, BoundaryDataKind::Kinematic), std::invalid_argument);
}

TEST_CASE("mirrored boundary data gives a mirrored solution") {
  const AnalyticSurface s = surface("nonsymmetric_biharmonic");
  AnalyticSurface mirrored = s;
  mirrored.id = "mirrored";
  mirrored.domain = {-s.domain.x_max, -s.domain.x_min, s.domain.y_min, s.domain.y_max};
  mirrored.jet = [s](double x, double y) {
    SurfaceJet j = s.jet(-x, y);
    j.wx = -j.wx;
    j.wxy = -j.wxy;
    return j;
  };
  const Mesh a(MeshSpec{s.domain, 9, 9, std::nullopt});
  const Mesh b(MeshSpec{mirrored.domain, 9, 9, std::nullopt});
  const Solution sa = solve(assemble(a, surface_boundary(a, s, BoundaryDataKind::Kinematic), {}));
  const Solution sb = solve(assemble(b, surface_boundary(b, mirrored, BoundaryDataKind::Kinematic), {}));
  const double scale = sa.unknowns.cwiseAbs().maxCoeff();
  for (const Element& e : a.elements()) {
    const int twin = b.element_id(8 - e.col, e.row);
    const auto pa = element_section(sa, a, e.id, Axis::X, e.a * 0.5);
    const auto pb = element_section(sb, b, twin, Axis::X, e.a * 0.5);
    CHECK(std::abs(pa.w - pb.w) <= 1e-9 * scale);
    CHECK(std::abs(pa.theta_n + pb.theta_n) <= 1e-9 * scale);
    CHECK(std::abs(pa.m_n - pb.m_n) <= 1e-9 * scale);
    const auto qa = element_section(sa, a, e.id, Axis::Y, e.b * 0.3);
    const auto qb = element_section(sb, b, twin, Axis::Y, e.b * 0.3);
    CHECK(std::abs(qa.w - qb.w) <= 1e-9 * scale);
    CHECK(std::abs(qa.theta_tau + qb.theta_tau) <= 1e-9 * scale);
  }
}
