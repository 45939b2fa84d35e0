#pragma once

// Closed-form solutions of a single rectangular matched-section element.
//
// An element of size a x b carries two 1D sections: the X-section along its
// horizontal center line (x in [0, a]) and the Y-section along its vertical
// center line (y in [0, b]). Each section is described by six parameters
// (w, theta_n, theta_tau, M_n, M_tau, Q). The 12 inlet values form the state
// vector, ordered
//
//   z[0..5]  = w, theta_n, theta_tau, M_n, M_tau, Q   of the X-section at x = 0
//   z[6..11] = w, theta_n, theta_tau, M_n, M_tau, Q   of the Y-section at y = 0
//
// theta_n of the X-section and theta_tau of the Y-section are both dW/dx;
// theta_tau of the X-section and theta_n of the Y-section are both dW/dy.
// Three auxiliary constants (A1, A2, A3) close the system: they are the
// x-slope of Q^x, the y-slope of M_tau^y and the x-slope of M_tau^x.

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

namespace mms {

enum class Axis { X, Y };

/// Sum of products accumulated in about twice the working precision
/// (error-free product and sum transformations). The shear rows of fine
/// elements add terms of order 1/a^4 that cancel almost completely.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar v) {
    const Scalar t = sum_ + v;
    const Scalar z = t - sum_;
    error_ += (sum_ - (t - z)) + (v - z);
    sum_ = t;
  }
  void add_product(Scalar a, Scalar b) {
    const Scalar p = a * b;
    error_ += std::fma(a, b, -p);
    add(p);
  }
  Scalar value() const { return sum_ + error_; }

 private:
  Scalar sum_{0};
  Scalar error_{0};
};

/// Element dimensions and material constants. The load intensity P is passed
/// separately because it is frequently an unknown of the global system.
template <typename Scalar>
struct ElementGeometry {
  Scalar a{1};
  Scalar b{1};
  Scalar D{1};
  Scalar nu{0};

  void validate() const {
    if (!(a > Scalar(0)) || !(b > Scalar(0)))
      throw std::invalid_argument("element dimensions must be positive");
    if (!(D > Scalar(0))) throw std::invalid_argument("rigidity D must be positive");
    if (!(nu >= Scalar(0) && nu < Scalar(1)))
      throw std::invalid_argument("coupling ratio nu must lie in [0, 1)");
  }

  Scalar span(Axis axis) const { return axis == Axis::X ? a : b; }
};

/// Index of each parameter inside a six-entry section block.
enum SectionParam : int { kW = 0, kThetaN = 1, kThetaTau = 2, kMn = 3, kMtau = 4, kQ = 5 };

template <typename Scalar>
using StateVector = Eigen::Matrix<Scalar, 12, 1>;

template <typename Scalar>
using SectionVector = Eigen::Matrix<Scalar, 6, 1>;

/// The six section parameters at one coordinate.
template <typename Scalar>
struct SectionSample {
  Scalar w{0};
  Scalar theta_n{0};
  Scalar theta_tau{0};
  Scalar m_n{0};
  Scalar m_tau{0};
  Scalar q{0};

  static SectionSample from_vector(const SectionVector<Scalar>& v) {
    return {v(kW), v(kThetaN), v(kThetaTau), v(kMn), v(kMtau), v(kQ)};
  }
  SectionVector<Scalar> vector() const {
    SectionVector<Scalar> v;
    v << w, theta_n, theta_tau, m_n, m_tau, q;
    return v;
  }
};

/// A = alpha * z + P * beta.
template <typename Scalar>
struct CouplingCoefficients {
  Eigen::Matrix<Scalar, 3, 12> alpha = Eigen::Matrix<Scalar, 3, 12>::Zero();
  Eigen::Matrix<Scalar, 3, 1> beta = Eigen::Matrix<Scalar, 3, 1>::Zero();

  Eigen::Matrix<Scalar, 3, 1> constants(const StateVector<Scalar>& z, Scalar load) const {
    return alpha * z + load * beta;
  }
};

/// Section parameters at coordinate `at` as coeff * z + P * load.
template <typename Scalar>
struct TransferOperator {
  Eigen::Matrix<Scalar, 6, 12> coeff = Eigen::Matrix<Scalar, 6, 12>::Zero();
  SectionVector<Scalar> load = SectionVector<Scalar>::Zero();
  Scalar at{0};

  SectionVector<Scalar> apply(const StateVector<Scalar>& z, Scalar p) const {
    SectionVector<Scalar> out;
    for (int k = 0; k < 6; ++k) {
      CompensatedSum<Scalar> s;
      for (int j = 0; j < 12; ++j) s.add_product(coeff(k, j), z(j));
      s.add_product(p, load(k));
      out(k) = s.value();
    }
    return out;
  }
};

namespace detail {

// Columns of the extended operand [z(12), P, A1, A2, A3].
constexpr int kLoadCol = 12;
constexpr int kA1 = 13;
constexpr int kA2 = 14;
constexpr int kA3 = 15;

template <typename Scalar>
using ExtendedRow = Eigen::Matrix<Scalar, 1, 16>;

template <typename Scalar>
using ExtendedOperator = Eigen::Matrix<Scalar, 6, 16>;

template <typename Scalar>
ExtendedRow<Scalar> unit(int col) {
  ExtendedRow<Scalar> r = ExtendedRow<Scalar>::Zero();
  r(col) = Scalar(1);
  return r;
}

// Span-averaged bending moment of the X-section (used by the Y-section).
template <typename Scalar>
ExtendedRow<Scalar> averaged_moment_x(const ElementGeometry<Scalar>& g) {
  const Scalar a = g.a;
  return unit<Scalar>(3) + (a / 2) * unit<Scalar>(5) + (a * a / 6) * unit<Scalar>(kA1) -
         (a / 2) * unit<Scalar>(kA2);
}

// Span-averaged bending moment of the Y-section (used by the X-section).
template <typename Scalar>
ExtendedRow<Scalar> averaged_moment_y(const ElementGeometry<Scalar>& g) {
  const Scalar b = g.b;
  return unit<Scalar>(9) + (b / 2) * unit<Scalar>(11) +
         (b * b / 6) * (unit<Scalar>(kLoadCol) - unit<Scalar>(kA1)) - (b / 2) * unit<Scalar>(kA3);
}

/// Section parameters as a linear map of [z, P, A1, A2, A3] before the
/// auxiliary constants are eliminated.
template <typename Scalar>
ExtendedOperator<Scalar> section_operator(const ElementGeometry<Scalar>& g, Axis axis, Scalar t) {
  const Scalar bend = Scalar(1) / (g.D * (Scalar(1) - g.nu * g.nu));
  const Scalar twist = Scalar(1) / (g.D * (Scalar(1) - g.nu));
  const Scalar t2 = t * t / 2;
  const Scalar t3 = t * t * t / 6;
  const Scalar t4 = t * t * t * t / 24;
  auto e = [](int col) { return unit<Scalar>(col); };

  ExtendedOperator<Scalar> op;
  if (axis == Axis::X) {
    const ExtendedRow<Scalar> other_avg = averaged_moment_y(g);
    op.row(kQ) = e(5) + t * e(kA1);
    op.row(kMtau) = e(4) + t * e(kA3);
    op.row(kMn) = e(3) + t * e(5) + t2 * e(kA1) - t * e(kA2);
    op.row(kThetaTau) = e(2) + twist * (t * e(4) + t2 * e(kA3));
    op.row(kThetaN) = e(1) + bend * (t * e(3) + t2 * e(5) + t3 * e(kA1) - t2 * e(kA2)) -
                      g.nu * bend * t * other_avg;
    op.row(kW) = e(0) + t * e(1) + bend * (t2 * e(3) + t3 * e(5) + t4 * e(kA1) - t3 * e(kA2)) -
                 g.nu * bend * t2 * other_avg;
  } else {
    const ExtendedRow<Scalar> other_avg = averaged_moment_x(g);
    const ExtendedRow<Scalar> net = e(kLoadCol) - e(kA1);
    op.row(kQ) = e(11) + t * net;
    op.row(kMtau) = e(10) + t * e(kA2);
    op.row(kMn) = e(9) + t * e(11) + t2 * net - t * e(kA3);
    op.row(kThetaTau) = e(8) + twist * (t * e(10) + t2 * e(kA2));
    op.row(kThetaN) = e(7) + bend * (t * e(9) + t2 * e(11) + t3 * net - t2 * e(kA3)) -
                      g.nu * bend * t * other_avg;
    op.row(kW) = e(6) + t * e(7) + bend * (t2 * e(9) + t3 * e(11) + t4 * net - t3 * e(kA3)) -
                 g.nu * bend * t2 * other_avg;
  }
  return op;
}

template <typename Scalar>
void check_span(const ElementGeometry<Scalar>& g, Axis axis, Scalar t) {
  using std::abs;
  const Scalar span = g.span(axis);
  const Scalar slack = Scalar(1e-12) * span;
  if (!(t >= -slack && t <= span + slack))
    throw std::out_of_range("section coordinate outside the element span");
}

}  // namespace detail

/// Solves the three center-matching conditions
///   w^x(a/2) = w^y(b/2),  theta_n^x(a/2) = theta_tau^y(b/2),
///   theta_tau^x(a/2) = theta_n^y(b/2)
/// for (A1, A2, A3) as a linear function of the state and the load.
template <typename Scalar>
CouplingCoefficients<Scalar> coupling_coefficients(const ElementGeometry<Scalar>& g) {
  g.validate();
  const auto sx = detail::section_operator(g, Axis::X, g.a / 2);
  const auto sy = detail::section_operator(g, Axis::Y, g.b / 2);

  Eigen::Matrix<Scalar, 3, 16> match;
  match.row(0) = sx.row(kW) - sy.row(kW);
  match.row(1) = sx.row(kThetaN) - sy.row(kThetaTau);
  match.row(2) = sx.row(kThetaTau) - sy.row(kThetaN);

  const Eigen::Matrix<Scalar, 3, 3> lhs = match.template rightCols<3>();
  Eigen::FullPivLU<Eigen::Matrix<Scalar, 3, 3>> lu(lhs);
  if (lu.rank() < 3) throw std::logic_error("degenerate element geometry: singular matching system");

  CouplingCoefficients<Scalar> cc;
  cc.alpha = -lu.solve(match.template leftCols<12>());
  cc.beta = -lu.solve(match.col(detail::kLoadCol));
  return cc;
}

namespace detail {

template <typename Scalar>
TransferOperator<Scalar> eliminate(const ExtendedOperator<Scalar>& op,
                                   const CouplingCoefficients<Scalar>& cc, Scalar at) {
  TransferOperator<Scalar> t;
  t.at = at;
  t.coeff = op.template leftCols<12>() + op.template rightCols<3>() * cc.alpha;
  t.load = op.col(kLoadCol) + op.template rightCols<3>() * cc.beta;
  return t;
}

}  // namespace detail

/// Field transfer operator of the X-section at coordinate x in [0, a].
template <typename Scalar>
TransferOperator<Scalar> transfer_x(const ElementGeometry<Scalar>& g,
                                    const CouplingCoefficients<Scalar>& cc, Scalar x) {
  detail::check_span(g, Axis::X, x);
  return detail::eliminate(detail::section_operator(g, Axis::X, x), cc, x);
}

/// Field transfer operator of the Y-section at coordinate y in [0, b].
template <typename Scalar>
TransferOperator<Scalar> transfer_y(const ElementGeometry<Scalar>& g,
                                    const CouplingCoefficients<Scalar>& cc, Scalar y) {
  detail::check_span(g, Axis::Y, y);
  return detail::eliminate(detail::section_operator(g, Axis::Y, y), cc, y);
}

template <typename Scalar>
TransferOperator<Scalar> transfer(const ElementGeometry<Scalar>& g,
                                  const CouplingCoefficients<Scalar>& cc, Axis axis, Scalar t) {
  return axis == Axis::X ? transfer_x(g, cc, t) : transfer_y(g, cc, t);
}

template <typename Scalar>
SectionSample<Scalar> evaluate_section(const ElementGeometry<Scalar>& g,
                                       const CouplingCoefficients<Scalar>& cc,
                                       const StateVector<Scalar>& z, Scalar load, Axis axis,
                                       Scalar t) {
  return SectionSample<Scalar>::from_vector(transfer(g, cc, axis, t).apply(z, load));
}

/// Squared center curvatures times element area.
template <typename Scalar>
Scalar element_energy(const ElementGeometry<Scalar>& g, const CouplingCoefficients<Scalar>& cc,
                      const StateVector<Scalar>& z, Scalar load) {
  const auto sx = transfer_x(g, cc, g.a / 2).apply(z, load);
  const auto sy = transfer_y(g, cc, g.b / 2).apply(z, load);
  const Scalar sum = sx(kMn) * sx(kMn) + sx(kMtau) * sx(kMtau) + sy(kMtau) * sy(kMtau) +
                     sy(kMn) * sy(kMn);
  return sum * g.a * g.b;
}

/// Coupling coefficients memoized per distinct (a, b, D, nu). Concurrent
/// lookups take a shared lock; only first-time inserts are exclusive.
class CouplingCache {
 public:
  const CouplingCoefficients<double>& get(const ElementGeometry<double>& g) {
    const Key key{g.a, g.b, g.D, g.nu};
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto cc = coupling_coefficients(g);
    std::unique_lock lock(mutex_);
    return cache_.try_emplace(key, std::move(cc)).first->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

 private:
  using Key = std::tuple<double, double, double, double>;
  mutable std::shared_mutex mutex_;
  std::map<Key, CouplingCoefficients<double>> cache_;
};

/// Process-wide cache shared by assembly and post-processing.
inline CouplingCache& shared_coupling_cache() {
  static CouplingCache cache;
  return cache;
}

}  // namespace mms
