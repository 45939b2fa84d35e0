#include "mms/assembly.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace mms {

namespace {

const char* kParamNames[6] = {"w", "theta_n", "theta_tau", "M_n", "M_tau", "Q"};

using Triplet = Eigen::Triplet<double>;

class RowBuilder {
 public:
  RowBuilder(std::vector<Triplet>& triplets, std::vector<double>& rhs, std::vector<RowInfo>& info)
      : triplets_(triplets), rhs_(rhs), info_(info) {}

  int begin(RowInfo ri, double rhs) {
    info_.push_back(ri);
    rhs_.push_back(rhs);
    return static_cast<int>(rhs_.size()) - 1;
  }
  void add(int row, int col, double value) {
    if (value != 0.0) triplets_.emplace_back(row, col, value);
  }

 private:
  std::vector<Triplet>& triplets_;
  std::vector<double>& rhs_;
  std::vector<RowInfo>& info_;
};

}  // namespace

std::string UnknownMap::describe(int index) const {
  std::ostringstream out;
  if (index >= kPerElement * elements) {
    out << "constraint " << index - kPerElement * elements << " multiplier";
    return out.str();
  }
  const int e = index / kPerElement;
  const int local = index % kPerElement;
  const int block = local / 6;
  static const char* kBlocks[4] = {"inlet X", "inlet Y", "outlet X", "outlet Y"};
  out << "element " << e << " z" << local + 1 << " (" << kBlocks[block] << ' ' << kParamNames[local % 6] << ')';
  return out.str();
}

const char* row_class_name(RowClass c) {
  switch (c) {
    case RowClass::Connection: return "connection";
    case RowClass::Conjugation: return "conjugation";
    case RowClass::Boundary: return "boundary";
    case RowClass::Constraint: return "constraint";
  }
  return "?";
}

GlobalSystem assemble(const Mesh& mesh, const BoundarySpec& boundary,
                      std::span<const PointConstraint> constraints, double q, Material material) {
  GlobalSystem sys;
  sys.material = material;
  sys.map.elements = mesh.size();
  sys.map.constraints = static_cast<int>(constraints.size());
  if (q != 0.0 && !constraints.empty())
    throw std::invalid_argument("a uniform load cannot be combined with point constraints");

  sys.constraints = constraint_contributions(mesh, constraints, 0);
  sys.loads.assign(static_cast<std::size_t>(mesh.size()), ElementLoad{q, {}});
  for (const ConstraintContribution& c : sys.constraints)
    for (const auto& [e, alpha] : c.spread.weights)
      sys.loads[static_cast<std::size_t>(e)].multipliers.emplace_back(c.multiplier, alpha);

  CouplingCache& cache = shared_coupling_cache();
  std::vector<Triplet> triplets;
  std::vector<double> rhs;
  triplets.reserve(static_cast<std::size_t>(mesh.size()) * 220);
  rhs.reserve(static_cast<std::size_t>(sys.map.size()));
  RowBuilder rb(triplets, rhs, sys.rows);

  auto add_load_columns = [&](int row, const ElementLoad& load, double coef) {
    for (const auto& [k, alpha] : load.multipliers) rb.add(row, sys.map.multiplier(k), coef * alpha);
  };

  for (const Element& el : mesh.elements()) {
    const int e = el.id;
    const int o = sys.map.element_offset(e);
    const ElementGeometry<double> g = mesh.geometry(e, material.D, material.nu);
    const auto& cc = cache.get(g);
    const ElementLoad& load = sys.loads[static_cast<std::size_t>(e)];

    // outlet - T * inlet - P * load = 0
    for (Axis axis : {Axis::X, Axis::Y}) {
      const auto t = transfer(g, cc, axis, g.span(axis));
      const int block = axis == Axis::X ? 0 : 6;
      for (int k = 0; k < 6; ++k) {
        const int row = rb.begin({RowClass::Connection, e, block + k}, load.constant * t.load(k));
        rb.add(row, o + 12 + block + k, 1.0);
        for (int j = 0; j < 12; ++j) rb.add(row, o + j, -t.coeff(k, j));
        add_load_columns(row, load, -t.load(k));
      }
    }

    for (Side side : {Side::Left, Side::Right, Side::Bottom, Side::Top}) {
      if (!mesh.is_boundary(e, side)) continue;
      const BoundaryCondition* bc = boundary.find(e, side);
      if (!bc)
        throw AssemblyError("no boundary condition on element " + std::to_string(e) + " " + side_name(side) + " side");
      for (const BoundaryRow& br : boundary_rows(side, *bc, g)) {
        const int row = rb.begin({RowClass::Boundary, e, static_cast<int>(side)}, br.rhs);
        for (const auto& [local, v] : br.coeffs) rb.add(row, o + local, v);
      }
    }

    // Conjugation rows for the right and top edges, owned by this element.
    if (!mesh.is_boundary(e, Side::Right)) {
      const int other = sys.map.element_offset(mesh.element_id(el.col + 1, el.row));
      for (int k = 0; k < 6; ++k) {
        const int row = rb.begin({RowClass::Conjugation, e, static_cast<int>(Side::Right)}, 0.0);
        rb.add(row, o + 12 + k, 1.0);
        rb.add(row, other + k, -1.0);
      }
    }
    if (!mesh.is_boundary(e, Side::Top)) {
      const int other = sys.map.element_offset(mesh.element_id(el.col, el.row + 1));
      for (int k = 0; k < 6; ++k) {
        const int row = rb.begin({RowClass::Conjugation, e, static_cast<int>(Side::Top)}, 0.0);
        rb.add(row, o + 18 + k, 1.0);
        rb.add(row, other + 6 + k, -1.0);
      }
    }
  }

  // w^x at the attachment element center equals the target.
  for (const ConstraintContribution& c : sys.constraints) {
    const int e = c.attachment;
    const ElementGeometry<double> g = mesh.geometry(e, material.D, material.nu);
    const auto t = transfer_x(g, cache.get(g), g.a / 2);
    const ElementLoad& load = sys.loads[static_cast<std::size_t>(e)];
    const int row = rb.begin({RowClass::Constraint, e, c.multiplier}, c.target - load.constant * t.load(kW));
    const int o = sys.map.element_offset(e);
    for (int j = 0; j < 12; ++j) rb.add(row, o + j, t.coeff(kW, j));
    add_load_columns(row, load, t.load(kW));
  }

  const auto n = static_cast<Eigen::Index>(sys.map.size());
  if (static_cast<Eigen::Index>(rhs.size()) != n)
    throw AssemblyError("equation count " + std::to_string(rhs.size()) + " does not match unknown count " +
                        std::to_string(n));
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
  return sys;
}

namespace {

constexpr double kSingularCondition = 1e15;

bool is_outlet(const UnknownMap& map, int col) {
  return col < UnknownMap::kPerElement * map.elements && col % UnknownMap::kPerElement >= 12;
}

}  // namespace

Solution solve(const GlobalSystem& sys) {
  const UnknownMap& map = sys.map;
  const auto& A = sys.matrix;
  const int n = map.size();
  const int E = map.elements;

  // Each outlet unknown is defined by exactly one connection row with unit
  // coefficient: x_out = b_r - sum(other entries of row r).
  std::vector<int> defining_row(static_cast<std::size_t>(n), -1);
  for (int r = 0; r < n; ++r) {
    const RowInfo& ri = sys.rows[static_cast<std::size_t>(r)];
    if (ri.kind == RowClass::Connection)
      defining_row[static_cast<std::size_t>(map.element_offset(ri.element) + 12 + ri.detail)] = r;
  }

  // Reduced unknowns: 12 inlets per element, then the multipliers.
  std::vector<int> reduced_col(static_cast<std::size_t>(n), -1);
  std::vector<int> full_col;
  full_col.reserve(static_cast<std::size_t>(12 * E + map.constraints));
  for (int c = 0; c < n; ++c) {
    if (is_outlet(map, c)) continue;
    reduced_col[static_cast<std::size_t>(c)] = static_cast<int>(full_col.size());
    full_col.push_back(c);
  }
  const auto m = static_cast<Eigen::Index>(full_col.size());

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(A.nonZeros()));
  Eigen::VectorXd rhs(m);
  std::vector<int> reduced_row_source;
  reduced_row_source.reserve(static_cast<std::size_t>(m));
  std::vector<double> row_scale;
  row_scale.reserve(static_cast<std::size_t>(m));
  std::vector<Triplet> row_entries;
  for (int r = 0; r < n; ++r) {
    if (sys.rows[static_cast<std::size_t>(r)].kind == RowClass::Connection) continue;
    const auto i = static_cast<int>(reduced_row_source.size());
    if (i >= m) throw AssemblyError("system has more non-connection rows than reduced unknowns");
    reduced_row_source.push_back(r);
    double b = sys.rhs(r);
    row_entries.clear();
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r); it; ++it) {
      const int c = static_cast<int>(it.col());
      const double v = it.value();
      const int def = defining_row[static_cast<std::size_t>(c)];
      if (def < 0) {
        row_entries.emplace_back(i, reduced_col[static_cast<std::size_t>(c)], v);
        continue;
      }
      b -= v * sys.rhs(def);
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator jt(A, def); jt; ++jt) {
        const int c2 = static_cast<int>(jt.col());
        if (c2 == c) continue;
        row_entries.emplace_back(i, reduced_col[static_cast<std::size_t>(c2)], -v * jt.value());
      }
    }
    // Equilibrate by the largest coefficient magnitude.
    double scale = 0;
    for (const Triplet& t : row_entries) scale = std::max(scale, std::abs(t.value()));
    if (scale == 0) {
      const RowInfo& ri = sys.rows[static_cast<std::size_t>(r)];
      throw SolveError(std::string("empty ") + row_class_name(ri.kind) + " equation for element " +
                       std::to_string(ri.element));
    }
    for (const Triplet& t : row_entries) triplets.emplace_back(t.row(), t.col(), t.value() / scale);
    row_scale.push_back(scale);
    rhs(i) = b / scale;
  }
  if (static_cast<Eigen::Index>(reduced_row_source.size()) != m)
    throw AssemblyError("reduced system is not square");

  Eigen::SparseMatrix<double> K(m, m);
  K.setFromTriplets(triplets.begin(), triplets.end());
  triplets.clear();
  triplets.shrink_to_fit();
  K.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) {
    std::string msg = "sparse factorization failed: " + lu.lastErrorMessage();
    const std::string marker = "ZERO COLUMN AT ";
    if (auto pos = msg.find(marker); pos != std::string::npos) {
      const long permuted = std::stol(msg.substr(pos + marker.size())) - 1;
      const Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> inverse = lu.colsPermutation().inverse();
      const int col = full_col[static_cast<std::size_t>(inverse.indices()(permuted))];
      msg = "singular system: zero pivot at unknown " + map.describe(col) +
            "; check the boundary and conjugation equations of that element";
    }
    throw SolveError(msg);
  }
  // Right-hand side of the reduced system for a full right-hand side b.
  auto reduce = [&](const Eigen::VectorXd& b) {
    Eigen::VectorXd out(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const int r = reduced_row_source[static_cast<std::size_t>(i)];
      double v = b(r);
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r); it; ++it) {
        const int def = defining_row[static_cast<std::size_t>(it.col())];
        if (def >= 0) v -= it.value() * b(def);
      }
      out(i) = v / row_scale[static_cast<std::size_t>(i)];
    }
    return out;
  };
  // Full unknown vector from the reduced solution, outlets by back-substitution.
  auto expand = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& b) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) x(full_col[static_cast<std::size_t>(i)]) = y(i);
    for (int c = 0; c < n; ++c) {
      const int def = defining_row[static_cast<std::size_t>(c)];
      if (def < 0) continue;
      CompensatedSum<double> v;
      v.add(b(def));
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, def); it; ++it)
        if (it.col() != c) v.add_product(-it.value(), x(it.col()));
      x(c) = v.value();
    }
    return x;
  };
  auto full_residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(n);
    for (int row = 0; row < n; ++row) {
      CompensatedSum<double> v;
      v.add(sys.rhs(row));
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, row); it; ++it)
        v.add_product(-it.value(), x(it.col()));
      r(row) = v.value();
    }
    return r;
  };

  Eigen::VectorXd y = lu.solve(rhs);
  // Iterative refinement with accurately summed residuals, first on the
  // inlets alone, then once on the full vector so that the remaining rounding
  // lands in the connection rows rather than in the conjugation rows.
  for (int step = 0; step < 2; ++step) y += lu.solve(reduce(full_residual(expand(y, sys.rhs))));
  Eigen::VectorXd x = expand(y, sys.rhs);
  {
    const Eigen::VectorXd r = full_residual(x);
    x += expand(lu.solve(reduce(r)), r);
  }
  // Inverse iteration from a fixed pseudo-random start: a (near) null space
  // of K shows up as enormous growth even when the pivots are not exactly zero.
  double norm_k = 0;
  {
    Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(m);
    for (Eigen::Index c = 0; c < K.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(K, c); it; ++it) row_sum(it.row()) += std::abs(it.value());
    norm_k = row_sum.maxCoeff();
  }
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = uniform(rng);
  double growth = 0;
  for (int it = 0; it < 2; ++it) {
    v /= v.cwiseAbs().maxCoeff();
    v = lu.solve(v).eval();
    growth = v.cwiseAbs().maxCoeff();
  }
  const double condition = norm_k * growth;
  if (!std::isfinite(condition) || condition > kSingularCondition) {
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    std::ostringstream msg;
    msg << "numerically singular system: condition estimate " << std::setprecision(3) << condition
        << ", near-null direction peaks at unknown " << map.describe(full_col[static_cast<std::size_t>(peak)])
        << "; check that the boundary conditions fix the rigid-body motions";
    throw SolveError(msg.str());
  }

  Solution sol;
  sol.material = sys.material;
  sol.unknowns = std::move(x);
  sol.multipliers.resize(static_cast<std::size_t>(map.constraints));
  for (int k = 0; k < map.constraints; ++k) sol.multipliers[static_cast<std::size_t>(k)] = sol.unknowns(map.multiplier(k));
  sol.loads.resize(sys.loads.size());
  for (std::size_t e = 0; e < sys.loads.size(); ++e) {
    double p = sys.loads[e].constant;
    for (const auto& [k, alpha] : sys.loads[e].multipliers) p += alpha * sol.multipliers[static_cast<std::size_t>(k)];
    sol.loads[e] = p;
  }

  sol.diagnostics.reduced_unknowns = static_cast<long>(m);
  sol.diagnostics.factor_nonzeros = static_cast<long>(lu.nnzL() + lu.nnzU());
  sol.diagnostics.condition_estimate = condition;
  sol.diagnostics.max_relative_residual = residual(sys, sol.unknowns);
  if (!sol.unknowns.allFinite() || !(sol.diagnostics.max_relative_residual <= 1e-6))
    throw SolveError("numerically singular system: relative residual " +
                     std::to_string(sol.diagnostics.max_relative_residual));
  return sol;
}

double residual(const GlobalSystem& sys, const Eigen::VectorXd& x) {
  const Eigen::VectorXd r = sys.matrix * x - sys.rhs;
  const double xnorm = x.lpNorm<Eigen::Infinity>();
  double worst = 0;
  for (Eigen::Index i = 0; i < sys.matrix.rows(); ++i) {
    const double row_norm = sys.matrix.row(i).cwiseAbs().sum();
    const double denom = row_norm * xnorm + std::abs(sys.rhs(i));
    if (denom > 0) worst = std::max(worst, std::abs(r(i)) / denom);
  }
  return worst;
}

void write_matrix(const GlobalSystem& sys, std::ostream& out) {
  const auto& A = sys.matrix;
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  out.precision(17);
  for (Eigen::Index r = 0; r < A.outerSize(); ++r)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace mms
