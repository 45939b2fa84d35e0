#pragma once

#include "mms/boundary.hpp"
#include "mms/constraints.hpp"
#include "mms/element.hpp"
#include "mms/mesh.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mms {

struct Material {
  double D = 1;
  double nu = 0;
};

/// Unknown layout: 24 per element (inlet z1..z12, outlet z13..z24), then
/// one multiplier per constraint.
struct UnknownMap {
  int elements = 0;
  int constraints = 0;

  static constexpr int kPerElement = 24;

  int element_offset(int e) const { return kPerElement * e; }
  int multiplier(int k) const { return kPerElement * elements + k; }
  int size() const { return kPerElement * elements + constraints; }

  /// Human-readable name of an unknown, e.g. "element 3 z14 (outlet X w)".
  std::string describe(int index) const;
};

enum class RowClass { Connection, Conjugation, Boundary, Constraint };

const char* row_class_name(RowClass c);

struct RowInfo {
  RowClass kind = RowClass::Connection;
  int element = 0;  // owning element, or the attachment element of a constraint
  int detail = 0;   // connection: outlet parameter 0..11; boundary/conjugation: side; constraint: index
};

/// P_e = constant + sum(alpha * lambda_k).
struct ElementLoad {
  double constant = 0;
  std::vector<std::pair<int, double>> multipliers;  // (constraint index, alpha)
};

struct GlobalSystem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::VectorXd rhs;
  UnknownMap map;
  std::vector<RowInfo> rows;
  std::vector<ElementLoad> loads;
  std::vector<ConstraintContribution> constraints;
  Material material;
};

class AssemblyError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SolveError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Connection rows (outlet = transfer(full span) * inlet + P * load),
/// conjugation rows for each interior edge, three rows per boundary side and
/// one target row per point constraint.
GlobalSystem assemble(const Mesh& mesh, const BoundarySpec& boundary,
                      std::span<const PointConstraint> constraints, double q = 0,
                      Material material = {});

struct SolveDiagnostics {
  double max_relative_residual = 0;
  long reduced_unknowns = 0;
  long factor_nonzeros = 0;
  double condition_estimate = 0;  // infinity-norm estimate of the reduced, row-scaled matrix
};

struct Solution {
  Eigen::VectorXd unknowns;
  std::vector<double> loads;        // resolved P per element
  std::vector<double> multipliers;  // lambda per constraint
  Material material;
  SolveDiagnostics diagnostics;

  StateVector<double> inlet(int e) const { return unknowns.segment<12>(24 * e); }
  StateVector<double> outlet(int e) const { return unknowns.segment<12>(24 * e + 12); }
};

/// Eliminates the outlet unknowns through the connection rows, row-scales the
/// remaining system and factors it with a sparse LU (COLAMD ordering).
Solution solve(const GlobalSystem& system);

/// max_i |A_i x - b_i| / (|A_i|_1 |x|_inf + |b_i|).
double residual(const GlobalSystem& system, const Eigen::VectorXd& x);
inline double residual(const GlobalSystem& system, const Solution& s) { return residual(system, s.unknowns); }

/// "row col value" per nonzero, 0-based, preceded by a "rows cols nnz" header.
void write_matrix(const GlobalSystem& system, std::ostream& out);

}  // namespace mms
