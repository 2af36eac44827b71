#pragma once

#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "subhol/chart_calculus.hpp"

namespace subhol {

class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotContactError : public StructureError {
 public:
  using StructureError::StructureError;
};

class MetricDegeneracyError : public StructureError {
 public:
  using StructureError::StructureError;
};

/// Chart data of a contact sub-pseudo-Riemannian manifold (M, theta, g).
struct ContactStructure {
  Chart chart;
  OneForm theta;
  FrameMetric metric;  // frame of D = ker theta and gram of g on it
  std::vector<Rational> basepoint;

  std::size_t n() const { return chart.dim(); }
  std::size_t rank() const { return metric.rank(); }
  std::size_t m() const { return metric.rank() / 2; }
};

/// Z = pi'(Z) xi + sum_a horizontal[a] E_a.
struct Projection {
  std::vector<ChartFunction> horizontal;
  ChartFunction vertical;
};

/// Connection in D. horizontal[a] is the matrix of nabla_{E_a} on frame
/// components: nabla_{E_a} E_b = sum_c horizontal[a][c][b] E_c. For extended
/// connections `reeb` plays the same role for nabla_xi.
struct Connection {
  std::vector<FunctionMatrix> horizontal;
  FunctionMatrix reeb;
  bool extended = false;
};

/// curvature[a][b][e][c] = (R(E_a,E_b) E_c)^e.
using CurvatureTable = std::vector<std::vector<FunctionMatrix>>;

enum class Execution { serial, parallel };

/// Validated structure together with everything derived from it. Expensive
/// tables are built once on first use and shared by concurrent readers.
class ContactGeometry {
 public:
  /// Throws StructureError (n < 5, non-horizontal frame, bad gram),
  /// NotContactError, or MetricDegeneracyError.
  explicit ContactGeometry(ContactStructure s);
  ContactGeometry(const ContactGeometry&) = delete;
  ContactGeometry& operator=(const ContactGeometry&) = delete;

  const ContactStructure& structure() const { return s_; }
  std::size_t n() const { return s_.n(); }
  std::size_t rank() const { return s_.rank(); }
  std::size_t m() const { return s_.m(); }
  const std::vector<VectorField>& frame() const { return s_.metric.frame; }
  const FunctionMatrix& gram() const { return s_.metric.gram; }
  const FunctionMatrix& gram_inverse() const { return gram_inv_; }

  const VectorField& reeb() const { return xi_; }
  /// dtheta(E_a, E_b).
  const FunctionMatrix& dtheta() const { return omega_; }
  Projection project(const VectorField& z) const;
  /// Decomposer for the basis E_1..E_2m, xi of TM.
  const BasisDecomposer& decomposer() const { return dec_; }

  /// Frame components of pi[E_a, E_b] and the value theta([E_a, E_b]).
  const std::vector<ChartFunction>& bracket_horizontal(std::size_t a, std::size_t b) const {
    return beta_[a][b];
  }
  const ChartFunction& bracket_vertical(std::size_t a, std::size_t b) const { return rho_[a][b]; }
  /// Frame components of pi[xi, E_b] and theta([xi, E_b]).
  const std::vector<ChartFunction>& reeb_bracket_horizontal(std::size_t b) const { return kappa_[b]; }
  const ChartFunction& reeb_bracket_vertical(std::size_t b) const { return kappa_v_[b]; }

  const Connection& horizontal_connection() const { return conn_; }
  const CurvatureTable& schouten_curvature() const;

  const FunctionMatrix& tau() const { return tau_; }
  bool is_K_contact() const { return is_zero(tau_); }
  /// Coefficient array of (dtheta)^{-1}, normalized so its pairing with dtheta is -4m.
  const FunctionMatrix& dtheta_inverse() const { return dtheta_inv_; }
  /// (1/4m) R((dtheta)^{-1}).
  const FunctionMatrix& wagner_endomorphism() const;

  /// nabla^N_xi Y = [xi, Y] + N Y, horizontal part nabla^g.
  Connection extended_connection(const FunctionMatrix& n_endo) const;

 private:
  ContactStructure s_;
  FunctionMatrix gram_inv_;
  VectorField xi_;
  FunctionMatrix omega_;
  BasisDecomposer dec_;
  std::vector<std::vector<std::vector<ChartFunction>>> beta_;
  std::vector<std::vector<ChartFunction>> rho_;
  std::vector<std::vector<ChartFunction>> kappa_;
  std::vector<ChartFunction> kappa_v_;
  Connection conn_;
  FunctionMatrix tau_;
  FunctionMatrix dtheta_inv_;

  mutable std::once_flag curv_once_, wagner_once_;
  mutable CurvatureTable curvature_;
  mutable FunctionMatrix wagner_;

  friend CurvatureTable schouten_curvature(const ContactGeometry& geo, Execution ex);
};

/// Curvature of the horizontal connection on frame pairs, including the
/// term -pi[pi'[X,Y], Z]. Both execution modes give identical tables.
CurvatureTable schouten_curvature(const ContactGeometry& geo, Execution ex);

/// R(B) = sum_{a,b} B^{ab} R(E_a, E_b).
FunctionMatrix curvature_of_bivector(const CurvatureTable& r, const FunctionMatrix& b);

/// R^N(xi, E_a) for an extended connection, one endomorphism per a.
std::vector<FunctionMatrix> reeb_curvature(const ContactGeometry& geo, const Connection& conn);

/// Reeb field from theta alone, checked by back-substitution:
/// theta(xi) = 1 and dtheta(xi, d_i) = 0 for every coordinate field.
VectorField reeb_field(const ContactStructure& s);

}  // namespace subhol
