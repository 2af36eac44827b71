#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "subhol/algebra.hpp"
#include "subhol/contact.hpp"

namespace subhol {

/// Sparse matrix of compiled rational functions.
class CompiledMatrix {
 public:
  CompiledMatrix() = default;
  explicit CompiledMatrix(const FunctionMatrix& m);

  Matrix operator()(std::span<const double> x) const;
  /// out += c * M(x).
  void accumulate(std::span<const double> x, double c, Matrix& out) const;
  bool is_zero() const { return entries_.empty(); }

 private:
  struct Entry {
    Eigen::Index row, col;
    CompiledFunction f;
  };
  Eigen::Index rows_ = 0, cols_ = 0;
  std::vector<Entry> entries_;
};

/// Double-precision view of a contact geometry: frame, Reeb field, forms,
/// gram, curvature and the Wagner endomorphism, all in frame components.
class NumericContact {
 public:
  explicit NumericContact(const ContactGeometry& geo);

  std::size_t n() const { return n_; }
  std::size_t rank() const { return r_; }

  double theta(std::span<const double> x, const Vector& v) const;
  Matrix frame(std::span<const double> x) const;  // n x r, columns E_a
  Vector reeb(std::span<const double> x) const;
  Matrix reeb_jacobian(std::span<const double> x) const;  // d xi^i / d x^j
  Matrix gram(std::span<const double> x) const { return gram_(x); }
  Matrix dtheta(std::span<const double> x) const { return dtheta_(x); }
  /// R(E_a, E_b) at x as a frame endomorphism.
  Matrix curvature(std::size_t a, std::size_t b, std::span<const double> x) const;
  Matrix wagner(std::span<const double> x) const { return wagner_(x); }
  /// Components of v in the basis E_1..E_r, xi (last entry = theta(v)).
  Vector split(std::span<const double> x, const Vector& v) const;

  /// phi_f(p) and d phi_f (w), by RK4 on the flow of xi and its variation.
  void reeb_flow(const Vector& p, double f, Vector& q, Vector* w) const;

 private:
  std::size_t n_, r_;
  std::vector<CompiledFunction> theta_, xi_;
  std::vector<std::vector<CompiledFunction>> frame_, dxi_;
  CompiledMatrix gram_, dtheta_, wagner_;
  std::vector<std::vector<CompiledMatrix>> curv_;
};

/// Connection coefficients in doubles; contract(x, c) is the matrix
/// sum_a c^a Gamma_a(x) + c^xi Gamma_xi(x).
class NumericConnection {
 public:
  explicit NumericConnection(const Connection& conn);
  bool extended() const { return extended_; }
  Matrix contract(std::span<const double> x, const Vector& c) const;

 private:
  std::vector<CompiledMatrix> gamma_;
  CompiledMatrix reeb_;
  bool extended_;
  Eigen::Index r_;
};

class CurveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Piece of a chart curve on the parameter interval [0,1]. Explicit segments
/// know their position and velocity; implicit ones are flows of a vector
/// field and are integrated together with the transport equation.
class Segment {
 public:
  virtual ~Segment() = default;
  virtual bool implicit() const = 0;
  virtual void eval(double s, Vector& pos, Vector& vel) const;
  virtual Vector field(const Vector& x) const;
  /// Whether theta(velocity) vanishes by construction.
  virtual bool horizontal_by_construction() const { return false; }
};

/// Polynomial coordinates: x^i(s) = sum_k coeffs[i][k] s^k.
class PolySegment : public Segment {
 public:
  explicit PolySegment(std::vector<std::vector<double>> coeffs) : c_(std::move(coeffs)) {}
  static std::shared_ptr<PolySegment> line(const Vector& a, const Vector& b);
  bool implicit() const override { return false; }
  void eval(double s, Vector& pos, Vector& vel) const override;

 private:
  std::vector<std::vector<double>> c_;
};

/// s -> phi_{f(s)} mu(s) with f(s) = f0 - int_0^s theta(mu'(sigma)) d sigma.
class HorizontalizedSegment : public Segment {
 public:
  HorizontalizedSegment(std::shared_ptr<const Segment> base, const NumericContact& nc, double f0);
  bool implicit() const override { return false; }
  void eval(double s, Vector& pos, Vector& vel) const override;
  double f(double s) const;

 private:
  std::shared_ptr<const Segment> base_;
  const NumericContact* nc_;
  double f0_;
};

/// Flow for unit time of T(sum_a c^a E_a + c^xi xi): constant frame coefficients.
class FrameFlowSegment : public Segment {
 public:
  FrameFlowSegment(const NumericContact& nc, Vector coeffs) : nc_(&nc), c_(std::move(coeffs)) {}
  bool implicit() const override { return true; }
  Vector field(const Vector& x) const override;
  bool horizontal_by_construction() const override { return c_(c_.size() - 1) == 0.0; }
  const Vector& coeffs() const { return c_; }
  const NumericContact& contact() const { return *nc_; }

 private:
  const NumericContact* nc_;
  Vector c_;  // r + 1 entries, last = xi component
};

struct Path {
  Vector start;
  std::vector<std::shared_ptr<const Segment>> segments;
};

/// Horizontalization of a path of explicit segments; f accumulates over the
/// joins so the result is continuous. `closing_defect` receives f(1).
Path horizontalize(const NumericContact& nc, const Path& mu, double* closing_defect = nullptr);

/// int_0^1 theta(mu') for an explicit segment (composite Gauss-Legendre).
double theta_integral(const NumericContact& nc, const Segment& seg, double upto = 1.0);

}  // namespace subhol
