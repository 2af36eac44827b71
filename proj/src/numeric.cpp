#include "subhol/numeric.hpp"

#include <array>
#include <cmath>

namespace subhol {

namespace {

std::span<const double> view(const Vector& x) { return {x.data(), std::size_t(x.size())}; }

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGLNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};
constexpr int kGLPanels = 4;

}  // namespace

CompiledMatrix::CompiledMatrix(const FunctionMatrix& m) {
  rows_ = Eigen::Index(m.size());
  cols_ = rows_ ? Eigen::Index(m[0].size()) : 0;
  for (Eigen::Index i = 0; i < rows_; ++i)
    for (Eigen::Index j = 0; j < cols_; ++j) {
      const auto& f = m[std::size_t(i)][std::size_t(j)];
      if (!f.is_zero()) entries_.push_back({i, j, CompiledFunction(f)});
    }
}

Matrix CompiledMatrix::operator()(std::span<const double> x) const {
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const auto& e : entries_) out(e.row, e.col) = e.f(x);
  return out;
}

void CompiledMatrix::accumulate(std::span<const double> x, double c, Matrix& out) const {
  if (c == 0.0) return;
  for (const auto& e : entries_) out(e.row, e.col) += c * e.f(x);
}

NumericContact::NumericContact(const ContactGeometry& geo) : n_(geo.n()), r_(geo.rank()) {
  const auto& s = geo.structure();
  for (const auto& f : s.theta.components) theta_.emplace_back(f);
  for (const auto& f : geo.reeb().components) xi_.emplace_back(f);
  frame_.resize(n_);
  dxi_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t a = 0; a < r_; ++a) frame_[i].emplace_back(geo.frame()[a].components[i]);
    for (std::size_t j = 0; j < n_; ++j) dxi_[i].emplace_back(geo.reeb().components[i].derivative(j));
  }
  gram_ = CompiledMatrix(geo.gram());
  dtheta_ = CompiledMatrix(geo.dtheta());
  const auto& table = geo.schouten_curvature();
  curv_.resize(r_);
  for (std::size_t a = 0; a < r_; ++a)
    for (std::size_t b = 0; b < r_; ++b) curv_[a].emplace_back(table[a][b]);
  wagner_ = CompiledMatrix(geo.wagner_endomorphism());
}

double NumericContact::theta(std::span<const double> x, const Vector& v) const {
  double s = 0;
  for (std::size_t i = 0; i < n_; ++i)
    if (v(Eigen::Index(i)) != 0.0) s += theta_[i](x) * v(Eigen::Index(i));
  return s;
}

Matrix NumericContact::frame(std::span<const double> x) const {
  Matrix e(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(r_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t a = 0; a < r_; ++a) e(Eigen::Index(i), Eigen::Index(a)) = frame_[i][a](x);
  return e;
}

Vector NumericContact::reeb(std::span<const double> x) const {
  Vector v(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) v(Eigen::Index(i)) = xi_[i](x);
  return v;
}

Matrix NumericContact::reeb_jacobian(std::span<const double> x) const {
  Matrix j(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) j(Eigen::Index(i), Eigen::Index(k)) = dxi_[i][k](x);
  return j;
}

Matrix NumericContact::curvature(std::size_t a, std::size_t b, std::span<const double> x) const {
  return curv_[a][b](x);
}

Vector NumericContact::split(std::span<const double> x, const Vector& v) const {
  Matrix basis(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  basis.leftCols(Eigen::Index(r_)) = frame(x);
  basis.col(Eigen::Index(r_)) = reeb(x);
  return basis.partialPivLu().solve(v);
}

void NumericContact::reeb_flow(const Vector& p, double f, Vector& q, Vector* w) const {
  q = p;
  if (f == 0.0) return;
  const int steps = std::max(1, int(std::ceil(std::abs(f) / 0.02)));
  const double h = f / steps;
  const bool var = w != nullptr;
  for (int k = 0; k < steps; ++k) {
    auto rhs = [&](const Vector& qq, const Vector& ww, Vector& dq, Vector& dw) {
      dq = reeb(view(qq));
      if (var) dw = reeb_jacobian(view(qq)) * ww;
    };
    Vector k1q, k2q, k3q, k4q, k1w, k2w, k3w, k4w;
    const Vector w0 = var ? *w : Vector();
    rhs(q, w0, k1q, k1w);
    rhs(q + 0.5 * h * k1q, var ? Vector(w0 + 0.5 * h * k1w) : w0, k2q, k2w);
    rhs(q + 0.5 * h * k2q, var ? Vector(w0 + 0.5 * h * k2w) : w0, k3q, k3w);
    rhs(q + h * k3q, var ? Vector(w0 + h * k3w) : w0, k4q, k4w);
    q += h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
    if (var) *w = w0 + h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
  }
}

NumericConnection::NumericConnection(const Connection& conn) : extended_(conn.extended) {
  for (const auto& g : conn.horizontal) gamma_.emplace_back(g);
  if (extended_) reeb_ = CompiledMatrix(conn.reeb);
  r_ = Eigen::Index(conn.horizontal.size());
}

Matrix NumericConnection::contract(std::span<const double> x, const Vector& c) const {
  Matrix a = Matrix::Zero(r_, r_);
  for (Eigen::Index i = 0; i < r_; ++i) gamma_[std::size_t(i)].accumulate(x, c(i), a);
  if (extended_) reeb_.accumulate(x, c(r_), a);
  return a;
}

void Segment::eval(double, Vector&, Vector&) const { throw CurveError("segment has no explicit parametrization"); }
Vector Segment::field(const Vector&) const { throw CurveError("segment is not a flow"); }

std::shared_ptr<PolySegment> PolySegment::line(const Vector& a, const Vector& b) {
  std::vector<std::vector<double>> c;
  for (Eigen::Index i = 0; i < a.size(); ++i) c.push_back({a(i), b(i) - a(i)});
  return std::make_shared<PolySegment>(std::move(c));
}

void PolySegment::eval(double s, Vector& pos, Vector& vel) const {
  const Eigen::Index n = Eigen::Index(c_.size());
  pos.resize(n);
  vel.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = c_[std::size_t(i)];
    double p = 0, v = 0;
    for (std::size_t k = c.size(); k-- > 0;) {
      p = p * s + c[k];
      if (k > 0) v = v * s + double(k) * c[k];
    }
    pos(i) = p;
    vel(i) = v;
  }
}

double theta_integral(const NumericContact& nc, const Segment& seg, double upto) {
  if (upto == 0.0) return 0.0;
  const double panel = upto / kGLPanels;
  double sum = 0;
  Vector p, v;
  for (int k = 0; k < kGLPanels; ++k) {
    const double mid = (k + 0.5) * panel;
    for (std::size_t q = 0; q < kGLNodes.size(); ++q) {
      seg.eval(mid + 0.5 * panel * kGLNodes[q], p, v);
      sum += kGLWeights[q] * nc.theta(view(p), v);
    }
  }
  return 0.5 * panel * sum;
}

HorizontalizedSegment::HorizontalizedSegment(std::shared_ptr<const Segment> base, const NumericContact& nc, double f0)
    : base_(std::move(base)), nc_(&nc), f0_(f0) {
  if (base_->implicit()) throw CurveError("horizontalize: segment must be explicit");
}

double HorizontalizedSegment::f(double s) const { return f0_ - theta_integral(*nc_, *base_, s); }

void HorizontalizedSegment::eval(double s, Vector& pos, Vector& vel) const {
  Vector p, v;
  base_->eval(s, p, v);
  const double fs = f(s);
  const double fdot = -nc_->theta(view(p), v);
  Vector w = v;
  nc_->reeb_flow(p, fs, pos, &w);
  vel = w + fdot * nc_->reeb(view(pos));
}

Vector FrameFlowSegment::field(const Vector& x) const {
  const auto xs = view(x);
  const Eigen::Index r = c_.size() - 1;
  Vector v = nc_->frame(xs) * c_.head(r);
  if (c_(r) != 0.0) v += c_(r) * nc_->reeb(xs);
  return v;
}

Path horizontalize(const NumericContact& nc, const Path& mu, double* closing_defect) {
  Path out;
  out.start = mu.start;
  double f = 0;
  for (const auto& seg : mu.segments) {
    out.segments.push_back(std::make_shared<HorizontalizedSegment>(seg, nc, f));
    f -= theta_integral(nc, *seg);
  }
  if (closing_defect) *closing_defect = f;
  return out;
}

}  // namespace subhol
