#include "subhol/holonomy.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <random>

namespace subhol {

namespace {

std::span<const double> view(const Vector& x) { return {x.data(), std::size_t(x.size())}; }

struct SegmentState {
  Vector x;
  Matrix y;
};

// Explicit segment traversed backwards.
class ReversedSegment : public Segment {
 public:
  explicit ReversedSegment(std::shared_ptr<const Segment> base) : base_(std::move(base)) {}
  bool implicit() const override { return false; }
  void eval(double s, Vector& pos, Vector& vel) const override {
    base_->eval(1.0 - s, pos, vel);
    vel = -vel;
  }
  bool horizontal_by_construction() const override { return base_->horizontal_by_construction(); }

 private:
  std::shared_ptr<const Segment> base_;
};

void derivative(const NumericContact& nc, const NumericConnection& conn, const Segment& seg, double s,
                const SegmentState& z, SegmentState& dz) {
  Vector pos, vel;
  if (seg.implicit()) {
    pos = z.x;
    vel = seg.field(z.x);
  } else {
    seg.eval(s, pos, vel);
  }
  Vector c = nc.split(view(pos), vel);
  if (!conn.extended()) c(c.size() - 1) = 0.0;
  dz.x = vel;
  dz.y = -conn.contract(view(pos), c) * z.y;
}

SegmentState integrate(const NumericContact& nc, const NumericConnection& conn, const Segment& seg,
                       const Vector& x0, long steps) {
  const Eigen::Index r = Eigen::Index(nc.rank());
  SegmentState z{x0, Matrix::Identity(r, r)};
  const double h = 1.0 / double(steps);
  SegmentState k1, k2, k3, k4, tmp;
  for (long i = 0; i < steps; ++i) {
    const double s = double(i) * h;
    derivative(nc, conn, seg, s, z, k1);
    tmp = {z.x + 0.5 * h * k1.x, z.y + 0.5 * h * k1.y};
    derivative(nc, conn, seg, s + 0.5 * h, tmp, k2);
    tmp = {z.x + 0.5 * h * k2.x, z.y + 0.5 * h * k2.y};
    derivative(nc, conn, seg, s + 0.5 * h, tmp, k3);
    tmp = {z.x + h * k3.x, z.y + h * k3.y};
    derivative(nc, conn, seg, s + h, tmp, k4);
    z.x += h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    z.y += h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
  }
  if (!seg.implicit()) {
    Vector pos, vel;
    seg.eval(1.0, pos, vel);
    z.x = pos;
  }
  return z;
}

void check_horizontal(const NumericContact& nc, const Segment& seg) {
  if (seg.horizontal_by_construction()) return;
  if (seg.implicit()) throw CurveError("parallel_transport: non-horizontal flow with a horizontal-only connection");
  Vector pos, vel;
  for (int k = 0; k <= kHorizontalitySamples; ++k) {
    seg.eval(double(k) / kHorizontalitySamples, pos, vel);
    if (std::abs(nc.theta(view(pos), vel)) > kHorizontalityTol)
      throw CurveError("parallel_transport: curve is not horizontal (|theta(velocity)| above 1e-8)");
  }
}

// End point of an implicit flow, integrated finely.
Vector flow_end(const Segment& seg, const Vector& x0) {
  const int steps = 512;
  const double h = 1.0 / steps;
  Vector x = x0;
  for (int i = 0; i < steps; ++i) {
    const Vector k1 = seg.field(x);
    const Vector k2 = seg.field(x + 0.5 * h * k1);
    const Vector k3 = seg.field(x + 0.5 * h * k2);
    const Vector k4 = seg.field(x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector unit(std::size_t n, std::size_t i) { return Vector::Unit(Eigen::Index(n), Eigen::Index(i)); }

// Rectangle x -> x + a e_i -> x + a e_i + b e_j -> x + b e_j -> x.
std::vector<std::shared_ptr<const Segment>> rectangle(const Vector& x, std::size_t i, std::size_t j, double a,
                                                      double b) {
  const std::size_t n = std::size_t(x.size());
  const Vector p1 = x + a * unit(n, i), p2 = p1 + b * unit(n, j), p3 = x + b * unit(n, j);
  return {PolySegment::line(x, p1), PolySegment::line(p1, p2), PolySegment::line(p2, p3), PolySegment::line(p3, x)};
}

double loop_theta(const NumericContact& nc, const std::vector<std::shared_ptr<const Segment>>& segs) {
  double s = 0;
  for (const auto& g : segs) s += theta_integral(nc, *g);
  return s;
}

std::optional<Loop> make_loop(const NumericContact& nc, const Vector& x, double scale, LoopKind kind,
                              std::uint64_t seed, double tol) {
  const std::size_t n = nc.n();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> coord(0, n - 1);
  std::bernoulli_distribution flip(0.5);
  auto plane = [&](std::size_t& i, std::size_t& j) {
    i = coord(rng);
    do j = coord(rng);
    while (j == i);
  };
  Loop loop;
  loop.kind = kind;
  loop.scale = scale;
  loop.path.start = x;
  if (scale == 0.0) return loop;

  if (kind == LoopKind::coordinate) {
    std::size_t i, j;
    plane(i, j);
    loop.path.segments = rectangle(x, i, j, flip(rng) ? scale : -scale, scale);
    return loop;
  }
  if (kind == LoopKind::closed_by_reeb) {
    std::size_t i, j;
    plane(i, j);
    Path mu{x, rectangle(x, i, j, flip(rng) ? scale : -scale, scale)};
    double f1 = 0;
    loop.path = horizontalize(nc, mu, &f1);
    if (f1 != 0.0) {
      Vector c = Vector::Zero(Eigen::Index(nc.rank() + 1));
      c(Eigen::Index(nc.rank())) = -f1;
      loop.path.segments.push_back(std::make_shared<FrameFlowSegment>(nc, c));
    }
    loop.closing_defect = 0;
    return loop;
  }
  // Horizontal: two rectangles with opposite theta-areas, horizontalized.
  for (int attempt = 0; attempt < 12; ++attempt) {
    std::size_t i, j, k, l;
    plane(i, j);
    do plane(k, l);
    while ((k == i && l == j) || (k == j && l == i));
    auto first = rectangle(x, i, j, flip(rng) ? scale : -scale, scale);
    const double a1 = loop_theta(nc, first);
    const double side = scale;
    auto area2 = [&](double len) { return loop_theta(nc, rectangle(x, k, l, side, len)); };
    double l0 = scale, l1 = -scale;
    double g0 = a1 + area2(l0), g1 = a1 + area2(l1);
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
      if (std::abs(g1) <= 1e-17) {
        ok = true;
        break;
      }
      if (g1 == g0) break;
      const double l2 = l1 - g1 * (l1 - l0) / (g1 - g0);
      l0 = l1;
      g0 = g1;
      l1 = l2;
      if (!std::isfinite(l1) || std::abs(l1) > 4 * scale) break;
      g1 = a1 + area2(l1);
    }
    if (!ok && !(std::isfinite(g1) && std::abs(g1) <= tol)) continue;
    Path mu{x, first};
    for (auto& g : rectangle(x, k, l, side, l1)) mu.segments.push_back(g);
    double f1 = 0;
    loop.path = horizontalize(nc, mu, &f1);
    loop.closing_defect = std::abs(f1);
    if (loop.closing_defect > tol) continue;
    return loop;
  }
  return std::nullopt;
}

Matrix curvature_of(const NumericContact& nc, const Matrix& b, std::span<const double> y) {
  const std::size_t r = nc.rank();
  Matrix out = Matrix::Zero(Eigen::Index(r), Eigen::Index(r));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t c = 0; c < r; ++c) {
      const double w = b(Eigen::Index(a), Eigen::Index(c));
      if (w != 0.0 && a != c) out += w * nc.curvature(a, c, y);
    }
  return out;
}

std::size_t half_trace_stable(const std::vector<std::size_t>& trace) {
  if (trace.empty()) return 1;
  return trace[trace.size() / 2] == trace.back() ? 1 : 0;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix(seed ^ splitmix(index + 0x632be59bd9b4e019ULL));
}

TransportResult parallel_transport(const NumericContact& nc, const NumericConnection& conn, const Path& path,
                                   double tol) {
  const Eigen::Index r = Eigen::Index(nc.rank());
  if (path.start.size() != Eigen::Index(nc.n())) throw CurveError("parallel_transport: start point has wrong dimension");
  TransportResult res{Matrix::Identity(r, r), 0.0, path.start};
  if (path.segments.empty()) return res;
  const double seg_tol = tol / double(path.segments.size());
  try {
    for (const auto& seg : path.segments) {
      if (!conn.extended()) check_horizontal(nc, *seg);
      if (!seg->implicit()) {
        Vector p0, v0;
        seg->eval(0.0, p0, v0);
        if ((p0 - res.end).norm() > 1e-9 * (1.0 + res.end.norm()))
          throw CurveError("parallel_transport: path is not continuous at a segment join");
      }
      long steps = 8;
      int stalled = 0;
      double prev_err = std::numeric_limits<double>::infinity();
      SegmentState coarse = integrate(nc, conn, *seg, res.end, steps);
      for (;;) {
        SegmentState fine = integrate(nc, conn, *seg, res.end, 2 * steps);
        const double err = (fine.y - coarse.y).norm() / 15.0;
        if (!std::isfinite(err) || !fine.x.allFinite())
          throw CurveError("parallel_transport: solution left the chart's validity region");
        if (err <= seg_tol) {
          const double roundoff = double(2 * steps) * std::numeric_limits<double>::epsilon() * fine.y.norm();
          res.est_error += err + roundoff;
          res.matrix = fine.y * res.matrix;
          res.end = fine.x;
          break;
        }
        // RK4 shrinks the error 16-fold per halving; a stalled estimate will not recover.
        stalled = steps >= 128 && err > 0.25 * prev_err ? stalled + 1 : 0;
        if (stalled >= 3) throw TransportError("parallel_transport: step halving does not converge");
        prev_err = err;
        steps *= 2;
        if (1.0 / double(2 * steps) < kMinStep)
          throw TransportError("parallel_transport: tolerance not reached at the minimum step");
        coarse = std::move(fine);
      }
    }
  } catch (const PoleError&) {
    throw CurveError("parallel_transport: coefficient pole on the curve");
  }
  return res;
}

std::vector<std::optional<TransportResult>> transport_batch(const NumericContact& nc, const NumericConnection& conn,
                                                            const std::vector<Path>& paths, double tol,
                                                            Execution ex) {
  std::vector<std::optional<TransportResult>> out(paths.size());
  auto one = [&](std::size_t i) {
    try {
      out[i] = parallel_transport(nc, conn, paths[i], tol);
    } catch (const std::exception&) {
      out[i].reset();
    }
  };
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(paths.size()); ++i) one(std::size_t(i));
  } else {
    for (std::size_t i = 0; i < paths.size(); ++i) one(i);
  }
  return out;
}

Path reverse(const NumericContact& nc, const Path& p) {
  // Locate the start of every segment.
  std::vector<Vector> starts;
  Vector x = p.start;
  for (const auto& seg : p.segments) {
    starts.push_back(x);
    if (seg->implicit()) {
      x = flow_end(*seg, x);
    } else {
      Vector v;
      seg->eval(1.0, x, v);
    }
  }
  Path out;
  out.start = x;
  for (std::size_t k = p.segments.size(); k-- > 0;) {
    const auto& seg = p.segments[k];
    if (seg->implicit()) {
      auto ff = std::dynamic_pointer_cast<const FrameFlowSegment>(seg);
      if (!ff) throw CurveError("reverse: unsupported implicit segment");
      out.segments.push_back(std::make_shared<FrameFlowSegment>(nc, Vector(-ff->coeffs())));
    } else {
      out.segments.push_back(std::make_shared<ReversedSegment>(seg));
    }
  }
  return out;
}

std::vector<Loop> loop_family(const NumericContact& nc, const Vector& x, double scale, int count, LoopKind kind,
                              std::uint64_t seed, double tol) {
  std::vector<Loop> out;
  for (int i = 0; i < count; ++i)
    if (auto l = make_loop(nc, x, scale, kind, stream_seed(seed, std::uint64_t(i)), tol)) out.push_back(std::move(*l));
  return out;
}

Path random_frame_path(const NumericContact& nc, const Vector& x, double amplitude, bool with_reeb,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> pieces(1, 3);
  Path p;
  p.start = x;
  const int k = pieces(rng);
  const Eigen::Index r = Eigen::Index(nc.rank());
  for (int i = 0; i < k; ++i) {
    Vector c(r + 1);
    for (Eigen::Index a = 0; a < r; ++a) c(a) = amplitude * nd(rng);
    c(r) = with_reeb ? amplitude * nd(rng) : 0.0;
    p.segments.push_back(std::make_shared<FrameFlowSegment>(nc, c));
  }
  return p;
}

std::vector<Matrix> dtheta_kernel(const Matrix& omega) {
  const Eigen::Index r = omega.rows();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> idx;
  for (Eigen::Index a = 0; a < r; ++a)
    for (Eigen::Index b = a + 1; b < r; ++b) idx.emplace_back(a, b);
  const Eigen::Index N = Eigen::Index(idx.size());
  Matrix phi(1, N);
  for (Eigen::Index k = 0; k < N; ++k) phi(0, k) = 2 * omega(idx[std::size_t(k)].first, idx[std::size_t(k)].second);
  std::vector<Matrix> out;
  auto to_bivector = [&](const Vector& v) {
    Matrix b = Matrix::Zero(r, r);
    for (Eigen::Index k = 0; k < N; ++k) {
      b(idx[std::size_t(k)].first, idx[std::size_t(k)].second) = v(k);
      b(idx[std::size_t(k)].second, idx[std::size_t(k)].first) = -v(k);
    }
    return b;
  };
  if (phi.norm() == 0.0) {
    for (Eigen::Index k = 0; k < N; ++k) out.push_back(to_bivector(Vector::Unit(N, k)));
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(phi, Eigen::ComputeFullV);
  for (Eigen::Index k = 1; k < N; ++k) out.push_back(to_bivector(svd.matrixV().col(k)));
  return out;
}

AlgebraResult ambrose_singer_algebra(const ContactGeometry& geo, const NumericContact& nc, const Vector& x,
                                     HolonomyMode mode, const SamplingOptions& opt) {
  if (mode == HolonomyMode::wagner)
    throw std::invalid_argument("ambrose_singer_algebra: use holonomy_by_sampling for the Wagner connection");
  const bool horizontal = mode == HolonomyMode::horizontal;
  const Connection conn_sym = horizontal ? geo.horizontal_connection() : geo.extended_connection(geo.tau());
  const NumericConnection conn(conn_sym);
  const std::size_t r = nc.rank();

  std::vector<Path> paths;
  paths.push_back(Path{x, {}});
  for (int i = 1; i <= opt.budget; ++i)
    paths.push_back(random_frame_path(nc, x, 0.3, !horizontal, stream_seed(opt.seed, std::uint64_t(i))));
  const auto results = transport_batch(nc, conn, paths, opt.ode_tol, opt.execution);

  AlgebraResult out;
  LieAlgebraSpan span(r, opt.rank_tol);
  for (const auto& res : results) {
    if (!res) {
      ++out.discarded;
      out.dimension_trace.push_back(span.dim());
      continue;
    }
    const auto y = view(res->end);
    const Matrix pinv = res->matrix.inverse();
    std::vector<Matrix> gens;
    if (horizontal) {
      for (const auto& b : dtheta_kernel(nc.dtheta(y))) gens.push_back(pinv * curvature_of(nc, b, y) * res->matrix);
    } else {
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b) gens.push_back(pinv * nc.curvature(a, b, y) * res->matrix);
    }
    span = span_union(span, gens);
    ++out.generators;
    out.dimension_trace.push_back(span.dim());
  }
  out.stable = half_trace_stable(out.dimension_trace) == 1;
  out.algebra = span.empty() ? span : lie_closure(span);
  return out;
}

AlgebraResult holonomy_by_sampling(const NumericContact& nc, const NumericConnection& conn, const Vector& x,
                                   const SamplingOptions& opt) {
  const std::size_t r = nc.rank();
  const Matrix id = Matrix::Identity(Eigen::Index(r), Eigen::Index(r));
  AlgebraResult out;
  std::vector<Matrix> logs;
  std::uint64_t index = 0;
  for (double scale : opt.scales) {
    std::vector<Path> paths;
    std::vector<std::uint64_t> seeds;
    std::vector<LoopKind> kinds;
    for (int i = 0; i < opt.loops; ++i, ++index) {
      const LoopKind kind = !conn.extended() ? LoopKind::horizontal
                                             : (i % 3 == 0   ? LoopKind::coordinate
                                                : i % 3 == 1 ? LoopKind::closed_by_reeb
                                                             : LoopKind::horizontal);
      const std::uint64_t sd = stream_seed(opt.seed, index);
      auto loop = make_loop(nc, x, scale, kind, sd, 1e-12);
      if (!loop) {
        ++out.discarded;
        continue;
      }
      paths.push_back(std::move(loop->path));
      seeds.push_back(sd);
      kinds.push_back(kind);
    }
    auto results = transport_batch(nc, conn, paths, opt.ode_tol, opt.execution);
    for (std::size_t i = 0; i < results.size(); ++i) {
      double s = scale;
      auto res = results[i];
      // Shrink loops that are too far from the identity for the principal log.
      for (int shrink = 0; res && (res->matrix - id).norm() >= 0.5 && shrink < 4; ++shrink) {
        s *= 0.5;
        auto loop = make_loop(nc, x, s, kinds[i], seeds[i], 1e-12);
        res.reset();
        if (loop) {
          try {
            res = parallel_transport(nc, conn, loop->path, opt.ode_tol);
          } catch (const std::exception&) {
          }
        }
      }
      if (!res || (res->matrix - id).norm() >= 0.5) {
        ++out.discarded;
        continue;
      }
      logs.push_back(matrix_log(res->matrix));
      ++out.generators;
      out.dimension_trace.push_back(span_basis(logs, r, opt.rank_tol).dim());
    }
  }
  out.stable = half_trace_stable(out.dimension_trace) == 1;
  LieAlgebraSpan span = span_basis(logs, r, opt.rank_tol);
  out.algebra = span.empty() ? span : lie_closure(span);
  return out;
}

ReebTransportCheck verify_reeb_transport(const ContactGeometry& geo, const NumericContact& nc, const Vector& x,
                                         double r, double ode_tol, double tol) {
  const NumericConnection tau(geo.extended_connection(geo.tau()));
  const NumericConnection w(geo.extended_connection(geo.wagner_endomorphism()));
  Vector c = Vector::Zero(Eigen::Index(nc.rank() + 1));
  c(Eigen::Index(nc.rank())) = r;
  Path lambda{x, {}};
  if (r != 0.0) lambda.segments.push_back(std::make_shared<FrameFlowSegment>(nc, c));
  const auto tt = parallel_transport(nc, tau, lambda, ode_tol);
  const auto tw = parallel_transport(nc, w, lambda, ode_tol);
  const Matrix cx = nc.wagner(view(x)), cy = nc.wagner(view(tt.end));
  const double d1 = (tt.matrix - tw.matrix * matrix_exp(cx, r)).norm();
  const double d2 = (tt.matrix - matrix_exp(cy, r) * tw.matrix).norm();
  const double defect = std::max(d1, d2);
  return {defect, defect <= tol};
}

HolonomyReport verify_codim_theorem(const ContactGeometry& geo, const NumericContact& nc, const Vector& x,
                                    const SamplingOptions& opt) {
  if (!geo.is_K_contact()) throw HypothesisError("verify_codim_theorem: structure is not K-contact");
  HolonomyReport rep;
  const auto h = ambrose_singer_algebra(geo, nc, x, HolonomyMode::horizontal, opt);
  const auto a = ambrose_singer_algebra(geo, nc, x, HolonomyMode::adapted, opt);
  rep.horizontal_algebra = h.algebra;
  rep.adapted_algebra = a.algebra;
  rep.horizontal_stable = h.stable;
  rep.adapted_stable = a.stable;
  if (!h.stable) rep.notes.push_back("horizontal algebra dimension grew in the second half of the budget");
  if (!a.stable) rep.notes.push_back("adapted algebra dimension grew in the second half of the budget");

  rep.contained = a.algebra.contains(h.algebra, opt.rank_tol);
  if (!rep.contained) {
    rep.failures.push_back("horizontal holonomy algebra is not contained in the adapted one");
    return rep;
  }
  rep.is_ideal = is_ideal(h.algebra, a.algebra);
  rep.codim = a.algebra.dim() - h.algebra.dim();
  if (!rep.is_ideal) rep.failures.push_back("horizontal holonomy algebra is not an ideal of the adapted one");
  if (rep.codim > 1) rep.failures.push_back("codimension " + std::to_string(rep.codim) + " exceeds one");
  if (rep.codim == 1) {
    const Matrix cx = nc.wagner(view(x));
    const auto completed = span_union(h.algebra, {cx});
    rep.C_in_complement = completed.same_span(a.algebra, opt.rank_tol);
    if (!rep.C_in_complement) rep.failures.push_back("C_x does not complete the horizontal algebra");
  }
  return rep;
}

std::optional<Vector> stabilized_null_line(const LieAlgebraSpan& a, const Matrix& gram, double tol) {
  const Eigen::Index n = gram.rows();
  auto null_in = [&](const Matrix& basis) -> std::optional<Vector> {
    // Null vector in the column span of `basis`, if the restricted form allows one.
    if (basis.cols() == 0) return std::nullopt;
    const Matrix s = basis.transpose() * gram * basis;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.transpose()));
    const Vector ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (std::abs(ev(i)) <= tol * scale) return Vector((basis * es.eigenvectors().col(i)).normalized());
    if (ev(0) < 0 && ev(ev.size() - 1) > 0) {
      const Vector w = es.eigenvectors().col(0) / std::sqrt(-ev(0)) +
                       es.eigenvectors().col(ev.size() - 1) / std::sqrt(ev(ev.size() - 1));
      return Vector((basis * w).normalized());
    }
    return std::nullopt;
  };
  auto invariant = [&](const Vector& v) {
    for (const auto& m : a.basis()) {
      const Vector mv = m * v;
      if ((mv - v * v.dot(mv)).norm() > tol * std::max(1.0, m.norm())) return false;
    }
    return true;
  };
  // Common kernel first.
  Matrix stacked(Eigen::Index(a.dim()) * n, n);
  for (std::size_t i = 0; i < a.dim(); ++i) stacked.block(Eigen::Index(i) * n, 0, n, n) = a.basis()[i];
  Matrix kernel;
  if (a.dim() == 0) {
    kernel = Matrix::Identity(n, n);
  } else {
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < n; ++i)
      if (i >= sv.size() || sv(i) <= tol * std::max(1.0, smax)) cols.push_back(i);
    kernel.resize(n, Eigen::Index(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) kernel.col(Eigen::Index(k)) = svd.matrixV().col(cols[k]);
  }
  if (auto v = null_in(kernel); v && invariant(*v)) return v;
  // Otherwise a common eigenvector: eigenvectors of a generic element.
  if (a.dim() == 0) return std::nullopt;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  Matrix generic = Matrix::Zero(n, n);
  for (const auto& m : a.basis()) generic += nd(rng) * m;
  Eigen::EigenSolver<Matrix> es(generic);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(es.eigenvalues()(i).imag()) > 1e-9) continue;
    Vector v = es.eigenvectors().col(i).real();
    if (v.norm() == 0) continue;
    v.normalize();
    if (std::abs(v.dot(gram * v)) <= tol && invariant(v)) return v;
  }
  return std::nullopt;
}

Matrix witt_basis(const Vector& p, const Matrix& gram) {
  const Eigen::Index n = gram.rows();
  auto g = [&](const Vector& a, const Vector& b) { return a.dot(gram * b); };
  const Vector gp = gram * p;
  Eigen::Index best = 0;
  gp.cwiseAbs().maxCoeff(&best);
  if (std::abs(gp(best)) < 1e-12) throw std::invalid_argument("witt_basis: p is in the radical");
  Vector q = Vector::Unit(n, best) / gp(best);
  q -= 0.5 * g(q, q) * p;
  Matrix w(n, n);
  w.col(0) = p;
  w.col(n - 1) = q;
  std::vector<Vector> es;
  for (Eigen::Index i = 0; i < n && Eigen::Index(es.size()) < n - 2; ++i) {
    Vector v = Vector::Unit(n, i);
    v -= g(v, q) * p + g(v, p) * q;
    for (const auto& e : es) v -= g(v, e) * e;
    const double nn = g(v, v);
    if (nn < -1e-10) throw std::invalid_argument("witt_basis: scalar product is not Lorentzian");
    if (nn > 1e-10 && v.norm() > 1e-8) es.push_back(v / std::sqrt(nn));
  }
  if (Eigen::Index(es.size()) != n - 2) throw std::invalid_argument("witt_basis: could not complete the basis");
  for (Eigen::Index k = 0; k < n - 2; ++k) w.col(k + 1) = es[std::size_t(k)];
  return w;
}

LieAlgebraSpan to_witt_form(const LieAlgebraSpan& a, const Matrix& witt) {
  const Matrix winv = witt.inverse();
  std::vector<Matrix> mats;
  for (const auto& m : a.basis()) mats.push_back(winv * m * witt);
  return span_basis(mats, a.ambient_dim(), a.tol());
}

LieAlgebraSpan orthogonal_part(const LieAlgebraSpan& witt_form) {
  const Eigen::Index n = Eigen::Index(witt_form.ambient_dim());
  const Eigen::Index k = n - 2;
  std::vector<Matrix> blocks;
  for (const auto& m : witt_form.basis()) blocks.push_back(m.block(1, 1, k, k));
  return span_basis(blocks, std::size_t(k), witt_form.tol());
}

}  // namespace subhol
