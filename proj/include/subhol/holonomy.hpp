#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subhol/numeric.hpp"

namespace subhol {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TransportResult {
  Matrix matrix;      // frame components at the start -> frame components at the end
  double est_error;   // Richardson estimate plus a round-off allowance
  Vector end;         // end point in the chart
};

inline constexpr double kHorizontalityTol = 1e-8;
inline constexpr int kHorizontalitySamples = 100;
inline constexpr double kMinStep = 1e-6;

/// RK4 with global step halving until the estimate is below tol. For a
/// connection without Reeb direction every segment must be horizontal.
TransportResult parallel_transport(const NumericContact& nc, const NumericConnection& conn, const Path& path,
                                   double tol);

/// Transports of many paths; results are in input order. Failed transports
/// come back as nullopt.
std::vector<std::optional<TransportResult>> transport_batch(const NumericContact& nc, const NumericConnection& conn,
                                                            const std::vector<Path>& paths, double tol,
                                                            Execution ex);

/// Reversed path (explicit segments only, or frame flows with negated field).
Path reverse(const NumericContact& nc, const Path& p);

/// Deterministic per-index stream.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

enum class LoopKind {
  horizontal,  // product of two coordinate rectangles with zero theta-area, horizontalized
  closed_by_reeb,  // horizontalized rectangle closed by a xi-flow segment
  coordinate,      // plain coordinate rectangle (not horizontal)
};

struct Loop {
  Path path;
  LoopKind kind;
  double scale;
  double closing_defect = 0;  // |f(1)| for horizontal loops
};

/// Loops at x of the given size; horizontal loops whose closing defect exceeds
/// tol are dropped, so fewer than `count` may come back.
std::vector<Loop> loop_family(const NumericContact& nc, const Vector& x, double scale, int count, LoopKind kind,
                              std::uint64_t seed, double tol = 1e-12);

/// Random path from x made of 1..3 frame flows with the given amplitude;
/// with_reeb adds xi components.
Path random_frame_path(const NumericContact& nc, const Vector& x, double amplitude, bool with_reeb,
                       std::uint64_t seed);

enum class HolonomyMode { horizontal, adapted, wagner };

struct SamplingOptions {
  int budget = 16;            // sample curves for Ambrose-Singer
  int loops = 64;             // loops per scale for sampling, each from a random pair of coordinate planes
  std::vector<double> scales{0.05, 0.1, 0.2};
  double ode_tol = 1e-11;
  double rank_tol = 1e-6;
  std::uint64_t seed = 20240917;
  Execution execution = Execution::parallel;
};

struct AlgebraResult {
  LieAlgebraSpan algebra;
  std::size_t generators = 0;     // samples that contributed
  std::size_t discarded = 0;      // failed or untrustworthy samples
  bool stable = false;            // span dimension unchanged over the last half of the samples
  std::vector<std::size_t> dimension_trace;
};

/// Basis of {B : dtheta(B) = 0} as antisymmetric coefficient arrays.
std::vector<Matrix> dtheta_kernel(const Matrix& omega);

/// Span of P^{-1} R_y(B) P over sample curves, then Lie-closed.
AlgebraResult ambrose_singer_algebra(const ContactGeometry& geo, const NumericContact& nc, const Vector& x,
                                     HolonomyMode mode, const SamplingOptions& opt);

/// Span of log(transport) over small loops, Lie-closed. Horizontal
/// connections use horizontal loops; extended ones use all loop kinds.
AlgebraResult holonomy_by_sampling(const NumericContact& nc, const NumericConnection& conn, const Vector& x,
                                   const SamplingOptions& opt);

struct ReebTransportCheck {
  double defect;
  bool pass;
};

/// tau^tau = tau^W e^{rC_x} = e^{rC_y} tau^W along the xi-orbit of length r.
ReebTransportCheck verify_reeb_transport(const ContactGeometry& geo, const NumericContact& nc, const Vector& x,
                                         double r, double ode_tol, double tol);

struct HolonomyReport {
  LieAlgebraSpan horizontal_algebra, adapted_algebra;
  bool contained = false;
  bool is_ideal = false;
  std::size_t codim = 0;
  bool C_in_complement = false;  // span(hol(g) + C_x) = hol(tau) when codim = 1
  bool horizontal_stable = false, adapted_stable = false;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  bool ok() const { return failures.empty(); }
};

class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Theorem check: hol(g) in hol(tau), ideal, codimension 0 or 1, and the
/// completion by C_x. Throws HypothesisError unless K-contact.
HolonomyReport verify_codim_theorem(const ContactGeometry& geo, const NumericContact& nc, const Vector& x,
                                    const SamplingOptions& opt);

/// Common invariant null line of the algebra, if any (frame components).
std::optional<Vector> stabilized_null_line(const LieAlgebraSpan& a, const Matrix& gram, double tol = 1e-7);

/// Witt basis p, e_1..e_k, q adapted to the null vector p (columns of the result).
Matrix witt_basis(const Vector& p, const Matrix& gram);
/// Algebra conjugated into the Witt basis.
LieAlgebraSpan to_witt_form(const LieAlgebraSpan& a, const Matrix& witt);
/// The so(k) blocks A of the triples (a, A, X).
LieAlgebraSpan orthogonal_part(const LieAlgebraSpan& witt_form);

}  // namespace subhol
