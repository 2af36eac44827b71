#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subhol/algebra.hpp"

namespace subhol {

/// Element (a, A, X) of so(1,k+1) fixing the line of p, in the Witt basis
/// p, e_1..e_k, q:
///   [ a  X^T  0 ]
///   [ 0  A   -X ]
///   [ 0  0   -a ]
struct SoTriple {
  double a = 0;
  Matrix A;
  Vector X;
};

class TripleFormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Matrix to_matrix(const SoTriple& t);
/// Reads a matrix back into triple form; throws TripleFormError when the
/// entries outside the pattern exceed tol.
SoTriple to_triple(const Matrix& m, double tol = 1e-10);
SoTriple triple_bracket(const SoTriple& s, const SoTriple& t);

/// phi(A) = <Phi, A>/2 for a skew Phi, i.e. sum_{i<j} Phi_ij A_ij.
double apply_functional(const Matrix& phi, const Matrix& a);

class DescriptorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One of the four families of weakly irreducible, not irreducible
/// subalgebras of so(1,k+1) fixing a null line.
struct HolonomyTypeDescriptor {
  int type = 2;
  std::size_t k = 0;
  std::vector<Matrix> h;     // generators of the orthogonal part in so(k)
  Matrix phi;                // type 3
  std::size_t l = 0;         // type 4: h in so(l)
  Matrix split;              // type 4: orthogonal k x k, first l columns span R^l
  std::vector<Matrix> psi;   // type 4: psi(A)_j = apply_functional(psi[j], A), standard basis of R^k

  Vector psi_of(const Matrix& a) const;
};

/// Unnormalized generators in matrix form; rational inputs give rational output.
std::vector<Matrix> type_generators(const HolonomyTypeDescriptor& d, double tol = 1e-10);
/// Span of the generators; validates the descriptor and bracket closure.
LieAlgebraSpan make_type(const HolonomyTypeDescriptor& d, double tol = 1e-10);
/// Type and data of an algebra given in triple form; nullopt if none fits.
std::optional<HolonomyTypeDescriptor> recognize_type(const LieAlgebraSpan& g, double tol = 1e-10);

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IrreducibleBlock {
  Matrix basis;        // k x k_i, orthonormal columns
  LieAlgebraSpan h;    // restriction to the block, in so(k_i)
};

struct Decomposition {
  Matrix kernel;       // k x k_0, common kernel of h
  std::vector<IrreducibleBlock> blocks;
  std::size_t k0() const { return std::size_t(kernel.cols()); }
};

/// R^k = R^{k_0} + R^{k_1} + ... with h irreducible on each block.
Decomposition irreducible_decomposition(const LieAlgebraSpan& h, double tol = 1e-10, std::uint64_t seed = 1);

class IdealPreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Case of the codimension-one ideal list and the data that realizes it.
struct IdealCaseLabel {
  std::string label;          // "1.1" .. "4.3"
  std::vector<Matrix> I1;     // codimension-one ideal of h (1.2, 2.2, 3.2, 4.2)
  Matrix phi;                 // 1.3, and phi restricted to I1 for 3.2
  Vector fixed;               // unit vector of 2.1, 2.3, 4.1, 4.3
  std::vector<Vector> psi;    // psi (2.3) or psi_1 (4.3) on the basis of `h_basis`
  std::vector<Matrix> h_basis;
};

/// Throws IdealPreconditionError unless g is recognized and I is an ideal of
/// codimension one, and ClassificationError if no case of the list applies.
IdealCaseLabel classify_codim1_ideal(const LieAlgebraSpan& g, const LieAlgebraSpan& ideal, double tol = 1e-10);

/// One representative per realizable case.
std::vector<std::pair<IdealCaseLabel, LieAlgebraSpan>> codim1_ideal_representatives(const LieAlgebraSpan& g,
                                                                                     double tol = 1e-10);

}  // namespace subhol
