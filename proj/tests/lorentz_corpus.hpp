#pragma once

#include <string>
#include <vector>

#include "subhol/lorentz.hpp"

namespace corpus {

using subhol::HolonomyTypeDescriptor;
using subhol::Matrix;

inline Matrix so_elem(Eigen::Index k, Eigen::Index i, Eigen::Index j) {
  Matrix m = Matrix::Zero(k, k);
  m(i, j) = -1;
  m(j, i) = 1;
  return m;
}

/// so(n) acting on coordinates [offset, offset + n) of R^k.
inline std::vector<Matrix> so_block(Eigen::Index k, Eigen::Index offset, Eigen::Index n) {
  std::vector<Matrix> out;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(so_elem(k, offset + i, offset + j));
  return out;
}

/// u(2) in so(4): left multiplication by imaginary quaternions plus one right one.
inline std::vector<Matrix> u2(Eigen::Index k = 4) {
  auto embed = [&](std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m = Matrix::Zero(k, k);
    Eigen::Index i = 0;
    for (const auto& r : rows) {
      Eigen::Index j = 0;
      for (double v : r) m(i, j++) = v;
      ++i;
    }
    return m;
  };
  return {embed({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}}),
          embed({{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}}),
          embed({{0, 0, 0, -1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}}),
          embed({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}})};
}

inline std::vector<Matrix> join(std::vector<Matrix> a, const std::vector<Matrix>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline HolonomyTypeDescriptor simple(int type, std::size_t k, std::vector<Matrix> h) {
  HolonomyTypeDescriptor d;
  d.type = type;
  d.k = k;
  d.h = std::move(h);
  return d;
}

inline HolonomyTypeDescriptor type3(std::size_t k, std::vector<Matrix> h, Matrix phi) {
  auto d = simple(3, k, std::move(h));
  d.phi = std::move(phi);
  return d;
}

/// Type 4 with the standard splitting R^l + R^{k-l}; psi[j] for j >= l.
inline HolonomyTypeDescriptor type4(std::size_t k, std::size_t l, std::vector<Matrix> h,
                                    const std::vector<std::pair<std::size_t, Matrix>>& psi) {
  auto d = simple(4, k, std::move(h));
  d.l = l;
  d.split = Matrix::Identity(Eigen::Index(k), Eigen::Index(k));
  d.psi.assign(k, Matrix::Zero(Eigen::Index(k), Eigen::Index(k)));
  for (const auto& [j, m] : psi) d.psi[j] = m;
  return d;
}

struct Entry {
  std::string name;
  HolonomyTypeDescriptor desc;
};

/// Constructed algebras covering the four types, with orthogonal parts
/// 0, so(2), so(3), u(2) and so(2) + so(3) among them.
inline std::vector<Entry> entries() {
  const auto so2 = [](Eigen::Index k) { return so_block(k, 0, 2); };
  std::vector<Entry> c;
  c.push_back({"g1 h=0 k=2", simple(1, 2, {})});
  c.push_back({"g1 h=so(2) k=2", simple(1, 2, so2(2))});
  c.push_back({"g1 h=so(3) k=3", simple(1, 3, so_block(3, 0, 3))});
  c.push_back({"g1 h=u(2) k=4", simple(1, 4, u2())});
  c.push_back({"g1 h=so(2)+so(3) k=5", simple(1, 5, join(so_block(5, 0, 2), so_block(5, 2, 3)))});
  c.push_back({"g2 h=0 k=3", simple(2, 3, {})});
  c.push_back({"g2 h=so(2) k=3", simple(2, 3, so2(3))});
  c.push_back({"g2 h=so(3) k=3", simple(2, 3, so_block(3, 0, 3))});
  c.push_back({"g2 h=u(2) k=4", simple(2, 4, u2())});
  c.push_back({"g2 h=so(2)+so(3) k=6", simple(2, 6, join(so_block(6, 0, 2), so_block(6, 2, 3)))});
  c.push_back({"g3 h=so(2) k=2", type3(2, so2(2), 2 * so_elem(2, 0, 1))});
  c.push_back({"g3 h=u(2) k=4", type3(4, u2(), u2()[3])});
  c.push_back({"g3 h=so(2)+so(2) k=4", type3(4, join(so_block(4, 0, 2), so_block(4, 2, 2)), so_elem(4, 0, 1))});
  c.push_back({"g4 h=so(2) k=3 l=2", type4(3, 2, so2(3), {{2, so_elem(3, 0, 1)}})});
  c.push_back({"g4 h=so(2) k=4 l=3", type4(4, 3, so2(4), {{3, so_elem(4, 0, 1)}})});
  c.push_back({"g4 h=so(2)+so(2) k=5 l=4",
               type4(5, 4, join(so_block(5, 0, 2), so_block(5, 2, 2)), {{4, so_elem(5, 0, 1)}})});
  return c;
}

}  // namespace corpus
