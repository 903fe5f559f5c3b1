#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qdesign/bigint.hpp"
#include "qdesign/random.hpp"
#include "qdesign/subspace.hpp"
#include "qdesign/tower.hpp"

namespace qdesign {

/// m x m matrix over GF(q^l), row-major.
using GLMatrix = std::vector<Word>;

/// |GL(m, Q)| = prod_{i<m} (Q^m - Q^i)
BigInt gl_order(int m, std::uint64_t Q);

/// GL(m, q^l) acting GF(q)-linearly on V = GF(q)^{ml}.
class LinearGroup {
 public:
  explicit LinearGroup(const FieldTower& tower);

  const FieldTower& tower() const { return tower_; }
  int m() const { return tower_.m(); }
  BigInt order() const;
  GLMatrix identity() const;
  /// A generating set: diag(w,1,...,1), I + E_12, the m-cycle and (1 2).
  const std::vector<GLMatrix>& generators() const { return generators_; }

  Row apply(const GLMatrix& g, Row x) const;
  Subspace apply(const GLMatrix& g, const Subspace& s) const;
  GLMatrix multiply(const GLMatrix& a, const GLMatrix& b) const;
  bool invertible(const GLMatrix& g) const;
  GLMatrix random_element(Rng& rng) const;

  /// Calls fn on every element; refuses groups above 10^7 elements.
  void for_each_element(const std::function<void(const GLMatrix&)>& fn) const;
  BigInt stabilizer_order_brute(const Subspace& s) const;

  /// Orbit of s as sorted Grassmannian ranks, by breadth-first search under
  /// the generators. Throws BudgetError past `limit` members.
  std::vector<std::uint64_t> orbit_ranks(const Subspace& s, const Grassmannian& g,
                                         std::uint64_t limit = std::uint64_t{1} << 31) const;

 private:
  FieldTower tower_;
  std::vector<GLMatrix> generators_;
};

}  // namespace qdesign
