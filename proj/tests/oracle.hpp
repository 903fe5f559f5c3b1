#pragma once

// Slow reference computations used as test oracles. Nothing here calls the
// library's elimination, enumeration or labelling code.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::uint64_t;  // GF(2)^v as a bitmask

/// All nonzero vectors of the GF(2)-span of `gens`, sorted.
inline std::vector<Vec> span2(const std::vector<Vec>& gens) {
  std::set<Vec> s{0};
  for (Vec g : gens) {
    std::vector<Vec> add;
    for (Vec x : s) add.push_back(x ^ g);
    s.insert(add.begin(), add.end());
  }
  s.erase(0);
  return {s.begin(), s.end()};
}

/// A 2-subspace of GF(2)^v is named by its three nonzero vectors, sorted.
using Line = std::array<Vec, 3>;

inline Line line_of(Vec a, Vec b) {
  Line l{a, b, a ^ b};
  std::sort(l.begin(), l.end());
  return l;
}

/// Every 2-subspace of GF(2)^v.
inline std::vector<Line> all_lines(int v) {
  std::set<Line> s;
  const Vec n = Vec{1} << v;
  for (Vec a = 1; a < n; ++a)
    for (Vec b = a + 1; b < n; ++b) s.insert(line_of(a, b));
  return {s.begin(), s.end()};
}

/// 2-subspaces contained in the span of `gens`.
inline std::vector<Line> lines_in(const std::vector<Vec>& gens) {
  const auto pts = span2(gens);
  std::set<Line> s;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) s.insert(line_of(pts[i], pts[j]));
  return {s.begin(), s.end()};
}

/// Coverage of each 2-subspace by a multiset of blocks over GF(2).
inline std::map<Line, std::uint64_t> coverage(const std::vector<std::pair<std::vector<Vec>, std::uint64_t>>& blocks) {
  std::map<Line, std::uint64_t> c;
  for (const auto& [gens, mult] : blocks)
    for (const Line& l : lines_in(gens)) c[l] += mult;
  return c;
}

inline std::size_t common_points(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  const auto pa = span2(a), pb = span2(b);
  std::vector<Vec> both;
  std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(both));
  return both.size();
}

/// Polynomials over GF(p) as coefficient lists, lowest degree first.
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  trim(c);
  return c;
}

inline Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t n = m.size() - 1;  // m monic
  while (a.size() > n) {
    const std::uint32_t c = a.back();
    const std::size_t shift = a.size() - 1 - n;
    for (std::size_t i = 0; i <= n; ++i) a[shift + i] = (a[shift + i] + p * p - c * m[i] % p) % p;
    trim(a);
  }
  return a;
}

/// Integer encoding sum c_i p^i <-> polynomial.
inline Poly poly_of(std::uint64_t x, std::uint32_t p) {
  Poly a;
  while (x) {
    a.push_back(static_cast<std::uint32_t>(x % p));
    x /= p;
  }
  return a;
}

inline std::uint64_t int_of(const Poly& a, std::uint32_t p) {
  std::uint64_t x = 0;
  for (std::size_t i = a.size(); i-- > 0;) x = x * p + a[i];
  return x;
}

/// Irreducibility by trial division with every monic polynomial of degree
/// 1..deg/2.
inline bool irreducible(const Poly& f, std::uint32_t p) {
  const int n = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= n; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::uint64_t low = 0; low < count; ++low) {
      Poly g = poly_of(low, p);
      g.resize(d + 1, 0);
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace oracle
