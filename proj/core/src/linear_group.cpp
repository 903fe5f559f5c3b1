#include "qdesign/linear_group.hpp"

#include <algorithm>
#include <string>

#include "qdesign/error.hpp"

namespace qdesign {

BigInt gl_order(int m, std::uint64_t Q) {
  require(m >= 1, "GL(m, Q) needs m >= 1");
  const BigInt qm = ipow(Q, static_cast<unsigned>(m));
  BigInt out = 1;
  for (int i = 0; i < m; ++i) out *= qm - ipow(Q, static_cast<unsigned>(i));
  return out;
}

LinearGroup::LinearGroup(const FieldTower& tower) : tower_(tower) {
  const int n = m();
  const ExtensionField& f = tower_.middle();
  GLMatrix d = identity();
  d[0] = f.primitive();
  generators_.push_back(d);
  if (n >= 2) {
    GLMatrix t = identity();
    t[1] = f.one();
    generators_.push_back(t);
    GLMatrix swap(n * n, 0), cycle(n * n, 0);
    for (int i = 0; i < n; ++i) {
      cycle[i * n + (i + 1) % n] = f.one();
      const int j = i == 0 ? 1 : i == 1 ? 0 : i;
      swap[i * n + j] = f.one();
    }
    generators_.push_back(swap);
    if (n > 2) generators_.push_back(cycle);
  }
}

BigInt LinearGroup::order() const { return gl_order(m(), tower_.middle().order()); }

GLMatrix LinearGroup::identity() const {
  GLMatrix g(m() * m(), 0);
  for (int i = 0; i < m(); ++i) g[i * m() + i] = tower_.middle().one();
  return g;
}

Row LinearGroup::apply(const GLMatrix& g, Row x) const {
  const ExtensionField& f = tower_.middle();
  const int n = m();
  Word a[64];
  for (int j = 0; j < n; ++j) a[j] = tower_.block(x, j);
  Row out = 0;
  for (int i = 0; i < n; ++i) {
    Word y = 0;
    for (int j = 0; j < n; ++j)
      if (a[j] && g[i * n + j]) y = f.add(y, f.mul(g[i * n + j], a[j]));
    out |= tower_.place(y, i);
  }
  return out;
}

Subspace LinearGroup::apply(const GLMatrix& g, const Subspace& s) const {
  std::vector<Row> rows(s.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = apply(g, s.rows[i]);
  return tower_.space().canonicalize(rows);
}

GLMatrix LinearGroup::multiply(const GLMatrix& a, const GLMatrix& b) const {
  const ExtensionField& f = tower_.middle();
  const int n = m();
  GLMatrix c(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Word s = 0;
      for (int k = 0; k < n; ++k) s = f.add(s, f.mul(a[i * n + k], b[k * n + j]));
      c[i * n + j] = s;
    }
  return c;
}

bool LinearGroup::invertible(const GLMatrix& g) const {
  const int n = m();
  std::vector<std::vector<Word>> rows(n, std::vector<Word>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = g[i * n + j];
  return tower_.rank_over_middle(std::move(rows)) == n;
}

GLMatrix LinearGroup::random_element(Rng& rng) const {
  const ExtensionField& f = tower_.middle();
  GLMatrix g(m() * m());
  do {
    for (auto& x : g) x = f.word_at(uniform_below(rng, f.order()));
  } while (!invertible(g));
  return g;
}

void LinearGroup::for_each_element(const std::function<void(const GLMatrix&)>& fn) const {
  if (order() > 10'000'000)
    throw BudgetError("GL(" + std::to_string(m()) + ", " + std::to_string(tower_.middle().order()) +
                      ") is too large to enumerate");
  const ExtensionField& f = tower_.middle();
  const std::size_t n = static_cast<std::size_t>(m()) * m();
  std::vector<std::uint64_t> idx(n, 0);
  GLMatrix g(n, 0);
  for (;;) {
    if (invertible(g)) fn(g);
    std::size_t i = n;
    while (i-- > 0) {
      if (++idx[i] < f.order()) {
        g[i] = f.word_at(idx[i]);
        break;
      }
      idx[i] = 0;
      g[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

BigInt LinearGroup::stabilizer_order_brute(const Subspace& s) const {
  BigInt count = 0;
  for_each_element([&](const GLMatrix& g) {
    if (apply(g, s) == s) ++count;
  });
  return count;
}

std::vector<std::uint64_t> LinearGroup::orbit_ranks(const Subspace& s, const Grassmannian& g,
                                                    std::uint64_t limit) const {
  require(s.dim() == g.d() && s.ambient == g.space().dim(), "subspace does not match the Grassmannian");
  std::vector<std::uint64_t> seen((g.size() + 63) / 64, 0);
  const auto mark = [&](std::uint64_t r) {
    const std::uint64_t bit = std::uint64_t{1} << (r & 63);
    if (seen[r >> 6] & bit) return false;
    seen[r >> 6] |= bit;
    return true;
  };
  std::vector<std::uint64_t> orbit{g.rank(s)};
  mark(orbit[0]);
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    const Subspace cur = g.unrank(orbit[head]);
    for (const GLMatrix& gen : generators_) {
      const std::uint64_t r = g.rank(apply(gen, cur));
      if (mark(r)) {
        orbit.push_back(r);
        if (orbit.size() > limit) throw BudgetError("orbit exceeds " + std::to_string(limit) + " members");
      }
    }
  }
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

}  // namespace qdesign
