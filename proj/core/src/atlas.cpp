#include "qdesign/atlas.hpp"

#include <algorithm>
#include <numeric>

#include "qdesign/error.hpp"
#include "qdesign/linear_group.hpp"

namespace qdesign {

namespace {

BigInt q_pow(std::uint64_t q, int e) { return ipow(q, static_cast<unsigned>(e)); }

BigInt stabilizer_formula(int k, int r, int u, int m, int l, std::uint64_t q) {
  BigInt s = q_pow(q, u) - 1;
  for (int i = r + 1; i <= k - 1; ++i) s *= q_pow(q, k) - q_pow(q, i);
  for (int i = k - 1; i <= m - 1; ++i) s *= q_pow(q, m * l) - q_pow(q, i * l);
  return s;
}

struct Reduction {
  int rank = 0;
  int dependent = 0;
  // coefficients of the last dependent row over the chosen rows, in order
  std::vector<Word> alpha;
  // for j == 1: the coefficient of every row over the first row
  std::vector<Word> ratios;
};

// Greedy GF(q^l)-elimination of W's rows in order: rows that enlarge the
// span are chosen, a dependent row is expressed over the chosen ones.
Reduction reduce_rows(const FieldTower& t, const Subspace& w) {
  const ExtensionField& f = t.middle();
  const int m = t.m();
  const int d = w.dim();
  struct Entry {
    std::vector<Word> vec;     // pivot entry normalized to 1
    std::vector<Word> coeffs;  // over the chosen rows
    int pivot;
  };
  std::vector<Entry> echelon;
  Reduction out;
  out.ratios.assign(d, 0);
  for (int i = 0; i < d; ++i) {
    std::vector<Word> z = t.unflatten(w.rows[i]);
    std::vector<Word> comb(d, 0);  // z = z_reduced + sum comb_c * chosen_c
    for (const Entry& e : echelon) {
      const Word c = z[e.pivot];
      if (!c) continue;
      for (int j = e.pivot; j < m; ++j)
        if (e.vec[j]) z[j] = f.sub(z[j], f.mul(c, e.vec[j]));
      for (int j = 0; j < d; ++j)
        if (e.coeffs[j]) comb[j] = f.add(comb[j], f.mul(c, e.coeffs[j]));
    }
    int pivot = 0;
    while (pivot < m && z[pivot] == 0) ++pivot;
    if (pivot == m) {
      ++out.dependent;
      out.alpha.clear();
      for (int j = 0; j < out.rank; ++j) out.alpha.push_back(comb[j]);
      if (out.rank == 1) out.ratios[i] = comb[0];
      continue;
    }
    // new chosen row index out.rank: z_reduced = chosen - sum comb * chosen
    const Word inv = f.inv(z[pivot]);
    Entry e{std::vector<Word>(m), std::vector<Word>(d, 0), pivot};
    for (int j = 0; j < m; ++j) e.vec[j] = f.mul(inv, z[j]);
    for (int j = 0; j < d; ++j) e.coeffs[j] = f.mul(inv, f.neg(comb[j]));
    e.coeffs[out.rank] = f.add(e.coeffs[out.rank], inv);
    if (out.rank == 0) out.ratios[i] = f.one();
    echelon.push_back(std::move(e));
    ++out.rank;
  }
  return out;
}

}  // namespace

BigInt stabilizer_order_T(int k, int r, int u, int m, int l, std::uint64_t q) {
  require(k >= 3 && k <= std::min(m + 1, l), "stabilizer_order_T requires 3 <= k <= min(m+1, l)");
  require(r >= 1 && r <= k - 1, "stabilizer_order_T requires 1 <= r <= k-1");
  require(u >= 1 && std::gcd(r + 1, l) % u == 0, "u must divide gcd(r+1, l)");
  return stabilizer_formula(k, r, u, m, l, q);
}

BigInt orbit_size_T(int k, int r, int u, int m, int l, std::uint64_t q) {
  const BigInt stab = stabilizer_order_T(k, r, u, m, l, q);
  return exact_div(gl_order(m, static_cast<std::uint64_t>(q_pow(q, l))), stab, "orbit_size_T");
}

OrbitAtlas::OrbitAtlas(const FieldTower& tower)
    : tower_(tower),
      singer_(std::make_shared<const ExtensionField>(tower.middle())) {}

const SingerOrbitTable& OrbitAtlas::h_table(int d) const {
  require(d >= 0 && d <= tower_.l(), "H-orbit dimension out of range");
  std::call_once(table_once_[d], [&] { tables_[d] = std::make_unique<SingerOrbitTable>(singer_, d); });
  return *tables_[d];
}

OmegaClass OrbitAtlas::classify(const Subspace& w) const {
  return {w.dim(), tower_.span_dim_over_middle(w)};
}

std::optional<OrbitLabel> OrbitAtlas::try_label(const Subspace& w) const {
  require(w.ambient == tower_.v(), "subspace is not in GF(q)^" + std::to_string(tower_.v()));
  const int d = w.dim();
  if (d == 0) return OrbitLabel{{0, 0}, 0, 0};
  const Reduction red = reduce_rows(tower_, w);
  const int j = red.rank;
  const VectorSpace& line = tower_.line_space();
  if (j == 1) {
    const Subspace wp = line.canonicalize(red.ratios);
    return OrbitLabel{{d, 1}, 0, static_cast<std::uint32_t>(h_table(d).orbit_index(wp))};
  }
  if (j == d) return OrbitLabel{{d, d}, 0, 0};
  if (j == d - 1) {
    std::vector<Row> rows{tower_.middle().one()};
    rows.insert(rows.end(), red.alpha.begin(), red.alpha.end());
    const Subspace s = line.canonicalize(rows);
    const int r = s.dim() - 1;
    return OrbitLabel{{d, j}, r, static_cast<std::uint32_t>(h_table(r + 1).orbit_index(s))};
  }
  return std::nullopt;
}

OrbitLabel OrbitAtlas::orbit_label(const Subspace& w) const {
  auto label = try_label(w);
  if (!label) {
    const OmegaClass c = classify(w);
    throw PreconditionError("class (" + std::to_string(c.i) + "," + std::to_string(c.j) +
                            ") is outside the orbit atlas");
  }
  return *label;
}

int OrbitAtlas::label_u(const OrbitLabel& label) const {
  if (label.full_class() || label.omega.i == 0) return 0;
  return h_table(label.h_dim()).orbits().at(label.orbit).u;
}

const Subspace& OrbitAtlas::label_rep(const OrbitLabel& label) const {
  require(!label.full_class() && label.omega.i > 0, "class (k,k) has no H-orbit representative");
  return h_table(label.h_dim()).orbits().at(label.orbit).rep;
}

OrbitLabel OrbitAtlas::t_label(int k, int r, std::uint32_t orbit) const {
  require(k >= 3 && r >= 1 && r <= k - 1, "invalid (k, r) for class (k,k-1)");
  require(orbit < h_table(r + 1).orbits().size(), "H-orbit index out of range");
  return OrbitLabel{{k, k - 1}, r, orbit};
}

std::vector<Word> OrbitAtlas::normalized_u(int r, std::uint32_t orbit) const {
  const ExtensionField& f = tower_.middle();
  const VectorSpace& line = tower_.line_space();
  const Subspace& rep = h_table(r + 1).orbits().at(orbit).rep;
  VectorSpace coeff(tower_.base_ptr(), rep.dim());
  Word best = 0;
  for (std::uint64_t t = 1; t < ipow(tower_.q(), rep.dim()); ++t) {
    Row x = 0;
    std::uint64_t rest = t;
    for (int i = 0; i < rep.dim(); ++i, rest /= tower_.q())
      x = line.add(x, line.scale(static_cast<Elem>(rest % tower_.q()), rep.rows[i]));
    const Word s = f.inv(x);
    if (best == 0 || s < best) best = s;
  }
  std::vector<Row> rows;
  for (Row x : rep.rows) rows.push_back(f.mul(best, x));
  const Subspace scaled = line.canonicalize(rows);
  ensure(scaled.rows.front() == f.one(), "normalized representative does not start with 1");
  return {scaled.rows.begin() + 1, scaled.rows.end()};
}

namespace {

Subspace build_t(const FieldTower& t, int k, std::span<const Word> u) {
  std::vector<Row> rows;
  for (int j = 0; j < k - 1; ++j) rows.push_back(t.place(t.middle().one(), j));
  Row z = 0;
  for (std::size_t i = 0; i < u.size(); ++i) z |= t.place(u[i], static_cast<int>(i));
  rows.push_back(z);
  return t.space().canonicalize(rows);
}

}  // namespace

TRepresentative OrbitAtlas::t_representative(int k, int r, std::span<const Word> u) const {
  require(k >= 3 && k <= std::min(tower_.m() + 1, tower_.l()), "t_representative requires 3 <= k <= min(m+1, l)");
  require(r >= 1 && r <= k - 1, "t_representative requires 1 <= r <= k-1");
  require(static_cast<int>(u.size()) == r, "expected r field elements");
  std::vector<Row> span{tower_.middle().one()};
  for (Word x : u) {
    require(tower_.middle().valid(x), "element is not in GF(q^l)");
    span.push_back(x);
  }
  require(tower_.line_space().rank(span) == r + 1, "1, u_1, ..., u_r are linearly dependent over GF(q)");
  TRepresentative t{k, r, {u.begin(), u.end()}, build_t(tower_, k, u)};
  const OmegaClass c = classify(t.realized);
  ensure(c.i == k && c.j == k - 1, "T representative has the wrong class");
  return t;
}

std::vector<TRepresentative> OrbitAtlas::f_k_r_reps(int k, int r) const {
  require(r + 1 <= tower_.l(), "r + 1 exceeds l");
  std::vector<TRepresentative> out;
  const auto n = static_cast<std::uint32_t>(h_table(r + 1).orbits().size());
  for (std::uint32_t o = 0; o < n; ++o) out.push_back(t_representative(k, r, normalized_u(r, o)));
  return out;
}

Subspace OrbitAtlas::realize(const OrbitLabel& label) const {
  const int k = label.omega.i;
  if (k == 0) return tower_.space().zero();
  if (label.spread_class()) {
    std::vector<Row> rows;
    for (Row x : label_rep(label).rows) rows.push_back(tower_.place(x, 0));
    return tower_.space().canonicalize(rows);
  }
  if (label.full_class()) {
    require(k <= tower_.m(), "class (k,k) needs k <= m");
    std::vector<Row> rows;
    for (int j = 0; j < k; ++j) rows.push_back(tower_.place(tower_.middle().one(), j));
    return tower_.space().canonicalize(rows);
  }
  require(label.omega.j == k - 1, "label class is outside the orbit atlas");
  return build_t(tower_, k, normalized_u(label.r, label.orbit));
}

BigInt OrbitAtlas::stabilizer_order(const OrbitLabel& label) const {
  const int k = label.omega.i;
  const int m = tower_.m(), l = tower_.l();
  const std::uint64_t q = tower_.q();
  if (label.full_class()) {
    BigInt s = gl_order(k, q);
    for (int i = k; i <= m - 1; ++i) s *= q_pow(q, m * l) - q_pow(q, i * l);
    return s;
  }
  if (label.spread_class() || k <= 1)
    return exact_div(gl_order(m, static_cast<std::uint64_t>(q_pow(q, l))), orbit_size(label),
                     "spread-class stabilizer");
  return stabilizer_formula(k, label.r, label_u(label), m, l, q);
}

BigInt OrbitAtlas::orbit_size(const OrbitLabel& label) const {
  const int m = tower_.m(), l = tower_.l();
  const std::uint64_t q = tower_.q();
  const BigInt gl = gl_order(m, static_cast<std::uint64_t>(q_pow(q, l)));
  if (label.omega.i == 0) return 1;
  if (label.spread_class()) {
    const BigInt lines = exact_div(q_pow(q, m * l) - 1, q_pow(q, l) - 1, "spread size");
    return lines * h_table(label.omega.i).orbits().at(label.orbit).length;
  }
  return exact_div(gl, stabilizer_order(label), "orbit size");
}

std::string OrbitAtlas::describe(const OrbitLabel& label) const {
  std::string s = "(" + std::to_string(label.omega.i) + "," + std::to_string(label.omega.j) + ")";
  if (label.full_class() || label.omega.i == 0) return s;
  if (!label.spread_class()) s += " r=" + std::to_string(label.r);
  s += " u=" + std::to_string(label_u(label));
  return s + " H" + format_subspace(tower_.line_space(), label_rep(label));
}

std::vector<OrbitLabel> OrbitAtlas::column_labels(int k) const {
  require(k >= 3 && k <= tower_.v(), "column labels need k >= 3");
  std::vector<OrbitLabel> out;
  if (k <= tower_.l())
    for (std::uint32_t o = 0; o < h_table(k).orbits().size(); ++o) out.push_back({{k, 1}, 0, o});
  for (int r = 1; r <= k - 1 && r + 1 <= tower_.l(); ++r)
    for (std::uint32_t o = 0; o < h_table(r + 1).orbits().size(); ++o) out.push_back(t_label(k, r, o));
  if (k <= tower_.m()) out.push_back({{k, k}, 0, 0});
  return out;
}

std::vector<OrbitLabel> OrbitAtlas::row_labels() const {
  std::vector<OrbitLabel> out;
  if (tower_.l() >= 2)
    for (std::uint32_t o = 0; o < h_table(2).orbits().size(); ++o) out.push_back({{2, 1}, 0, o});
  if (tower_.m() >= 2) out.push_back({{2, 2}, 0, 0});
  return out;
}

bool column_independence_criterion(const FieldTower& tower, std::span<const Word> u,
                                   const std::vector<std::vector<Elem>>& a, std::span<const Elem> b) {
  const std::size_t r = u.size();
  require(a.size() == r, "matrix a must have r rows");
  const std::size_t s = b.size();
  require(s >= 1 && s <= r, "need 1 <= s <= r");
  for (const auto& row : a) require(row.size() == s, "matrix a must have s columns");
  std::vector<Row> span{tower.middle().one()};
  span.insert(span.end(), u.begin(), u.end());
  require(tower.line_space().rank(span) == static_cast<int>(r + 1), "1, u_1, ..., u_r must be independent");
  VectorSpace vs(tower.base_ptr(), static_cast<int>(r + 1));
  std::vector<Row> vectors;
  for (std::size_t j = 0; j < s; ++j) {
    std::vector<Elem> v{b[j]};
    for (std::size_t i = 0; i < r; ++i) v.push_back(a[i][j]);
    vectors.push_back(vs.from_digits(v));
  }
  return vs.rank(vectors) == static_cast<int>(s);
}

}  // namespace qdesign
