#include "qdesign/singer.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qdesign/error.hpp"

namespace qdesign {

namespace {

std::shared_ptr<const ExtensionField> extension_for(std::uint64_t q, int l) {
  const auto pp = prime_power(q);
  require(pp.has_value(), std::to_string(q) + " is not a prime power");
  require(l >= 1, "Singer cycle needs l >= 1");
  return std::make_shared<const ExtensionField>(GaloisField(pp->first, pp->second), l);
}

int stabilizer_parameter(std::uint64_t q, int l, std::uint64_t length) {
  const BigInt total = ipow(q, static_cast<unsigned>(l)) - 1;
  const BigInt stab = exact_div(total, length, "H-orbit length");
  for (int u = 1; u <= l; ++u)
    if (ipow(q, static_cast<unsigned>(u)) - 1 == stab) return u;
  throw InternalError("H-orbit length " + std::to_string(length) + " has no stabilizer GF(q^u)^*");
}

}  // namespace

SingerAction::SingerAction(std::uint64_t q, int l) : SingerAction(extension_for(q, l)) {}

SingerAction::SingerAction(std::shared_ptr<const ExtensionField> field)
    : field_(std::move(field)),
      space_(std::make_shared<const GaloisField>(field_->base()), field_->degree()) {}

std::vector<std::vector<Elem>> SingerAction::matrix() const {
  const int n = l();
  std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
  for (int i = 0; i < n; ++i) {
    const Word image = field_->mul(field_->primitive(), space_.unit(i));
    for (int r = 0; r < n; ++r) t[r][i] = field_->coord(image, r);
  }
  return t;
}

Subspace SingerAction::apply(const Subspace& s, std::uint64_t power) const {
  require(s.ambient == l(), "subspace is not in GF(q)^" + std::to_string(l()));
  const Word a = field_->exp(power);
  std::vector<Row> rows(s.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = field_->mul(a, s.rows[i]);
  return space_.canonicalize(rows);
}

HOrbit h_orbit_of(const Subspace& w, const SingerAction& h) {
  require(w.ambient == h.l(), "subspace is not in GF(q)^" + std::to_string(h.l()));
  HOrbit out{w.dim(), w, 0, 0};
  Subspace cur = w;
  do {
    if (cur < out.rep) out.rep = cur;
    ++out.length;
    cur = h.apply(cur);
  } while (cur != w);
  out.u = stabilizer_parameter(h.q(), h.l(), out.length);
  return out;
}

SingerOrbitTable::SingerOrbitTable(const SingerAction& h, int d) : grassmannian_(h.space(), d) {
  if (grassmannian_.size() > (std::uint64_t{1} << 28))
    throw BudgetError("too many " + std::to_string(d) + "-subspaces for an H-orbit table");
  orbit_of_rank_.assign(grassmannian_.size(), -1);
  std::vector<HOrbit> found;
  grassmannian_.for_each([&](std::uint64_t index, const Subspace& s) {
    if (orbit_of_rank_[index] >= 0) return;
    const auto id = static_cast<std::int32_t>(found.size());
    HOrbit orbit{d, s, 0, 0};
    Subspace cur = s;
    do {
      orbit_of_rank_[grassmannian_.rank(cur)] = id;
      if (cur < orbit.rep) orbit.rep = cur;
      ++orbit.length;
      cur = h.apply(cur);
    } while (cur != s);
    orbit.u = stabilizer_parameter(h.q(), h.l(), orbit.length);
    found.push_back(std::move(orbit));
  });
  std::vector<std::int32_t> order(found.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    if (found[a].u != found[b].u) return found[a].u < found[b].u;
    return found[a].rep < found[b].rep;
  });
  std::vector<std::int32_t> position(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    position[order[i]] = static_cast<std::int32_t>(i);
    orbits_.push_back(found[order[i]]);
  }
  for (auto& id : orbit_of_rank_) id = position[id];
}

std::vector<HOrbit> h_orbit_reps(int l, int d, std::uint64_t q) {
  require(d >= 0 && d <= l, "orbit dimension out of range");
  return SingerOrbitTable(SingerAction(q, l), d).orbits();
}

int moebius(std::uint64_t n) {
  require(n >= 1, "Moebius function of 0");
  int result = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

BigInt n_d_v(int d, int v, std::uint64_t q) {
  require(d >= 0 && d <= v, "n_d_v requires 0 <= d <= v");
  require(prime_power(q).has_value(), std::to_string(q) + " is not a prime power");
  if (d == 0 || d == v) return 1;
  const int g = std::gcd(d, v);
  BigInt sum = 0;
  for (int t : divisors(g)) {
    BigInt inner = 0;
    for (int u : divisors(t)) inner += moebius(static_cast<std::uint64_t>(t / u)) * (ipow(q, u) - 1);
    const auto qt = to_u64(ipow(q, t));
    require(qt.has_value(), "q^t too large");
    sum += gaussian_binomial(v / t, d / t, *qt) * inner;
  }
  return exact_div(sum, ipow(q, v) - 1, "n_d_v");
}

BigInt n_d_u_v(int d, int u, int v, std::uint64_t q) {
  require(d >= 0 && d <= v, "n_d_u_v requires 0 <= d <= v");
  require(u >= 1, "stabilizer parameter must be positive");
  const int g = std::gcd(d, v);
  require(g % u == 0, "u = " + std::to_string(u) + " does not divide gcd(d, v) = " + std::to_string(g));
  require(prime_power(q).has_value(), std::to_string(q) + " is not a prime power");
  if (d == 0 || d == v) return u == v ? 1 : 0;
  BigInt sum = 0;
  for (int t = u; t <= g; t += u) {
    if (g % t) continue;
    const auto qt = to_u64(ipow(q, t));
    require(qt.has_value(), "q^t too large");
    sum += moebius(static_cast<std::uint64_t>(t / u)) * gaussian_binomial(v / t, d / t, *qt);
  }
  return exact_div(sum * (ipow(q, u) - 1), ipow(q, v) - 1, "n_d_u_v");
}

IncidenceBlockMatrix h_incidence_matrix(int l, int t, int k, std::uint64_t q) {
  require(0 <= t && t <= k && k <= l, "h_incidence_matrix requires t <= k <= l");
  SingerAction h(q, l);
  SingerOrbitTable rows(h, t), cols(h, k);
  IncidenceBlockMatrix m;
  for (const HOrbit& o : rows.orbits()) {
    m.row_names.push_back("H" + format_subspace(h.space(), o.rep));
    m.row_blocks.push_back("O" + std::to_string(t));
  }
  for (const HOrbit& o : cols.orbits()) {
    m.col_names.push_back("H" + format_subspace(h.space(), o.rep));
    m.col_blocks.push_back("O" + std::to_string(k));
  }
  for (const HOrbit& o : rows.orbits()) {
    std::vector<BigInt> counts(cols.orbits().size(), 0);
    SuperspaceRange(h.space(), o.rep, k).for_each(
        [&](std::uint64_t, const Subspace& s) { ++counts[cols.orbit_index(s)]; });
    m.entries.push_back(std::move(counts));
  }
  return m;
}

namespace {

struct KmSearch {
  std::vector<std::vector<std::int64_t>> col_entries;  // [col][row]
  std::vector<std::vector<std::int64_t>> suffix;       // [col][row]: sum over columns >= col
  std::int64_t lambda;
  std::uint64_t budget, nodes = 0;
  std::size_t max_solutions;
  std::vector<std::int64_t> current;
  std::vector<int> chosen;
  std::vector<std::vector<int>> found;
  bool stopped = false;
  SearchStatus status = SearchStatus::exhausted;

  void run(std::size_t col) {
    if (stopped) return;
    if (++nodes > budget) {
      stopped = true;
      status = SearchStatus::budget_exceeded;
      return;
    }
    for (std::size_t r = 0; r < current.size(); ++r)
      if (current[r] > lambda || current[r] + suffix[col][r] < lambda) return;
    if (col == col_entries.size()) {
      found.push_back(chosen);
      if (found.size() >= max_solutions) {
        stopped = true;
        status = SearchStatus::solution_limit;
      }
      return;
    }
    for (std::size_t r = 0; r < current.size(); ++r) current[r] += col_entries[col][r];
    chosen.push_back(static_cast<int>(col));
    run(col + 1);
    chosen.pop_back();
    for (std::size_t r = 0; r < current.size(); ++r) current[r] -= col_entries[col][r];
    run(col + 1);
  }
};

}  // namespace

KmResult km_solve_binary(const IncidenceBlockMatrix& m, const BigInt& lambda,
                         const std::vector<BigInt>& weights, std::uint64_t budget,
                         std::size_t max_solutions) {
  require(weights.empty() || weights.size() == m.cols(), "one weight per column required");
  require(lambda >= 0, "lambda must be nonnegative");
  const auto to_small = [](const BigInt& x) {
    require(x >= 0 && x < (BigInt(1) << 40), "matrix entry out of search range");
    return static_cast<std::int64_t>(x);
  };
  KmSearch s;
  s.lambda = to_small(lambda);
  s.budget = budget;
  s.max_solutions = std::max<std::size_t>(max_solutions, 1);
  s.col_entries.assign(m.cols(), std::vector<std::int64_t>(m.rows()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    require(m.entries[r].size() == m.cols(), "ragged matrix");
    for (std::size_t c = 0; c < m.cols(); ++c) s.col_entries[c][r] = to_small(m.at(r, c));
  }
  s.suffix.assign(m.cols() + 1, std::vector<std::int64_t>(m.rows(), 0));
  for (std::size_t c = m.cols(); c-- > 0;)
    for (std::size_t r = 0; r < m.rows(); ++r) s.suffix[c][r] = s.suffix[c + 1][r] + s.col_entries[c][r];
  s.current.assign(m.rows(), 0);
  s.run(0);

  KmResult out;
  out.status = s.status;
  out.nodes = std::min(s.nodes, budget);
  for (auto& cols : s.found) {
    KmSolution sol{cols, 0};
    for (int c : cols) sol.blocks += weights.empty() ? BigInt(1) : weights[c];
    out.solutions.push_back(std::move(sol));
  }
  return out;
}

}  // namespace qdesign
