#include "qdesign/subspace.hpp"

#include <algorithm>
#include <string>

#include "qdesign/error.hpp"

namespace qdesign {

namespace {

std::shared_ptr<const GaloisField> field_for(std::uint64_t q) {
  const auto pp = prime_power(q);
  require(pp.has_value(), std::to_string(q) + " is not a prime power");
  return std::make_shared<const GaloisField>(pp->first, pp->second);
}

}  // namespace

VectorSpace::VectorSpace(std::shared_ptr<const GaloisField> field, int dim)
    : field_(std::move(field)), dim_(dim) {
  require(dim_ >= 0, "negative dimension");
  bits_ = std::bit_width(field_->order() - 1);
  mask_ = (Row{1} << bits_) - 1;
  binary_ = field_->characteristic() == 2;
  require(bits_ * dim_ <= 64, "GF(" + std::to_string(field_->order()) + ")^" + std::to_string(dim_) +
                                  " does not fit a packed row");
}

VectorSpace::VectorSpace(std::uint64_t q, int dim) : VectorSpace(field_for(q), dim) {}

Row VectorSpace::add(Row a, Row b) const {
  if (binary_) return a ^ b;
  Row out = 0;
  for (int c = 0; c < dim_; ++c) out = set(out, c, field_->add(get(a, c), get(b, c)));
  return out;
}

Row VectorSpace::sub(Row a, Row b) const {
  if (binary_) return a ^ b;
  Row out = 0;
  for (int c = 0; c < dim_; ++c) out = set(out, c, field_->sub(get(a, c), get(b, c)));
  return out;
}

Row VectorSpace::scale(Elem c, Row a) const {
  if (c == 0) return 0;
  if (c == 1) return a;
  Row out = 0;
  for (int col = 0; col < dim_; ++col) {
    const Elem x = get(a, col);
    if (x) out = set(out, col, field_->mul(c, x));
  }
  return out;
}

Row VectorSpace::axpy(Elem c, Row x, Row y) const { return add(y, scale(c, x)); }

bool VectorSpace::valid(Row x) const {
  if (bits_ * dim_ < 64 && (x >> (bits_ * dim_)) != 0) return false;
  for (int c = 0; c < dim_; ++c)
    if (get(x, c) >= field_->order()) return false;
  return true;
}

Row VectorSpace::from_digits(std::span<const Elem> d) const {
  require(static_cast<int>(d.size()) == dim_, "vector length " + std::to_string(d.size()) +
                                                  " does not match dimension " + std::to_string(dim_));
  Row x = 0;
  for (int c = 0; c < dim_; ++c) {
    require(d[c] < field_->order(), "entry outside GF(q)");
    x = set(x, c, d[c]);
  }
  return x;
}

std::vector<Elem> VectorSpace::digits(Row x) const {
  std::vector<Elem> out(dim_);
  for (int c = 0; c < dim_; ++c) out[c] = get(x, c);
  return out;
}

Subspace VectorSpace::canonicalize(std::span<const Row> basis) const {
  std::vector<Row> m(basis.begin(), basis.end());
  std::size_t r = 0;
  if (binary_ && bits_ == 1) {
    while (r < m.size()) {
      auto top = std::max_element(m.begin() + static_cast<std::ptrdiff_t>(r), m.end());
      if (*top == 0) break;
      std::swap(m[r], *top);
      const Row bit = Row{1} << (63 - std::countl_zero(m[r]));
      for (std::size_t i = 0; i < m.size(); ++i)
        if (i != r && (m[i] & bit)) m[i] ^= m[r];
      ++r;
    }
  } else {
    for (int col = 0; col < dim_ && r < m.size(); ++col) {
      std::size_t i = r;
      while (i < m.size() && get(m[i], col) == 0) ++i;
      if (i == m.size()) continue;
      std::swap(m[r], m[i]);
      const Elem c = get(m[r], col);
      if (c != 1) m[r] = scale(field_->inv(c), m[r]);
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (j == r) continue;
        const Elem x = get(m[j], col);
        if (x) m[j] = sub(m[j], scale(x, m[r]));
      }
      ++r;
    }
  }
  m.resize(r);
  return Subspace{dim_, std::move(m)};
}

bool VectorSpace::is_canonical(const Subspace& s) const {
  if (s.ambient != dim_) return false;
  for (Row x : s.rows)
    if (!valid(x)) return false;
  return canonicalize(s.rows) == s;
}

int VectorSpace::rank(std::span<const Row> rows) const { return canonicalize(rows).dim(); }

Row VectorSpace::reduce(const Subspace& s, Row x) const {
  for (Row r : s.rows) {
    const Elem c = get(x, leading(r));
    if (c) x = sub(x, scale(c, r));
  }
  return x;
}

bool VectorSpace::contains(const Subspace& s, Row x) const { return reduce(s, x) == 0; }

Subspace VectorSpace::sum(const Subspace& a, const Subspace& b) const {
  require(a.ambient == dim_ && b.ambient == dim_, "ambient dimension mismatch");
  std::vector<Row> rows = a.rows;
  rows.insert(rows.end(), b.rows.begin(), b.rows.end());
  return canonicalize(rows);
}

int VectorSpace::intersection_dim(const Subspace& a, const Subspace& b) const {
  return a.dim() + b.dim() - sum(a, b).dim();
}

bool VectorSpace::is_subspace_of(const Subspace& a, const Subspace& b) const {
  require(a.ambient == dim_ && b.ambient == dim_, "ambient dimension mismatch");
  for (Row x : a.rows)
    if (!contains(b, x)) return false;
  return true;
}

Subspace VectorSpace::whole() const {
  Subspace s{dim_, {}};
  for (int c = 0; c < dim_; ++c) s.rows.push_back(unit(c));
  return s;
}

BigInt gaussian_binomial(int v, int k, std::uint64_t q) {
  require(v >= 0 && k >= 0, "gaussian binomial of negative arguments");
  require(prime_power(q).has_value(), std::to_string(q) + " is not a prime power");
  if (k > v) return 0;
  BigInt num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= ipow(q, static_cast<unsigned>(v - i)) - 1;
    den *= ipow(q, static_cast<unsigned>(k - i)) - 1;
  }
  return exact_div(num, den, "gaussian_binomial");
}

Grassmannian::Grassmannian(const VectorSpace& space, int d) : space_(space), d_(d) {
  const int v = space_.dim();
  require(d >= 0 && d <= v, "subspace dimension " + std::to_string(d) + " outside [0, " +
                                std::to_string(v) + "]");
  const BigInt total = gaussian_binomial(v, d, space_.q());
  if (total >= (BigInt(1) << 62))
    throw BudgetError("Grassmannian of " + std::to_string(d) + "-subspaces of GF(" +
                      std::to_string(space_.q()) + ")^" + std::to_string(v) + " is too large to index");
  size_ = static_cast<std::uint64_t>(total);
  qpow_.resize(static_cast<std::size_t>(v) * std::max(d, 1) + 1);
  qpow_[0] = 1;
  for (std::size_t i = 1; i < qpow_.size(); ++i)
    qpow_[i] = qpow_[i - 1] <= size_ ? qpow_[i - 1] * space_.q() : qpow_[i - 1];
  completions_.assign(d + 1, std::vector<std::uint64_t>(v + 2, 0));
  std::fill(completions_[d].begin(), completions_[d].end(), 1);
  for (int row = d - 1; row >= 0; --row) {
    const int max_pivot = v - (d - row);
    for (int c = v; c >= 0; --c) {
      std::uint64_t acc = c + 1 <= v ? completions_[row][c + 1] : 0;
      if (c <= max_pivot) acc += qpow_[free_count(row, c)] * completions_[row + 1][c + 1];
      completions_[row][c] = acc;
    }
  }
  ensure(completions_[0][0] == size_, "Grassmannian count mismatch");
}

void Grassmannian::build(Cursor& c) const {
  Subspace& s = c.current;
  s.ambient = space_.dim();
  s.rows.assign(d_, 0);
  std::size_t f = 0;
  for (int i = 0; i < d_; ++i) {
    Row r = space_.unit(c.pivots[i]);
    int next = i + 1;
    for (int col = c.pivots[i] + 1; col < space_.dim(); ++col) {
      if (next < d_ && c.pivots[next] == col) {
        ++next;
        continue;
      }
      r = space_.set(r, col, c.free[f++]);
    }
    s.rows[i] = r;
  }
}

Grassmannian::Cursor Grassmannian::cursor_at(std::uint64_t index) const {
  require(index < size_, "Grassmannian index out of range");
  Cursor c;
  c.pivots.resize(d_);
  std::uint64_t mult = 1;
  int total_free = 0;
  int prev = -1;
  for (int i = 0; i < d_; ++i) {
    int p = prev + 1;
    for (;; ++p) {
      const std::uint64_t block = mult * qpow_[free_count(i, p)] * completions_[i + 1][p + 1];
      if (index < block) break;
      index -= block;
    }
    c.pivots[i] = p;
    mult *= qpow_[free_count(i, p)];
    total_free += free_count(i, p);
    prev = p;
  }
  c.free.assign(total_free, 0);
  for (int f = total_free - 1; f >= 0; --f, index /= space_.q())
    c.free[f] = static_cast<Elem>(index % space_.q());
  build(c);
  return c;
}

void Grassmannian::advance(Cursor& c) const {
  const Elem q = static_cast<Elem>(space_.q());
  for (std::size_t f = c.free.size(); f-- > 0;) {
    if (++c.free[f] < q) {
      build(c);
      return;
    }
    c.free[f] = 0;
  }
  const int v = space_.dim();
  int i = d_ - 1;
  while (i >= 0 && c.pivots[i] == v - d_ + i) --i;
  require(i >= 0, "Grassmannian cursor advanced past the end");
  ++c.pivots[i];
  for (int j = i + 1; j < d_; ++j) c.pivots[j] = c.pivots[j - 1] + 1;
  int total_free = 0;
  for (int j = 0; j < d_; ++j) total_free += free_count(j, c.pivots[j]);
  c.free.assign(total_free, 0);
  build(c);
}

Subspace Grassmannian::unrank(std::uint64_t index) const { return cursor_at(index).current; }

std::uint64_t Grassmannian::rank(const Subspace& s) const {
  require(s.ambient == space_.dim() && s.dim() == d_, "subspace does not belong to this Grassmannian");
  std::uint64_t index = 0, mult = 1;
  int prev = -1;
  std::vector<int> pivots(d_);
  for (int i = 0; i < d_; ++i) pivots[i] = space_.leading(s.rows[i]);
  for (int i = 0; i < d_; ++i) {
    for (int p = prev + 1; p < pivots[i]; ++p)
      index += mult * qpow_[free_count(i, p)] * completions_[i + 1][p + 1];
    mult *= qpow_[free_count(i, pivots[i])];
    prev = pivots[i];
  }
  std::uint64_t free_index = 0;
  for (int i = 0; i < d_; ++i) {
    int next = i + 1;
    for (int col = pivots[i] + 1; col < space_.dim(); ++col) {
      if (next < d_ && pivots[next] == col) {
        ++next;
        continue;
      }
      free_index = free_index * space_.q() + space_.get(s.rows[i], col);
    }
  }
  return index + free_index;
}

namespace {

VectorSpace quotient_space(const VectorSpace& space, const Subspace& u) {
  return VectorSpace(space.field_ptr(), space.dim() - u.dim());
}

}  // namespace

SuperspaceRange::SuperspaceRange(const VectorSpace& space, const Subspace& u, int k)
    : space_(space), u_(u), quotient_(quotient_space(space, u), k - u.dim()) {
  require(u.ambient == space.dim(), "ambient dimension mismatch");
  require(u.dim() <= k && k <= space.dim(), "superspace dimension out of range");
  std::vector<bool> pivot(space.dim(), false);
  for (Row r : u.rows) pivot[space.leading(r)] = true;
  for (int c = 0; c < space.dim(); ++c)
    if (!pivot[c]) free_cols_.push_back(c);
}

Subspace SuperspaceRange::lift(const Subspace& s) const {
  const VectorSpace& qs = quotient_.space();
  std::vector<Row> rows = u_.rows;
  for (Row r : s.rows) {
    Row x = 0;
    for (std::size_t j = 0; j < free_cols_.size(); ++j) {
      const Elem c = qs.get(r, static_cast<int>(j));
      if (c) x = space_.set(x, free_cols_[j], c);
    }
    rows.push_back(x);
  }
  return space_.canonicalize(rows);
}

Subspace SuperspaceRange::at(std::uint64_t index) const { return lift(quotient_.unrank(index)); }

std::vector<Subspace> subspaces_of(const VectorSpace& space, const Subspace& s, int d) {
  VectorSpace coeff(space.field_ptr(), s.dim());
  Grassmannian g(coeff, d);
  std::vector<Subspace> out;
  out.reserve(g.size());
  g.for_each([&](std::uint64_t, const Subspace& c) {
    std::vector<Row> rows;
    for (Row cr : c.rows) {
      Row x = 0;
      for (int i = 0; i < s.dim(); ++i) {
        const Elem a = coeff.get(cr, i);
        if (a) x = space.add(x, space.scale(a, s.rows[i]));
      }
      rows.push_back(x);
    }
    out.push_back(space.canonicalize(rows));
  });
  return out;
}

std::string format_subspace(const VectorSpace& space, const Subspace& s) {
  std::string out = "<";
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    if (i) out += ',';
    for (int c = 0; c < space.dim(); ++c) {
      const Elem x = space.get(s.rows[i], c);
      if (space.q() <= 10) {
        out += static_cast<char>('0' + x);
      } else {
        if (c) out += '.';
        out += std::to_string(x);
      }
    }
  }
  return out + ">";
}

}  // namespace qdesign
