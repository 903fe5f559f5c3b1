#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qdesign/bigint.hpp"
#include "qdesign/field.hpp"

namespace qdesign {

/// Vector of GF(q)^v packed in a word; column c occupies digit (v-1-c), so
/// comparing rows as integers compares them lexicographically.
using Row = std::uint64_t;

/// Subspace of GF(q)^v in reduced row-echelon form, pivots ascending.
struct Subspace {
  int ambient = 0;
  std::vector<Row> rows;

  int dim() const { return static_cast<int>(rows.size()); }
  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
    if (auto c = a.ambient <=> b.ambient; c != 0) return c;
    if (auto c = a.rows.size() <=> b.rows.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
      if (auto c = a.rows[i] <=> b.rows[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
};

struct SubspaceHash {
  std::size_t operator()(const Subspace& s) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(s.ambient);
    for (Row r : s.rows) {
      h ^= r + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

/// GF(q)^dim with packed-row arithmetic.
class VectorSpace {
 public:
  VectorSpace(std::shared_ptr<const GaloisField> field, int dim);
  VectorSpace(std::uint64_t q, int dim);

  const GaloisField& field() const { return *field_; }
  std::shared_ptr<const GaloisField> field_ptr() const { return field_; }
  std::uint64_t q() const { return field_->order(); }
  int dim() const { return dim_; }
  int bits() const { return bits_; }
  bool binary() const { return binary_; }

  Elem get(Row x, int col) const {
    return static_cast<Elem>((x >> (bits_ * (dim_ - 1 - col))) & mask_);
  }
  Row set(Row x, int col, Elem c) const {
    const int shift = bits_ * (dim_ - 1 - col);
    return (x & ~(mask_ << shift)) | (static_cast<Row>(c) << shift);
  }
  Row unit(int col) const { return Row{1} << (bits_ * (dim_ - 1 - col)); }
  Row add(Row a, Row b) const;
  Row sub(Row a, Row b) const;
  Row scale(Elem c, Row a) const;
  /// y + c*x
  Row axpy(Elem c, Row x, Row y) const;
  /// First nonzero column, or -1 for the zero row.
  int leading(Row x) const {
    if (x == 0) return -1;
    return dim_ - 1 - (63 - std::countl_zero(x)) / bits_;
  }
  bool valid(Row x) const;
  Row from_digits(std::span<const Elem> d) const;
  std::vector<Elem> digits(Row x) const;

  /// Reduced row-echelon form of the span of `basis`.
  Subspace canonicalize(std::span<const Row> basis) const;
  bool is_canonical(const Subspace& s) const;
  int rank(std::span<const Row> rows) const;
  bool contains(const Subspace& s, Row x) const;
  /// x reduced against the echelon basis of s (zero iff x in s).
  Row reduce(const Subspace& s, Row x) const;
  Subspace sum(const Subspace& a, const Subspace& b) const;
  int intersection_dim(const Subspace& a, const Subspace& b) const;
  bool is_subspace_of(const Subspace& a, const Subspace& b) const;
  Subspace zero() const { return Subspace{dim_, {}}; }
  Subspace whole() const;

 private:
  std::shared_ptr<const GaloisField> field_;
  int dim_;
  int bits_;
  Row mask_;
  bool binary_;
};

/// [v k]_q; 0 when k > v.
BigInt gaussian_binomial(int v, int k, std::uint64_t q);

/// d-subspaces of GF(q)^v in pivot-walk order: pivot tuples ascending, then
/// the free entries read row by row, first entry most significant.
class Grassmannian {
 public:
  Grassmannian(const VectorSpace& space, int d);

  const VectorSpace& space() const { return space_; }
  int d() const { return d_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t rank(const Subspace& s) const;
  Subspace unrank(std::uint64_t index) const;

  /// Calls fn(index, subspace) for indices in [begin, end).
  template <class Fn>
  void for_range(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
    if (begin >= end) return;
    Cursor c = cursor_at(begin);
    for (std::uint64_t i = begin; i < end; ++i) {
      fn(i, c.current);
      if (i + 1 < end) advance(c);
    }
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    for_range(0, size_, std::forward<Fn>(fn));
  }

 private:
  struct Cursor {
    std::vector<int> pivots;
    std::vector<Elem> free;
    Subspace current;
  };
  Cursor cursor_at(std::uint64_t index) const;
  void advance(Cursor& c) const;
  void build(Cursor& c) const;
  int free_count(int row, int pivot) const { return space_.dim() - pivot - 1 - (d_ - 1 - row); }

  VectorSpace space_;
  int d_;
  std::uint64_t size_;
  std::vector<std::uint64_t> qpow_;
  // completions_[row][c] = number of subspaces for rows row.. with pivot(row) >= c
  std::vector<std::vector<std::uint64_t>> completions_;
};

/// k-superspaces of U in the order of the (k - dim U)-subspaces of the
/// quotient (coordinates at U's non-pivot columns).
class SuperspaceRange {
 public:
  SuperspaceRange(const VectorSpace& space, const Subspace& u, int k);

  std::uint64_t size() const { return quotient_.size(); }
  Subspace at(std::uint64_t index) const;
  template <class Fn>
  void for_each(Fn&& fn) const {
    quotient_.for_each([&](std::uint64_t i, const Subspace& s) { fn(i, lift(s)); });
  }
  template <class Fn>
  void for_range(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
    quotient_.for_range(begin, end, [&](std::uint64_t i, const Subspace& s) { fn(i, lift(s)); });
  }

 private:
  Subspace lift(const Subspace& s) const;

  VectorSpace space_;
  Subspace u_;
  std::vector<int> free_cols_;
  Grassmannian quotient_;
};

/// All d-subspaces of s (as subspaces of the ambient space), in the order of
/// the coefficient Grassmannian of GF(q)^{dim s}.
std::vector<Subspace> subspaces_of(const VectorSpace& space, const Subspace& s, int d);

/// "<101,011>" style rendering of the basis rows.
std::string format_subspace(const VectorSpace& space, const Subspace& s);

}  // namespace qdesign
