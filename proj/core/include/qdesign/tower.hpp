#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qdesign/field.hpp"
#include "qdesign/subspace.hpp"

namespace qdesign {

enum class Level { base, middle, top };

/// Coordinates of an element over the level below it: length l for the
/// middle level, m for the top level (entries are GF(q^l) words there).
struct TowerElement {
  Level level = Level::base;
  std::vector<Word> coords;
};

/// GF(q) < GF(q^l) < GF(q^{ml}), q = p^e, with V = GF(q)^{ml} identified
/// with GF(q^l)^m: coordinate (i, j) of V is the x_i-coefficient of the j-th
/// GF(q^l)-coordinate, at column (j-1)*l + (i-1).
class FieldTower {
 public:
  static FieldTower build(std::uint32_t p, int q_exponent, int l, int m);

  std::uint64_t q() const { return base_->order(); }
  int l() const { return l_; }
  int m() const { return m_; }
  int v() const { return l_ * m_; }
  const GaloisField& base() const { return *base_; }
  std::shared_ptr<const GaloisField> base_ptr() const { return base_; }
  const ExtensionField& middle() const { return *middle_; }
  /// GF(q^{ml}) over the prime field; absent above 2^24 elements.
  const GaloisField* top() const { return top_ ? top_.get() : nullptr; }

  /// GF(q)^{ml}
  const VectorSpace& space() const { return space_; }
  /// GF(q)^l, the middle field as a vector space (rows coincide with words).
  const VectorSpace& line_space() const { return line_space_; }

  Row flatten(std::span<const Word> x) const;
  std::vector<Word> unflatten(Row x) const;
  Word block(Row x, int j) const {
    return (x >> (middle_->word_bits() * (m_ - 1 - j))) & word_mask_;
  }
  /// Y_j (0-based j) scaled by a.
  Row place(Word a, int j) const { return a << (middle_->word_bits() * (m_ - 1 - j)); }
  /// a * x for a in GF(q^l), x in V.
  Row scale_middle(Word a, Row x) const;

  int span_dim_over_middle(const Subspace& w) const;
  int rank_over_middle(std::vector<std::vector<Word>> vectors) const;

 private:
  FieldTower(std::shared_ptr<const GaloisField> base, int l, int m);

  std::shared_ptr<const GaloisField> base_;
  std::shared_ptr<const ExtensionField> middle_;
  std::shared_ptr<const GaloisField> top_;
  int l_, m_;
  Word word_mask_;
  VectorSpace space_;
  VectorSpace line_space_;
};

}  // namespace qdesign
