#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qdesign {

/// Element of GF(p^n), encoded as the integer sum c_i p^i of its polynomial
/// coordinates over GF(p).
using Elem = std::uint32_t;

/// Element of an extension GF(q^l) over GF(q): l coordinate digits packed in
/// a word, coordinate x_1 (the constant 1) in the most significant digit.
using Word = std::uint64_t;

/// GF(p^n) built on the least monic irreducible of degree n (least integer
/// encoding) with the least element of full order as primitive element.
class GaloisField {
 public:
  GaloisField(std::uint32_t p, int degree);

  std::uint32_t characteristic() const { return p_; }
  int degree() const { return n_; }
  std::uint64_t order() const { return order_; }
  /// Coefficients c_0..c_n of the defining polynomial.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  Elem primitive() const { return primitive_; }
  bool has_tables() const { return !exp_.empty(); }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  /// Discrete log base primitive(); needs tables.
  std::uint64_t log(Elem a) const;
  Elem exp(std::uint64_t i) const;
  std::uint64_t element_order(Elem a) const;

  std::uint32_t digit(Elem a, int i) const;

 private:
  Elem mul_slow(Elem a, Elem b) const;
  Elem add_slow(Elem a, Elem b, bool subtract) const;

  std::uint32_t p_;
  int n_;
  std::uint64_t order_;
  std::vector<std::uint32_t> modulus_;
  Elem primitive_ = 1;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  // full operation tables for tiny fields (order <= 256)
  std::vector<std::uint8_t> add_tab_, sub_tab_;
};

/// GF(q^l) seen as GF(q)^l in the power basis 1, w, ..., w^{l-1} of the
/// primitive element w of GF(q^l).
class ExtensionField {
 public:
  ExtensionField(const GaloisField& base, int l);

  const GaloisField& base() const { return base_; }
  /// GF(q^l) as a field over the prime field.
  const GaloisField& field() const { return big_; }
  int degree() const { return l_; }
  std::uint64_t order() const { return order_; }
  int digit_bits() const { return bits_; }
  int word_bits() const { return bits_ * l_; }

  Word zero() const { return 0; }
  Word one() const { return static_cast<Word>(1) << (bits_ * (l_ - 1)); }
  Word primitive() const { return exp_word_[1 % exp_word_.size()]; }
  /// c * 1 for c in GF(q).
  Word from_base(Elem c) const { return static_cast<Word>(c) << (bits_ * (l_ - 1)); }

  Elem coord(Word a, int i) const {
    return static_cast<Elem>((a >> (bits_ * (l_ - 1 - i))) & digit_mask_);
  }
  Word from_coords(std::span<const Elem> c) const;
  std::vector<Elem> coords(Word a) const;
  bool valid(Word a) const;

  Word add(Word a, Word b) const;
  Word sub(Word a, Word b) const;
  Word neg(Word a) const;
  Word mul(Word a, Word b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t s = log_word_[a] + log_word_[b];
    if (s >= exp_word_.size()) s -= exp_word_.size();
    return exp_word_[s];
  }
  Word inv(Word a) const;
  Word div(Word a, Word b) const { return mul(a, inv(b)); }
  Word pow(Word a, std::uint64_t e) const;
  Word scale(Elem c, Word a) const;
  std::uint64_t log(Word a) const;
  Word exp(std::uint64_t i) const { return exp_word_[i % exp_word_.size()]; }

  /// Enumerates GF(q^l) in increasing word order (index t <-> word).
  Word word_at(std::uint64_t t) const;
  std::uint64_t index_of(Word a) const;

 private:
  GaloisField base_;
  GaloisField big_;
  int l_;
  int bits_;
  Word digit_mask_;
  std::uint64_t order_;
  std::vector<Word> exp_word_;
  std::vector<std::uint32_t> log_word_;
  std::vector<std::uint32_t> big_of_word_;
};

}  // namespace qdesign
