#include "qdesign/tower.hpp"

#include <string>

#include "qdesign/bigint.hpp"
#include "qdesign/error.hpp"

namespace qdesign {

FieldTower::FieldTower(std::shared_ptr<const GaloisField> base, int l, int m)
    : base_(std::move(base)),
      middle_(std::make_shared<const ExtensionField>(*base_, l)),
      l_(l),
      m_(m),
      word_mask_(middle_->word_bits() >= 64 ? ~Word{0} : (Word{1} << middle_->word_bits()) - 1),
      space_(base_, l * m),
      line_space_(base_, l) {
  const BigInt top_order = ipow(base_->order(), static_cast<unsigned>(l * m));
  if (top_order <= (BigInt(1) << 24))
    top_ = std::make_shared<const GaloisField>(base_->characteristic(), base_->degree() * l * m);
}

FieldTower FieldTower::build(std::uint32_t p, int q_exponent, int l, int m) {
  require(is_prime(p), "characteristic " + std::to_string(p) + " is not prime");
  require(q_exponent >= 1 && l >= 1 && m >= 1, "tower degrees must be at least 1");
  return FieldTower(std::make_shared<const GaloisField>(p, q_exponent), l, m);
}

Row FieldTower::flatten(std::span<const Word> x) const {
  require(static_cast<int>(x.size()) == m_, "vector over GF(q^l) must have length m = " + std::to_string(m_));
  Row out = 0;
  for (int j = 0; j < m_; ++j) {
    require(middle_->valid(x[j]), "coordinate is not an element of GF(q^l)");
    out |= place(x[j], j);
  }
  return out;
}

std::vector<Word> FieldTower::unflatten(Row x) const {
  std::vector<Word> out(m_);
  for (int j = 0; j < m_; ++j) out[j] = block(x, j);
  return out;
}

Row FieldTower::scale_middle(Word a, Row x) const {
  Row out = 0;
  for (int j = 0; j < m_; ++j) out |= place(middle_->mul(a, block(x, j)), j);
  return out;
}

int FieldTower::rank_over_middle(std::vector<std::vector<Word>> rows) const {
  const ExtensionField& f = *middle_;
  int rank = 0;
  for (int col = 0; col < m_ && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t i = rank;
    while (i < rows.size() && rows[i][col] == 0) ++i;
    if (i == rows.size()) continue;
    std::swap(rows[rank], rows[i]);
    const Word inv = f.inv(rows[rank][col]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const Word c = f.mul(rows[r][col], inv);
      if (!c) continue;
      for (int k = col; k < m_; ++k) rows[r][k] = f.sub(rows[r][k], f.mul(c, rows[rank][k]));
    }
    ++rank;
  }
  return rank;
}

int FieldTower::span_dim_over_middle(const Subspace& w) const {
  require(w.ambient == v(), "subspace is not in GF(q)^" + std::to_string(v()));
  require(space_.is_canonical(w), "subspace basis is not in reduced echelon form");
  std::vector<std::vector<Word>> rows;
  for (Row r : w.rows) rows.push_back(unflatten(r));
  return rank_over_middle(std::move(rows));
}

}  // namespace qdesign
