#include "qdesign/field.hpp"

#include <bit>
#include <limits>
#include <string>

#include "qdesign/bigint.hpp"
#include "qdesign/error.hpp"

namespace qdesign {

namespace {

using Poly = std::vector<std::uint32_t>;  // coefficients over GF(p), low degree first

constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 20;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return static_cast<std::uint32_t>(r);
}

void poly_mod(Poly& a, const Poly& f, std::uint32_t p) {
  trim(a);
  const std::size_t n = f.size() - 1;
  const std::uint32_t lead_inv = inv_mod(f.back(), p);
  while (a.size() > n) {
    const std::uint64_t c = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - 1 - n;
    for (std::size_t i = 0; i <= n; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * f[i]) % p);
    trim(a);
  }
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = static_cast<std::uint32_t>((out[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  poly_mod(out, f, p);
  return out;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint32_t p) {
  Poly r{1};
  poly_mod(base, f, p);
  for (; e; e >>= 1) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    poly_mod(a, b, p);
    std::swap(a, b);
  }
  return a;
}

// Ben-Or: f of degree n is irreducible iff gcd(f, x^{p^i} - x) = 1 for i <= n/2.
bool irreducible(const Poly& f, std::uint32_t p) {
  const int n = static_cast<int>(f.size()) - 1;
  Poly h{0, 1};
  for (int i = 1; i <= n / 2; ++i) {
    h = poly_powmod(h, p, f, p);
    Poly d = h;
    if (d.size() < 2) d.resize(2, 0);
    d[1] = (d[1] + p - 1) % p;
    trim(d);
    if (d.empty()) return false;
    if (poly_gcd(f, d, p).size() > 1) return false;
  }
  return true;
}

}  // namespace

GaloisField::GaloisField(std::uint32_t p, int degree) : p_(p), n_(degree) {
  require(is_prime(p), "characteristic " + std::to_string(p) + " is not prime");
  require(degree >= 1, "field degree must be at least 1");
  const BigInt big_order = ipow(std::uint64_t{p}, static_cast<unsigned>(degree));
  require(big_order <= BigInt(std::numeric_limits<std::uint32_t>::max()),
          "field GF(" + std::to_string(p) + "^" + std::to_string(degree) + ") is too large");
  order_ = static_cast<std::uint64_t>(big_order);

  for (std::uint64_t t = 0; t < order_; ++t) {
    Poly f(n_ + 1, 0);
    std::uint64_t x = t;
    for (int i = 0; i < n_; ++i, x /= p) f[i] = static_cast<std::uint32_t>(x % p);
    f[n_] = 1;
    if (irreducible(f, p)) {
      modulus_ = f;
      break;
    }
  }
  ensure(!modulus_.empty(), "no irreducible polynomial found");

  if (order_ <= 256) {
    add_tab_.resize(order_ * order_);
    sub_tab_.resize(order_ * order_);
    for (Elem a = 0; a < order_; ++a)
      for (Elem b = 0; b < order_; ++b) {
        add_tab_[a * order_ + b] = static_cast<std::uint8_t>(add_slow(a, b, false));
        sub_tab_[a * order_ + b] = static_cast<std::uint8_t>(add_slow(a, b, true));
      }
  }

  if (order_ == 2) {
    primitive_ = 1;
  } else {
    for (Elem g = 1; g < order_; ++g)
      if (element_order(g) == order_ - 1) {
        primitive_ = g;
        break;
      }
  }

  if (order_ <= kTableLimit) {
    exp_.resize(order_ - 1);
    log_.assign(order_, 0);
    Elem x = 1;
    for (std::uint64_t i = 0; i + 1 < order_; ++i) {
      exp_[i] = x;
      log_[x] = static_cast<std::uint32_t>(i);
      x = mul_slow(x, primitive_);
    }
    ensure(x == 1, "primitive element has wrong order");
  }
}

std::uint32_t GaloisField::digit(Elem a, int i) const {
  for (int k = 0; k < i; ++k) a /= p_;
  return a % p_;
}

Elem GaloisField::add_slow(Elem a, Elem b, bool subtract) const {
  if (p_ == 2) return a ^ b;
  Elem out = 0, scale = 1;
  for (int i = 0; i < n_; ++i, scale *= p_) {
    const std::uint32_t x = a % p_, y = b % p_;
    a /= p_;
    b /= p_;
    out += scale * ((subtract ? x + p_ - y : x + y) % p_);
  }
  return out;
}

Elem GaloisField::add(Elem a, Elem b) const {
  if (p_ == 2) return a ^ b;
  if (!add_tab_.empty()) return add_tab_[a * order_ + b];
  return add_slow(a, b, false);
}

Elem GaloisField::sub(Elem a, Elem b) const {
  if (p_ == 2) return a ^ b;
  if (!sub_tab_.empty()) return sub_tab_[a * order_ + b];
  return add_slow(a, b, true);
}

Elem GaloisField::neg(Elem a) const { return sub(0, a); }

Elem GaloisField::mul_slow(Elem a, Elem b) const {
  if (p_ == 2) {
    std::uint64_t prod = 0;
    for (int i = 0; i < n_; ++i)
      if ((b >> i) & 1) prod ^= std::uint64_t{a} << i;
    std::uint64_t f = 0;
    for (int i = 0; i <= n_; ++i) f |= std::uint64_t{modulus_[i]} << i;
    for (int i = 2 * n_ - 2; i >= n_; --i)
      if ((prod >> i) & 1) prod ^= f << (i - n_);
    return static_cast<Elem>(prod);
  }
  Poly x(n_), y(n_);
  for (int i = 0; i < n_; ++i, a /= p_, b /= p_) {
    x[i] = a % p_;
    y[i] = b % p_;
  }
  trim(x);
  trim(y);
  const Poly r = poly_mulmod(x, y, modulus_, p_);
  Elem out = 0;
  for (std::size_t i = r.size(); i-- > 0;) out = out * p_ + r[i];
  return out;
}

Elem GaloisField::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  if (exp_.empty()) return mul_slow(a, b);
  std::uint64_t s = std::uint64_t{log_[a]} + log_[b];
  if (s >= exp_.size()) s -= exp_.size();
  return exp_[s];
}

Elem GaloisField::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (!exp_.empty()) return exp_[(log_[a] * (e % exp_.size())) % exp_.size()];
  Elem r = 1;
  for (; e; e >>= 1, a = mul_slow(a, a))
    if (e & 1) r = mul_slow(r, a);
  return r;
}

Elem GaloisField::inv(Elem a) const {
  require(a != 0, "inverse of zero");
  if (!exp_.empty()) return exp_[(exp_.size() - log_[a]) % exp_.size()];
  return pow(a, order_ - 2);
}

std::uint64_t GaloisField::log(Elem a) const {
  require(a != 0, "logarithm of zero");
  require(!exp_.empty(), "field has no log tables");
  return log_[a];
}

Elem GaloisField::exp(std::uint64_t i) const {
  if (!exp_.empty()) return exp_[i % exp_.size()];
  return pow(primitive_, i);
}

std::uint64_t GaloisField::element_order(Elem a) const {
  require(a != 0, "order of zero");
  std::uint64_t ord = order_ - 1;
  for (std::uint64_t r : prime_factors(order_ - 1))
    while (ord % r == 0 && pow(a, ord / r) == 1) ord /= r;
  return ord;
}

ExtensionField::ExtensionField(const GaloisField& base, int l)
    : base_(base),
      big_(base.characteristic(), base.degree() * l),
      l_(l),
      bits_(std::bit_width(base.order() - 1)),
      digit_mask_((Word{1} << bits_) - 1),
      order_(big_.order()) {
  require(l >= 1, "extension degree must be at least 1");
  if (!big_.has_tables() || bits_ * l_ > 24)
    throw BudgetError("GF(" + std::to_string(base.order()) + "^" + std::to_string(l) +
                      ") exceeds the table-driven range");
  const std::uint32_t p = base.characteristic();
  const int e = base.degree();
  const std::uint64_t q = base.order();

  // GF(q) -> GF(q^l): identity for prime q, else through the least root of
  // the base modulus.
  std::vector<Elem> emb(q);
  if (e == 1) {
    for (Elem c = 0; c < q; ++c) emb[c] = c;
  } else {
    Elem rho = 0;
    for (Elem x = 1; x < order_ && rho == 0; ++x) {
      Elem val = 0;
      for (int i = e; i >= 0; --i) val = big_.add(big_.mul(val, x), base.modulus()[i]);
      if (val == 0) rho = x;
    }
    ensure(rho != 0, "base field does not embed");
    for (Elem c = 0; c < q; ++c) {
      Elem v = 0, r = 1, x = c;
      for (int j = 0; j < e; ++j, x /= p, r = big_.mul(r, rho)) v = big_.add(v, big_.mul(x % p, r));
      emb[c] = v;
    }
  }

  std::vector<Elem> wpow(l_);
  for (int i = 0; i < l_; ++i) wpow[i] = big_.exp(static_cast<std::uint64_t>(i));

  const std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
  big_of_word_.assign(std::size_t{1} << (bits_ * l_), none);
  std::vector<Word> word_of_big(order_, 0);
  std::vector<bool> seen(order_, false);
  for (std::uint64_t t = 0; t < order_; ++t) {
    const Word w = word_at(t);
    Elem elem = 0;
    for (int i = 0; i < l_; ++i) elem = big_.add(elem, big_.mul(emb[coord(w, i)], wpow[i]));
    ensure(!seen[elem], "power basis is not a basis");
    seen[elem] = true;
    big_of_word_[w] = elem;
    word_of_big[elem] = w;
  }
  exp_word_.resize(order_ - 1);
  log_word_.assign(big_of_word_.size(), 0);
  for (std::uint64_t i = 0; i + 1 < order_; ++i) {
    const Word w = word_of_big[big_.exp(i)];
    exp_word_[i] = w;
    log_word_[w] = static_cast<std::uint32_t>(i);
  }
}

Word ExtensionField::word_at(std::uint64_t t) const {
  const std::uint64_t q = base_.order();
  Word w = 0;
  for (int i = l_ - 1; i >= 0; --i, t /= q) w |= static_cast<Word>(t % q) << (bits_ * (l_ - 1 - i));
  return w;
}

std::uint64_t ExtensionField::index_of(Word a) const {
  std::uint64_t t = 0;
  for (int i = 0; i < l_; ++i) t = t * base_.order() + coord(a, i);
  return t;
}

Word ExtensionField::from_coords(std::span<const Elem> c) const {
  require(static_cast<int>(c.size()) == l_, "coordinate vector has wrong length");
  Word w = 0;
  for (int i = 0; i < l_; ++i) {
    require(c[i] < base_.order(), "coordinate outside GF(q)");
    w |= static_cast<Word>(c[i]) << (bits_ * (l_ - 1 - i));
  }
  return w;
}

std::vector<Elem> ExtensionField::coords(Word a) const {
  std::vector<Elem> out(l_);
  for (int i = 0; i < l_; ++i) out[i] = coord(a, i);
  return out;
}

bool ExtensionField::valid(Word a) const {
  return a < big_of_word_.size() && big_of_word_[a] != std::numeric_limits<std::uint32_t>::max();
}

Word ExtensionField::add(Word a, Word b) const {
  if (base_.characteristic() == 2) return a ^ b;
  Word out = 0;
  for (int i = 0; i < l_; ++i)
    out |= static_cast<Word>(base_.add(coord(a, i), coord(b, i))) << (bits_ * (l_ - 1 - i));
  return out;
}

Word ExtensionField::sub(Word a, Word b) const {
  if (base_.characteristic() == 2) return a ^ b;
  Word out = 0;
  for (int i = 0; i < l_; ++i)
    out |= static_cast<Word>(base_.sub(coord(a, i), coord(b, i))) << (bits_ * (l_ - 1 - i));
  return out;
}

Word ExtensionField::neg(Word a) const { return sub(0, a); }

Word ExtensionField::inv(Word a) const {
  require(a != 0, "inverse of zero");
  return exp_word_[(exp_word_.size() - log_word_[a]) % exp_word_.size()];
}

Word ExtensionField::pow(Word a, std::uint64_t e) const {
  if (e == 0) return one();
  if (a == 0) return 0;
  return exp_word_[(log_word_[a] * (e % exp_word_.size())) % exp_word_.size()];
}

Word ExtensionField::scale(Elem c, Word a) const {
  if (base_.characteristic() == 2 && base_.degree() == 1) return c ? a : 0;
  return mul(from_base(c), a);
}

std::uint64_t ExtensionField::log(Word a) const {
  require(a != 0, "logarithm of zero");
  return log_word_[a];
}

}  // namespace qdesign
