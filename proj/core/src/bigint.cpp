#include "qdesign/bigint.hpp"

#include <vector>

#include "qdesign/error.hpp"

namespace qdesign {

BigInt ipow(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

BigInt ipow(std::uint64_t base, unsigned exponent) {
  return boost::multiprecision::pow(BigInt(base), exponent);
}

BigInt exact_div(const BigInt& a, const BigInt& b, const char* context) {
  ensure(b != 0, std::string(context) + ": division by zero");
  BigInt quotient, remainder;
  boost::multiprecision::divide_qr(a, b, quotient, remainder);
  ensure(remainder == 0, std::string(context) + ": inexact division " + a.str() + " / " + b.str());
  return quotient;
}

std::string to_string(const BigInt& x) { return x.str(); }

BigInt parse_bigint(const std::string& text) {
  require(!text.empty(), "empty integer literal");
  std::size_t start = text[0] == '-' ? 1 : 0;
  require(start < text.size(), "malformed integer literal '" + text + "'");
  for (std::size_t i = start; i < text.size(); ++i)
    require(text[i] >= '0' && text[i] <= '9', "malformed integer literal '" + text + "'");
  return BigInt(text);
}

std::optional<std::uint64_t> to_u64(const BigInt& x) {
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(x);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::optional<std::pair<std::uint32_t, int>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) p = q;
  int e = 0;
  while (q % p == 0) {
    q /= p;
    ++e;
  }
  if (q != 1) return std::nullopt;
  return std::make_pair(static_cast<std::uint32_t>(p), e);
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<int> divisors(int n) {
  std::vector<int> out;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

}  // namespace qdesign
