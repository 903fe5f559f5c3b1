#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qdesign {

using BigInt = boost::multiprecision::cpp_int;

BigInt ipow(const BigInt& base, unsigned exponent);
BigInt ipow(std::uint64_t base, unsigned exponent);

/// a / b, throwing InternalError when b does not divide a.
BigInt exact_div(const BigInt& a, const BigInt& b, const char* context);

std::string to_string(const BigInt& x);
BigInt parse_bigint(const std::string& text);

/// Value as uint64 when it fits and is nonnegative.
std::optional<std::uint64_t> to_u64(const BigInt& x);

bool is_prime(std::uint64_t n);
/// Returns (p, e) with q = p^e, or nullopt when q is not a prime power.
std::optional<std::pair<std::uint32_t, int>> prime_power(std::uint64_t q);
/// Distinct prime divisors in ascending order.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
std::vector<int> divisors(int n);

}  // namespace qdesign
