#pragma once

// Exact integer number theory on 64-bit inputs: factorization, totient,
// radicals and the reduced ratio phi(n)/n.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace binomcensus {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace nt {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical prime factorization: primes strictly increasing, exponents >= 1.
/// The factorization of 1 has no factors.
class Factorization {
 public:
  Factorization() = default;

  /// Validates the invariants and that the product equals `value`.
  Factorization(std::uint64_t value, std::vector<PrimePower> factors);

  std::uint64_t value() const { return value_; }
  const std::vector<PrimePower>& factors() const { return factors_; }
  std::vector<std::uint64_t> primes() const;

  /// Exponent of `p` (0 when p does not divide the value).
  unsigned exponent_of(std::uint64_t p) const;
  bool divisible_by_prime(std::uint64_t p) const { return exponent_of(p) > 0; }

  std::string to_string() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::uint64_t value_ = 1;
  std::vector<PrimePower> factors_;
};

/// A non-negative fraction kept in lowest terms.
class ReducedRational {
 public:
  ReducedRational(std::uint64_t numerator, std::uint64_t denominator);

  std::uint64_t numerator() const { return num_; }
  std::uint64_t denominator() const { return den_; }
  Rational to_rational() const { return Rational(BigInt(num_), BigInt(den_)); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const ReducedRational&, const ReducedRational&) = default;

 private:
  std::uint64_t num_;
  std::uint64_t den_;
};

// Checked 64-bit helpers; throw ArithmeticOverflow instead of wrapping.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

Factorization factor(std::uint64_t n);

/// (p, e) with n = p^e, or nullopt when n is not a prime power (n = 1 included).
std::optional<PrimePower> prime_power(std::uint64_t n);

std::uint64_t euler_phi(const Factorization& f);
std::uint64_t rad(const Factorization& f);
/// rad(n) when 4 does not divide n, otherwise 2*rad(n).
std::uint64_t rad4(const Factorization& f);
/// phi(n)/n in lowest terms; depends only on rad(n).
ReducedRational phi_over(const Factorization& f);

}  // namespace nt
}  // namespace binomcensus
