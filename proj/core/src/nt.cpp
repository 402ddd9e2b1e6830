#include "binomcensus/nt.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "binomcensus/errors.hpp"

namespace binomcensus::nt {

namespace {

constexpr std::uint64_t kTrialDivisionLimit = 1'000'000;

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// Brent's variant of Pollard rho. Returns a non-trivial factor of the odd
// composite n (never n itself).
std::uint64_t pollard_brent(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto step = [&](std::uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, q = 1, g = 1, ys = 2;
    std::uint64_t r = 1;
    constexpr std::uint64_t kBatch = 128;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(kBatch, r - k); ++i) {
          y = step(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd64(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd64(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(std::uint64_t n, std::map<std::uint64_t, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  split(d, out);
  split(n / d, out);
}

}  // namespace

Factorization::Factorization(std::uint64_t value, std::vector<PrimePower> factors)
    : value_(value), factors_(std::move(factors)) {
  if (value_ == 0) throw InvalidInput("factorization of 0 is undefined");
  std::uint64_t product = 1;
  std::uint64_t prev = 1;
  for (const auto& [p, e] : factors_) {
    if (p <= prev || e == 0) throw InvalidInput("factors must have increasing primes and positive exponents");
    product = checked_mul(product, checked_pow(p, e));
    prev = p;
  }
  if (product != value_) throw InvalidInput("factor product does not match value");
}

std::vector<std::uint64_t> Factorization::primes() const {
  std::vector<std::uint64_t> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.prime);
  return out;
}

unsigned Factorization::exponent_of(std::uint64_t p) const {
  for (const auto& f : factors_)
    if (f.prime == p) return f.exponent;
  return 0;
}

std::string Factorization::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << '*';
    os << factors_[i].prime;
    if (factors_[i].exponent > 1) os << '^' << factors_[i].exponent;
  }
  return os.str();
}

ReducedRational::ReducedRational(std::uint64_t numerator, std::uint64_t denominator) {
  if (denominator == 0) throw InvalidInput("zero denominator");
  const std::uint64_t g = std::gcd(numerator, denominator);
  num_ = g ? numerator / g : 0;
  den_ = g ? denominator / g : 1;
  if (num_ == 0) den_ = 1;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("64-bit multiplication overflow");
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("64-bit addition overflow");
  return r;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Factorization factor(std::uint64_t n) {
  if (n == 0) throw InvalidInput("cannot factor 0");
  std::vector<PrimePower> factors;
  std::uint64_t rest = n;
  for (std::uint64_t p = 2; p <= kTrialDivisionLimit && p * p <= rest; p += (p == 2 ? 1 : 2)) {
    if (rest % p) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    factors.push_back({p, e});
  }
  if (rest > 1) {
    std::map<std::uint64_t, unsigned> big;
    split(rest, big);
    for (const auto& [p, e] : big) factors.push_back({p, e});
  }
  return Factorization(n, std::move(factors));
}

std::optional<PrimePower> prime_power(std::uint64_t n) {
  if (n < 2) return std::nullopt;
  const auto f = factor(n);
  if (f.factors().size() != 1) return std::nullopt;
  return f.factors().front();
}

std::uint64_t euler_phi(const Factorization& f) {
  std::uint64_t r = 1;
  for (const auto& [p, e] : f.factors()) r = checked_mul(r, checked_mul(checked_pow(p, e - 1), p - 1));
  return r;
}

std::uint64_t rad(const Factorization& f) {
  std::uint64_t r = 1;
  for (const auto& pp : f.factors()) r = checked_mul(r, pp.prime);
  return r;
}

std::uint64_t rad4(const Factorization& f) {
  const std::uint64_t r = rad(f);
  return f.exponent_of(2) >= 2 ? checked_mul(2, r) : r;
}

ReducedRational phi_over(const Factorization& f) {
  std::uint64_t num = 1, den = 1;
  for (const auto& pp : f.factors()) {
    num = checked_mul(num, pp.prime - 1);
    den = checked_mul(den, pp.prime);
  }
  return ReducedRational(num, den);
}

}  // namespace binomcensus::nt
