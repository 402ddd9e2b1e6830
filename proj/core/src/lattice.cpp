#include "binomcensus/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "binomcensus/errors.hpp"
#include "binomcensus/nt.hpp"

namespace binomcensus::lattice {

namespace detail {

// out = a*b when the product fits and is <= limit.
bool mul_le(std::uint64_t a, std::uint64_t b, std::uint64_t limit, std::uint64_t& out) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r) || r > limit) return false;
  out = r;
  return true;
}

void check_distinct(std::span<const std::uint64_t> primes) {
  std::vector<std::uint64_t> sorted(primes.begin(), primes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidInput("repeated prime in lattice basis");
  for (auto p : sorted)
    if (p < 2) throw InvalidInput("lattice basis entries must be >= 2");
}

}  // namespace detail

namespace {

double factorial(std::size_t n) {
  double r = 1.0;
  for (std::size_t i = 2; i <= n; ++i) r *= static_cast<double>(i);
  return r;
}

double product(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 1.0, std::multiplies<>());
}

double sum(std::span<const double> xs) { return std::accumulate(xs.begin(), xs.end(), 0.0); }

void check_bound_instance(const LatticeInstance& inst) {
  if (inst.coeffs.empty()) throw InvalidInput("bounds need at least one coefficient");
  if (!(inst.lambda > 0.0)) throw InvalidInput("bounds need lambda > 0");
  for (double a : inst.coeffs)
    if (!(a > 0.0)) throw InvalidInput("coefficients must be positive");
}

std::uint64_t prod_or_overflow(std::span<const std::uint64_t> primes, bool& overflow) {
  std::uint64_t r = 1;
  overflow = false;
  for (auto p : primes)
    if (__builtin_mul_overflow(r, p, &r)) overflow = true;
  return r;
}

}  // namespace

bool StrataCounts::partition_holds() const {
  const std::uint64_t b = std::accumulate(boundary.begin(), boundary.end(), std::uint64_t{0});
  return total == plus + b + rest;
}

std::uint64_t count_products(std::span<const std::uint64_t> primes, std::uint64_t T) {
  std::uint64_t n = 0;
  for_each_product(primes, T, [&](std::span<const unsigned>, std::uint64_t) { ++n; });
  return n;
}

std::uint64_t count_products_capped(std::span<const std::uint64_t> primes,
                                    std::span<const std::optional<unsigned>> caps, std::uint64_t T) {
  if (caps.size() != primes.size()) throw InvalidInput("one cap per prime");
  std::uint64_t n = 0;
  for_each_product(primes, T, [&](std::span<const unsigned> v, std::uint64_t) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (caps[i] && v[i] > *caps[i]) return;
    ++n;
  });
  return n;
}

std::uint64_t count_real(const LatticeInstance& inst, double tolerance) {
  for (double a : inst.coeffs)
    if (!(a > 0.0)) throw InvalidInput("coefficients must be positive");
  if (inst.lambda < -tolerance) return 0;
  const auto& a = inst.coeffs;
  auto rec = [&](auto&& self, std::size_t i, double budget) -> std::uint64_t {
    if (i == a.size()) return 1;
    if (i + 1 == a.size()) return static_cast<std::uint64_t>(std::floor((budget + tolerance) / a[i])) + 1;
    std::uint64_t n = 0;
    for (std::uint64_t x = 0; static_cast<double>(x) * a[i] <= budget + tolerance; ++x)
      n += self(self, i + 1, budget - static_cast<double>(x) * a[i]);
    return n;
  };
  return rec(rec, 0, inst.lambda);
}

std::vector<std::uint64_t> zero_mask_tallies(std::span<const std::uint64_t> primes, std::uint64_t T) {
  const std::size_t s = primes.size();
  if (s > 20) throw InvalidInput("too many primes for strata");
  std::vector<std::uint64_t> by_mask(std::size_t{1} << s, 0);
  for_each_product(primes, T, [&](std::span<const unsigned> v, std::uint64_t) {
    std::size_t mask = 0;
    for (std::size_t i = 0; i < s; ++i)
      if (v[i] == 0) mask |= std::size_t{1} << i;
    ++by_mask[mask];
  });
  return by_mask;
}

StrataCounts strata(std::span<const std::uint64_t> primes, std::uint64_t T) {
  const std::size_t s = primes.size();
  const auto by_mask = zero_mask_tallies(primes, T);

  StrataCounts out;
  out.boundary.assign(s, 0);
  out.pairs.assign(s, std::vector<std::uint64_t>(s, 0));
  for (std::size_t mask = 0; mask < by_mask.size(); ++mask) {
    const std::uint64_t n = by_mask[mask];
    if (!n) continue;
    out.total += n;
    const int zeros = std::popcount(mask);
    if (zeros == 0) {
      out.plus += n;
    } else if (zeros == 1) {
      out.boundary[static_cast<std::size_t>(std::countr_zero(mask))] += n;
    } else {
      out.rest += n;
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
          if ((mask >> i & 1) && (mask >> j & 1)) out.pairs[i][j] += n;
    }
  }
  return out;
}

bool shift_identity_check(std::span<const std::uint64_t> primes, std::uint64_t T) {
  const auto st = strata(primes, T);
  bool overflow = false;
  const std::uint64_t P = prod_or_overflow(primes, overflow);
  const std::uint64_t shifted = overflow ? 0 : T / P;
  return st.plus == count_products(primes, shifted);
}

bool boundary_reduction_check(std::span<const std::uint64_t> primes, std::uint64_t T) {
  const auto st = strata(primes, T);
  for (std::size_t j = 0; j < primes.size(); ++j) {
    std::vector<std::uint64_t> others;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (i != j) others.push_back(primes[i]);
    // floor(T p_j / P) = floor(T / prod of the other primes).
    bool ov = false;
    const std::uint64_t rest = prod_or_overflow(others, ov);
    const std::uint64_t budget = ov ? 0 : T / rest;
    if (st.boundary[j] != count_products(others, budget)) return false;
  }
  return true;
}

Bounds trivial_bounds(const LatticeInstance& inst) {
  check_bound_instance(inst);
  const std::size_t s = inst.dimension();
  const double denom = factorial(s) * product(inst.coeffs);
  return {std::pow(inst.lambda, static_cast<double>(s)) / denom,
          std::pow(inst.lambda + sum(inst.coeffs), static_cast<double>(s)) / denom};
}

std::size_t lehmer_default_first(const LatticeInstance& inst) {
  return static_cast<std::size_t>(
      std::distance(inst.coeffs.begin(), std::max_element(inst.coeffs.begin(), inst.coeffs.end())));
}

Bounds lehmer_bounds(const LatticeInstance& inst, std::optional<std::size_t> first) {
  check_bound_instance(inst);
  const std::size_t s = inst.dimension();
  const std::size_t skip = first.value_or(lehmer_default_first(inst));
  if (skip >= s) throw InvalidInput("lehmer: first-coefficient index out of range");
  const double denom = factorial(s) * product(inst.coeffs);
  const double l = inst.lambda;
  const double sd = static_cast<double>(s);
  const double others = sum(inst.coeffs) - inst.coeffs[skip];
  const double lower = (std::pow(l, sd) + 0.5 * sd * others * std::pow(l, sd - 1.0)) / denom;
  const double upper = std::pow(l + 0.5 * sum(inst.coeffs), sd) / denom;
  return {lower, upper};
}

double spencer_estimate(const LatticeInstance& inst) {
  check_bound_instance(inst);
  const std::size_t s = inst.dimension();
  const double prod_a = product(inst.coeffs);
  const double sd = static_cast<double>(s);
  return std::pow(inst.lambda, sd) / (factorial(s) * prod_a) +
         sum(inst.coeffs) / prod_a * std::pow(inst.lambda, sd - 1.0) / (2.0 * factorial(s - 1));
}

bool coefficients_are_prime_logs(const LatticeInstance& inst) {
  std::vector<std::uint64_t> seen;
  for (double a : inst.coeffs) {
    if (!(a > 0.0) || a > 44.0) return false;
    const double p = std::round(std::exp(a));
    if (p < 2.0) return false;
    const auto pi = static_cast<std::uint64_t>(p);
    if (std::abs(std::log(p) - a) > 1e-12 * a || !nt::is_prime(pi)) return false;
    if (std::find(seen.begin(), seen.end(), pi) != seen.end()) return false;
    seen.push_back(pi);
  }
  return true;
}

LatticeInstance log_instance(std::span<const std::uint64_t> primes, double T) {
  LatticeInstance inst;
  for (auto p : primes) inst.coeffs.push_back(std::log(static_cast<double>(p)));
  inst.lambda = std::log(T);
  return inst;
}

}  // namespace binomcensus::lattice
