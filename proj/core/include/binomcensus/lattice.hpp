#pragma once

// Lattice points in the tetrahedron a_1 x_1 + ... + a_s x_s <= lambda, x_i >= 0.
//
// Two counting paths: an integer path over prime-power products t(v) <= T
// (no floating point, no ties), and a real path for arbitrary positive
// coefficients with a symmetric boundary tolerance.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace binomcensus::lattice {

struct LatticeInstance {
  std::vector<double> coeffs;  // a_1..a_s, all > 0
  double lambda = 0.0;         // >= 0

  std::size_t dimension() const { return coeffs.size(); }
};

/// |Upsilon(T)| split by support. `boundary[j]` counts vectors whose only zero
/// coordinate is j; `rest` those with two or more zeros; `pairs[i][j]` (i < j)
/// those in `rest` with v_i = v_j = 0.
struct StrataCounts {
  std::uint64_t total = 0;
  std::uint64_t plus = 0;
  std::vector<std::uint64_t> boundary;
  std::uint64_t rest = 0;
  std::vector<std::vector<std::uint64_t>> pairs;

  bool partition_holds() const;
};

inline constexpr double kDefaultBoundaryTolerance = 1e-12;

/// Number of exponent vectors with prod p_i^{v_i} <= T. Zero when T = 0.
/// Throws InvalidInput on repeated primes.
std::uint64_t count_products(std::span<const std::uint64_t> primes, std::uint64_t T);

/// Visits every exponent vector of Upsilon(T) with its product t(v). The
/// exponent span is only valid during the call.
template <typename Visitor>
void for_each_product(std::span<const std::uint64_t> primes, std::uint64_t T, Visitor&& visit);

/// Same as count_products, but each prime has an optional exponent cap.
std::uint64_t count_products_capped(std::span<const std::uint64_t> primes,
                                    std::span<const std::optional<unsigned>> caps, std::uint64_t T);

std::uint64_t count_real(const LatticeInstance& inst, double tolerance = kDefaultBoundaryTolerance);

StrataCounts strata(std::span<const std::uint64_t> primes, std::uint64_t T);

/// Points of Upsilon(T) tallied by zero set: entry m counts vectors whose
/// zero coordinates are exactly the set bits of m.
std::vector<std::uint64_t> zero_mask_tallies(std::span<const std::uint64_t> primes, std::uint64_t T);

/// |Upsilon+(T)| == |Upsilon(floor(T / prod p_i))|.
bool shift_identity_check(std::span<const std::uint64_t> primes, std::uint64_t T);

/// |Upsilon_j(T)| == count over the primes without p_j at floor(T p_j / prod p_i).
bool boundary_reduction_check(std::span<const std::uint64_t> primes, std::uint64_t T);

struct Bounds {
  double lower;
  double upper;
};

/// Volume bound and shifted-volume bound; both strict. Requires s >= 1.
Bounds trivial_bounds(const LatticeInstance& inst);

/// Lehmer/Lochs-form polynomials. `first` selects which coefficient is
/// dropped from the lower bound's correction term; default is the largest.
/// Report-only: the upper polynomial is known to fail on small instances.
Bounds lehmer_bounds(const LatticeInstance& inst, std::optional<std::size_t> first = std::nullopt);

/// Index of the default `first` coefficient for lehmer_bounds.
std::size_t lehmer_default_first(const LatticeInstance& inst);

/// Two-term asymptotic x^s/(s! prod a) + (sum a / prod a) x^(s-1) / (2 (s-1)!).
double spencer_estimate(const LatticeInstance& inst);

/// True when the coefficients are logs of distinct primes (the estimate's
/// linear-independence hypothesis). Checked to 1e-12 relative.
bool coefficients_are_prime_logs(const LatticeInstance& inst);

/// Lattice instance (log p_1, ..., log p_s; log T).
LatticeInstance log_instance(std::span<const std::uint64_t> primes, double T);

// ---------------------------------------------------------------------------

namespace detail {
bool mul_le(std::uint64_t a, std::uint64_t b, std::uint64_t limit, std::uint64_t& out);
void check_distinct(std::span<const std::uint64_t> primes);
}  // namespace detail

template <typename Visitor>
void for_each_product(std::span<const std::uint64_t> primes, std::uint64_t T, Visitor&& visit) {
  detail::check_distinct(primes);
  if (T == 0) return;
  std::vector<unsigned> exps(primes.size(), 0);
  const std::span<const unsigned> view(exps);
  auto dfs = [&](auto&& self, std::size_t i, std::uint64_t t) -> void {
    if (i == primes.size()) {
      visit(view, t);
      return;
    }
    std::uint64_t cur = t;
    for (unsigned v = 0;; ++v) {
      exps[i] = v;
      self(self, i + 1, cur);
      std::uint64_t next;
      if (!detail::mul_le(cur, primes[i], T, next)) break;
      cur = next;
    }
    exps[i] = 0;
  };
  dfs(dfs, 0, 1);
}

}  // namespace binomcensus::lattice
