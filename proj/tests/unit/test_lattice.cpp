#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "binomcensus/errors.hpp"
#include "binomcensus/lattice.hpp"

using namespace binomcensus;

namespace {

// t <= T whose prime factors all lie in `primes`, each t one lattice point.
std::uint64_t smooth_count(const std::vector<std::uint64_t>& primes, std::uint64_t T) {
  std::uint64_t c = 0;
  for (std::uint64_t t = 1; t <= T; ++t) {
    std::uint64_t r = t;
    for (auto p : primes)
      while (r % p == 0) r /= p;
    if (r == 1) ++c;
  }
  return c;
}

// Nested loops over a box; fine for s <= 3 and small lambda/a.
std::uint64_t box_count(const std::vector<double>& a, double lambda) {
  std::uint64_t c = 0;
  const int n0 = static_cast<int>(lambda / a[0]) + 1;
  const int n1 = a.size() > 1 ? static_cast<int>(lambda / a[1]) + 1 : 0;
  const int n2 = a.size() > 2 ? static_cast<int>(lambda / a[2]) + 1 : 0;
  for (int x = 0; x <= n0; ++x)
    for (int y = 0; y <= n1; ++y)
      for (int z = 0; z <= n2; ++z) {
        double s = a[0] * x;
        if (a.size() > 1) s += a[1] * y;
        if (a.size() > 2) s += a[2] * z;
        if (s <= lambda * (1 + 1e-12)) ++c;
      }
  return c;
}

const std::vector<std::vector<std::uint64_t>> kPrimeSets = {
    {2}, {3}, {2, 3}, {2, 5}, {3, 5}, {2, 3, 5}, {2, 3, 7}, {3, 5, 7, 11}, {2, 3, 5, 7, 11, 13}};

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("count_products matches a smooth-number sieve") {
  for (const auto& ps : kPrimeSets)
    for (std::uint64_t T : {0ull, 1ull, 2ull, 7ull, 100ull, 4096ull, 30030ull, 100000ull})
      CHECK_MESSAGE(lattice::count_products(ps, T) == (T == 0 ? 0 : smooth_count(ps, T)), "T=" << T);
}

TEST_CASE("count_products survives the top of the 64-bit range") {
  const std::vector<std::uint64_t> two{2};
  CHECK(lattice::count_products(two, ~0ull) == 64);
  const std::vector<std::uint64_t> big{4294967291ull, 4294967279ull};
  CHECK(lattice::count_products(big, ~0ull) == 6);  // 1, p, q, p^2, pq, q^2
  CHECK_THROWS_AS(lattice::count_products(std::vector<std::uint64_t>{3, 3}, 10), InvalidInput);
}

TEST_CASE("for_each_product visits each point once with its product") {
  const std::vector<std::uint64_t> ps{2, 3, 5};
  std::vector<int> seen(1001, 0);
  lattice::for_each_product(ps, 1000, [&](std::span<const unsigned> v, std::uint64_t t) {
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (unsigned k = 0; k < v[i]; ++k) prod *= ps[i];
    CHECK(prod == t);
    ++seen[t];
  });
  for (std::uint64_t t = 1; t <= 1000; ++t) CHECK(seen[t] == static_cast<int>(smooth_count(ps, t) - smooth_count(ps, t - 1)));
}

TEST_CASE("capped counts") {
  const std::vector<std::uint64_t> ps{2, 3};
  const std::vector<std::optional<unsigned>> caps{1u, std::nullopt};
  // t in {3^k, 2*3^k} <= 100
  CHECK(lattice::count_products_capped(ps, caps, 100) == 5 + 4);
}

TEST_CASE("real path matches integer path on log instances") {
  for (const auto& ps : kPrimeSets)
    for (std::uint64_t T : {1ull, 10ull, 1000ull, 1000000ull}) {
      const auto inst = lattice::log_instance(ps, static_cast<double>(T));
      CHECK(lattice::count_real(inst) == lattice::count_products(ps, T));
      CHECK(lattice::coefficients_are_prime_logs(inst));
    }
  CHECK_FALSE(lattice::coefficients_are_prime_logs({{1.0, 2.0}, 3.0}));
}

TEST_CASE("real path matches nested loops") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coeff(0.3, 3.0), lam(0.0, 12.0);
  for (int i = 0; i < 200; ++i) {
    const std::size_t s = 1 + i % 3;
    lattice::LatticeInstance inst;
    for (std::size_t k = 0; k < s; ++k) inst.coeffs.push_back(coeff(rng));
    inst.lambda = lam(rng);
    CHECK(lattice::count_real(inst) == box_count(inst.coeffs, inst.lambda));
  }
  // Points exactly on the hyperplane count.
  CHECK(lattice::count_real({{1.0, 1.0}, 2.0}) == 6);
  CHECK(lattice::count_real({{0.1, 0.2}, 0.3}) == 6);
}

TEST_CASE("strata partition and tallies") {
  for (const auto& ps : kPrimeSets)
    for (std::uint64_t T : {1ull, 30ull, 1000ull, 123456ull}) {
      const auto st = lattice::strata(ps, T);
      CHECK(st.partition_holds());
      CHECK(st.total == lattice::count_products(ps, T));
      const auto tallies = lattice::zero_mask_tallies(ps, T);
      std::uint64_t sum = 0;
      for (auto x : tallies) sum += x;
      CHECK(sum == st.total);
      CHECK(tallies[0] == st.plus);
      for (std::size_t j = 0; j < ps.size(); ++j)
        if (ps.size() > 1) CHECK(tallies[std::size_t{1} << j] == st.boundary[j]);
      CHECK(lattice::shift_identity_check(ps, T));
      CHECK(lattice::boundary_reduction_check(ps, T));
    }
}

TEST_CASE("trivial bounds are strict on random instances") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coeff(0.2, 4.0), lam(0.5, 25.0);
  for (int i = 0; i < 300; ++i) {
    lattice::LatticeInstance inst;
    for (std::size_t k = 0; k < 1 + static_cast<std::size_t>(i % 4); ++k) inst.coeffs.push_back(coeff(rng));
    inst.lambda = lam(rng);
    const auto b = lattice::trivial_bounds(inst);
    const auto n = static_cast<double>(lattice::count_real(inst));
    CHECK(b.lower < n);
    CHECK(n < b.upper);
  }
  CHECK_THROWS(lattice::trivial_bounds({{}, 1.0}));
}

TEST_CASE("shifted volume is attained in one dimension on exact multiples") {
  // floor(lambda/a) + 1 == (lambda + a)/a when a divides lambda.
  const auto b = lattice::trivial_bounds({{2.0}, 8.0});
  CHECK(lattice::count_real({{2.0}, 8.0}) == 5);
  CHECK(b.upper == 5.0);
  const auto c = lattice::trivial_bounds({{2.0}, 7.0});
  CHECK(c.lower == 3.5);
  CHECK(c.upper == 4.5);
}

TEST_CASE("lehmer default drops the largest coefficient") {
  const lattice::LatticeInstance inst{{1.0, 3.0, 2.0}, 10.0};
  CHECK(lattice::lehmer_default_first(inst) == 1);
  const auto def = lattice::lehmer_bounds(inst);
  const auto explicit_first = lattice::lehmer_bounds(inst, 1);
  CHECK(def.lower == explicit_first.lower);
  CHECK(def.upper == explicit_first.upper);
  CHECK(std::isfinite(lattice::lehmer_bounds(inst, 0).lower));
}

TEST_CASE("spencer estimate in one dimension") {
  // x/a + 1/2 is the two-term estimate of floor(x/a) + 1.
  const lattice::LatticeInstance inst{{2.0}, 11.0};
  CHECK(lattice::spencer_estimate(inst) == doctest::Approx(6.0));
}

}
