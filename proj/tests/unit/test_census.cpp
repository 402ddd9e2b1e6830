#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "binomcensus/census.hpp"
#include "binomcensus/errors.hpp"
#include "binomcensus/ff.hpp"

using namespace binomcensus;
using census::CensusInput;

namespace {

// Smallest-prime-factor sieve; gives phi(t) and rad4(t) without the library.
struct Sieve {
  std::vector<std::uint32_t> spf;
  explicit Sieve(std::uint32_t n) : spf(n + 1, 0) {
    for (std::uint32_t i = 2; i <= n; ++i)
      if (spf[i] == 0)
        for (std::uint32_t j = i; j <= n; j += i)
          if (spf[j] == 0) spf[j] = i;
  }
  // (phi, rad4)
  std::pair<std::uint64_t, std::uint64_t> phi_rad4(std::uint32_t t) const {
    std::uint64_t phi = t, rad = 1;
    while (t > 1) {
      const std::uint32_t p = spf[t];
      phi = phi / p * (p - 1);
      rad *= p;
      while (t % p == 0) t /= p;
    }
    return {phi, rad};
  }
};

const Sieve& sieve() {
  static const Sieve s(1000000);
  return s;
}

// Sum over t <= T of (q-1) phi(t)/t for t with rad4(t) | q-1.
std::uint64_t brute_sum(std::uint64_t q, std::uint32_t T) {
  std::uint64_t total = 0;
  for (std::uint32_t t = 1; t <= T; ++t) {
    auto [phi, rad] = sieve().phi_rad4(t);
    if (t % 4 == 0) rad *= 2;
    if ((q - 1) % rad != 0) continue;
    REQUIRE((q - 1) * phi % t == 0);
    total += (q - 1) * phi / t;
  }
  return total;
}

std::uint64_t brute_eligible(std::uint64_t q, std::uint32_t T) {
  std::uint64_t c = 0;
  for (std::uint32_t t = 1; t <= T; ++t) {
    auto rad = sieve().phi_rad4(t).second;
    if (t % 4 == 0) rad *= 2;
    if ((q - 1) % rad == 0) ++c;
  }
  return c;
}

BigInt sum_of(std::uint64_t q, std::uint64_t T) { return census::exact_sum(CensusInput::make(q, T)); }

double rel_err(std::uint64_t q, std::uint64_t T) {
  const auto in = CensusInput::make(q, T);
  const double exact = census::to_double(census::exact_sum(in));
  return std::abs(census::asymptotic_estimate(in) - exact) / exact;
}

constexpr std::uint64_t kQs[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 25, 27, 29, 31, 37, 61, 64, 81, 121, 125, 211, 1024};

}  // namespace

TEST_SUITE("census") {

TEST_CASE("nq on small examples") {
  CHECK(census::nq(7, 2) == 3);
  CHECK(census::nq(7, 3) == 4);
  CHECK(census::nq(7, 4) == 0);
  CHECK(census::nq(5, 4) == 2);
  CHECK(census::nq(13, 1) == 12);
  CHECK(census::nq_detail(7, 4).rad4_t == 4);
  CHECK_FALSE(census::nq_detail(7, 4).eligible);
  CHECK_THROWS_AS(census::nq(6, 2), InvalidInput);
  CHECK_THROWS_AS(census::nq(7, 0), InvalidInput);
}

TEST_CASE("nq matches the field oracle") {
  for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 8ull, 9ull, 13ull, 16ull, 25ull}) {
    const auto pp = nt::prime_power(q).value();
    const auto ctx = ff::build_field(pp.prime, pp.exponent);
    for (std::uint64_t t = 1; t <= 60; ++t) CHECK_MESSAGE(census::nq(q, t) == ff::oracle_binomial_count(ctx, t), q << " " << t);
  }
}

TEST_CASE("congruence split") {
  const auto a = CensusInput::make(7, 100);
  CHECK(a.congruence == census::Congruence::kThreeModFour);
  CHECK(a.active_primes == std::vector<std::uint64_t>{3});
  const auto b = CensusInput::make(13, 100);
  CHECK(b.congruence == census::Congruence::kNotThreeModFour);
  CHECK(b.active_primes == std::vector<std::uint64_t>{2, 3});
  CHECK(census::to_string(a.congruence) == "q = 3 mod 4");
  CHECK_THROWS_AS(CensusInput::make(10, 5), InvalidInput);
  CHECK_THROWS_AS(CensusInput::make(7, 0), InvalidInput);
}

TEST_CASE("exact sums against brute-force eligibility") {
  for (auto q : kQs)
    for (std::uint32_t T : {1u, 2u, 3u, 10u, 97u, 1000u, 65536u, 1000000u}) {
      const auto in = CensusInput::make(q, T);
      CHECK_MESSAGE(census::exact_sum(in) == brute_sum(q, T), "q=" << q << " T=" << T);
      CHECK(census::eligible_count(in) == brute_eligible(q, T));
    }
}

TEST_CASE("eligible degrees are sorted, unique and skip 4 | t when q = 3 mod 4") {
  const auto degs = census::eligible_degrees(CensusInput::make(31, 5000));
  for (std::size_t i = 1; i < degs.size(); ++i) CHECK(degs[i - 1].t < degs[i].t);
  for (const auto& d : degs) {
    CHECK(d.t % 4 != 0);
    CHECK(d.count == census::nq(31, d.t));
  }
}

TEST_CASE("worked micro-censuses") {
  CHECK(sum_of(4, 10) == 7);
  CHECK(sum_of(3, 10) == 3);
  for (std::uint64_t T : {1ull, 2ull, 10ull, 1000000ull, 1000000000000ull}) CHECK(sum_of(2, T) == 1);

  const auto in = CensusInput::make(13, 6);
  const auto st = census::stratum_sums(in);
  CHECK(st.A == Rational(1, 3));
  CHECK(st.B == Rational(5, 3));
  CHECK(st.C == Rational(1));
  CHECK(census::exact_sum(in) == 36);
}

TEST_CASE("stratum sums reproduce the census") {
  for (auto q : {5ull, 7ull, 11ull, 13ull, 19ull, 31ull, 61ull, 64ull, 211ull})
    for (std::uint64_t T : {6ull, 100ull, 12345ull, 1000000000ull, 1000000000000ull}) {
      const auto in = CensusInput::make(q, T);
      const auto st = census::stratum_sums(in);
      CHECK(Rational(census::exact_sum(in)) == Rational(q - 1) * (st.A + st.B + st.C));
      for (const auto& h : st.halves) CHECK(h.counts.partition_holds());
      if (T > nt::rad(in.q_minus_1)) {
        const auto cf = census::lemma31_closed_forms(in);
        CHECK(cf.rhsA == st.A);
        CHECK(cf.rhsB == st.B);
      } else {
        CHECK_THROWS_AS(census::lemma31_closed_forms(in), PreconditionFailed);
      }
    }
}

TEST_CASE("large-T sums") {
  // Values cross-checked against the sieve at 10^3 and 10^6 above.
  CHECK(sum_of(13, 1000000000ull) == 1362);
  CHECK(sum_of(13, 1000000000000ull) == 2322);
  CHECK(sum_of(61, 1000000000000ull) == 64106);
  CHECK(sum_of(7, 1000000000000ull) == 157);
  CHECK(sum_of(4, 1000000000000ull) == 53);
}

TEST_CASE("asymptotic endpoints improve from 10^3 to 10^12") {
  for (std::uint64_t q : {4ull, 5ull, 13ull, 7ull}) CHECK_MESSAGE(rel_err(q, 1000000000000ull) < rel_err(q, 1000ull), q);
  for (std::uint64_t q : {4ull, 5ull, 13ull, 7ull, 11ull}) {
    const auto lo = CensusInput::make(q, 1000);
    const auto hi = CensusInput::make(q, 1000000000000ull);
    CHECK(std::abs(census::corollary_ratio(hi) - census::corollary_limit(hi)) <
          std::abs(census::corollary_ratio(lo) - census::corollary_limit(lo)));
  }
  CHECK(census::corollary_limit(CensusInput::make(7, 10)) == 1.5);
  CHECK(census::corollary_limit(CensusInput::make(13, 10)) == 1.0);
  CHECK_THROWS_AS(census::asymptotic_estimate(CensusInput::make(3, 100)), DegenerateCase);
  CHECK_THROWS_AS(census::corollary_ratio(CensusInput::make(13, 1)), PreconditionFailed);
}

TEST_CASE("small-T bound preconditions and margins") {
  CHECK_THROWS_AS(census::theorem6_bound(CensusInput::make(7, 1000)), PreconditionFailed);
  CHECK_THROWS_AS(census::theorem6_bound(CensusInput::make(5, 1000)), PreconditionFailed);
  CHECK_THROWS_AS(census::theorem6_bound(CensusInput::make(13, 6)), PreconditionFailed);
  const auto in = CensusInput::make(13, 1000);
  const auto t6 = census::theorem6_bound(in);
  CHECK(std::isfinite(t6.bound));
  CHECK(t6.R == doctest::Approx(std::log(6.0) / std::log(1000.0)));

  const auto exact = census::exact_sum(in);
  const auto rep = census::bound_report(in, exact, {.bounds = true});
  CHECK(rep.theorem6.has_value());
  CHECK(rep.naive.lower <= exact);
  CHECK(exact <= rep.naive.upper);
  for (const auto& m : rep.margins) {
    CHECK(m.margin == doctest::Approx(m.bound - m.reference));
    if (m.asserted) CHECK_MESSAGE(m.holds, m.name);
  }
}

TEST_CASE("naive bounds bracket the census") {
  for (auto q : kQs)
    for (std::uint64_t T : {1ull, 50ull, 100000ull, 1000000000000ull}) {
      const auto in = CensusInput::make(q, T);
      const auto nb = census::naive_bounds(in);
      const auto e = census::exact_sum(in);
      CHECK(nb.eligible == census::eligible_count(in));
      CHECK(nb.lower <= e);
      CHECK(e <= nb.upper);
    }
}

TEST_CASE("hesh bound validity") {
  CHECK_THROWS_AS(census::hesh_bound(3, 100, 1.0, 0.5), PreconditionFailed);
  CHECK_THROWS_AS(census::hesh_bound(13, 2, 1.0, 0.5), PreconditionFailed);
  const auto small = census::hesh_bound(13, 1000, 1.0, 0.5);
  CHECK(small.bound == doctest::Approx(12.0 * 1000 / std::log(1000.0)));
  CHECK_FALSE(small.valid);
  CHECK_FALSE(small.reason.empty());
}

}
