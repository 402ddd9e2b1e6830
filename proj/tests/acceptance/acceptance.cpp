// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is non-zero when any criterion fails.

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "binomcensus/census.hpp"
#include "binomcensus/errors.hpp"
#include "binomcensus/ff.hpp"
#include "binomcensus/lattice.hpp"

using namespace binomcensus;
using census::CensusInput;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

ff::FieldCtx field(std::uint64_t q) {
  const auto pp = nt::prime_power(q).value();
  return ff::build_field(pp.prime, pp.exponent);
}

constexpr std::uint64_t k1e3 = 1000, k1e6 = 1000000, k1e9 = 1000000000, k1e12 = 1000000000000;

Verdict oracle_census() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  int fields = 0;
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49}) {
    const auto ctx = field(q);
    std::uint64_t oracle = 0;
    for (std::uint64_t t = 1; t <= 200; ++t) oracle += ff::oracle_binomial_count(ctx, t);
    const auto formula = census::exact_sum(CensusInput::make(q, 200));
    if (formula != oracle) {
      std::ostringstream os;
      os << "q=" << q << " oracle " << oracle << " formula " << formula;
      v.fail(os.str());
    }
    ++fields;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 600) v.fail("took " + std::to_string(secs) + " s");
  if (v.pass) v.detail << fields << " fields, T=200, " << secs << " s";
  return v;
}

Verdict criterion_triangle() {
  Verdict v;
  std::uint64_t checked = 0, mismatches = 0;
  for (std::uint64_t q = 2; q <= 64; ++q) {
    if (!nt::prime_power(q)) continue;
    const auto ctx = field(q);
    for (ff::Elem a = 1; a < q; ++a) {
      const auto ord = ff::multiplicative_order(ctx, a).order;
      for (std::uint64_t t = 2; t <= 100; ++t) {
        const bool crit = ff::criterion_irreducible(ctx.unit_group_order(), t, ord);
        const bool rabin = ff::rabin_irreducible(ctx, ff::poly::binomial(ctx, t, a));
        ++checked;
        if (crit != rabin) {
          ++mismatches;
          std::ostringstream os;
          os << "q=" << q << " t=" << t << " a=" << a << " criterion " << crit << " rabin " << rabin;
          v.fail(os.str());
        }
      }
    }
  }
  if (v.pass) v.detail << checked << " binomials, 0 mismatches";
  else v.detail << " (" << mismatches << " mismatches)";
  return v;
}

Verdict exact_identities() {
  Verdict v;
  int instances = 0;
  for (std::uint64_t q : {13, 31, 61})
    for (std::uint64_t T : {k1e3, k1e6, k1e9}) {
      const auto in = CensusInput::make(q, T);
      const auto tag = "q=" + std::to_string(q) + " T=" + std::to_string(T) + ": ";
      const auto st = census::stratum_sums(in);
      if (Rational(census::exact_sum(in)) != Rational(q - 1) * (st.A + st.B + st.C)) v.fail(tag + "sum identity");
      const auto cf = census::lemma31_closed_forms(in);
      if (cf.rhsA != st.A) v.fail(tag + "A closed form");
      if (cf.rhsB != st.B) v.fail(tag + "B closed form");
      for (const auto& h : st.halves) {
        if (!h.counts.partition_holds()) v.fail(tag + "partition (" + h.label + ")");
        if (!lattice::shift_identity_check(in.active_primes, h.budget)) v.fail(tag + "shift identity (" + h.label + ")");
      }
      ++instances;
    }
  if (v.pass) v.detail << instances << " instances exact";
  return v;
}

Verdict trivial_and_naive() {
  Verdict v;
  const std::uint64_t qs[] = {4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 25, 29, 31, 37, 41, 49, 61, 64, 211, 2311};
  // No T is a power of a lone active prime: with s = 1 and lambda/a an integer
  // the shifted volume equals the count exactly.
  const std::uint64_t Ts[] = {7777777, 10, 100, 1000, 12345, k1e6, 99999999, k1e9, 123456789012, k1e12};
  int lattice_instances = 0, census_instances = 0;
  for (auto q : qs)
    for (auto T : Ts) {
      const auto in = CensusInput::make(q, T);
      const auto tag = "q=" + std::to_string(q) + " T=" + std::to_string(T) + ": ";
      const auto inst = lattice::log_instance(in.active_primes, static_cast<double>(T));
      const auto count = static_cast<double>(lattice::count_products(in.active_primes, T));
      const auto b = lattice::trivial_bounds(inst);
      // Strict to 15 significant digits.
      auto below = [](double x, double y) { return x < y && (y - x) > 1e-15 * std::max(std::abs(x), std::abs(y)); };
      if (!below(b.lower, count)) v.fail(tag + "lower " + std::to_string(b.lower) + " >= " + std::to_string(count));
      if (!below(count, b.upper)) v.fail(tag + "upper " + std::to_string(b.upper) + " <= " + std::to_string(count));
      ++lattice_instances;
      const auto nb = census::naive_bounds(in);
      const auto exact = census::exact_sum(in);
      if (!(nb.lower <= exact && exact <= nb.upper)) v.fail(tag + "naive bounds");
      ++census_instances;
    }
  if (v.pass) v.detail << lattice_instances << " lattice and " << census_instances << " census instances";
  return v;
}

Verdict micro_censuses() {
  Verdict v;
  auto oracle_sum = [](std::uint64_t q, std::uint64_t T) {
    const auto ctx = field(q);
    std::uint64_t s = 0;
    for (std::uint64_t t = 1; t <= T; ++t) s += ff::oracle_binomial_count(ctx, t);
    return s;
  };
  auto expect = [&](std::uint64_t q, std::uint64_t T, std::uint64_t value, bool oracle) {
    const auto got = census::exact_sum(CensusInput::make(q, T));
    if (got != value) v.fail("exact_sum(" + std::to_string(q) + "," + std::to_string(T) + ") = " + got.str());
    if (oracle && oracle_sum(q, T) != value) v.fail("oracle disagrees at q=" + std::to_string(q));
  };
  expect(4, 10, 7, true);
  expect(3, 10, 3, true);
  expect(13, 6, 36, true);
  expect(2, 200, 1, true);
  for (std::uint64_t T : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{3}, k1e3, k1e6, k1e12, ~std::uint64_t{0}}) expect(2, T, 1, false);
  const auto st = census::stratum_sums(CensusInput::make(13, 6));
  if (st.A != Rational(1, 3) || st.B != Rational(5, 3) || st.C != Rational(1)) v.fail("q=13 T=6 strata");
  if (v.pass) v.detail << "all fixtures match and the oracle agrees";
  return v;
}

Verdict convergence() {
  Verdict v;
  for (std::uint64_t q : {4, 5, 13, 7, 11}) {
    const auto lo = CensusInput::make(q, k1e3);
    const auto hi = CensusInput::make(q, k1e12);
    const double limit = census::corollary_limit(lo);
    const double d_lo = std::abs(census::corollary_ratio(lo) - limit);
    const double d_hi = std::abs(census::corollary_ratio(hi) - limit);
    auto rel = [](const CensusInput& in) {
      const double e = census::to_double(census::exact_sum(in));
      return std::abs(census::asymptotic_estimate(in) - e) / e;
    };
    const double r_lo = rel(lo), r_hi = rel(hi);
    std::printf("  q=%-3llu ratio distance %.6g -> %.6g   relative error %.6g -> %.6g\n",
                static_cast<unsigned long long>(q), d_lo, d_hi, r_lo, r_hi);
    if (!(d_hi < d_lo)) v.fail("q=" + std::to_string(q) + " ratio distance did not shrink; ");
    if (!(r_hi < r_lo)) v.fail("q=" + std::to_string(q) + " relative error did not shrink");
  }
  if (v.pass) v.detail << "both quantities shrink for q = 4, 5, 13, 7, 11";
  return v;
}

Verdict margin_report() {
  Verdict v;
  int rows = 0, violations = 0;
  for (std::uint64_t q : {13, 25, 29, 37})
    for (std::uint64_t T : {std::uint64_t{100}, std::uint64_t{10000}, k1e6}) {
      const auto in = CensusInput::make(q, T);
      const auto exact = census::exact_sum(in);
      const auto rep = census::bound_report(in, exact, {.bounds = true});
      bool have_t6 = false, have_lehmer = false;
      for (const auto& m : rep.margins) {
        if (m.name == "theorem6_upper") have_t6 = true;
        if (m.name.rfind("lehmer_", 0) == 0) have_lehmer = true;
        if (m.name != "theorem6_upper" && m.name.rfind("lehmer_", 0) != 0) continue;
        if (!std::isfinite(m.margin) || m.margin != m.bound - m.reference)
          v.fail("inconsistent margin " + m.name + " at q=" + std::to_string(q) + " T=" + std::to_string(T));
        if (!m.holds) {
          ++violations;
          std::printf("  violation: %s q=%llu T=%llu s=%zu bound=%.17g reference=%.17g margin=%.17g\n",
                      m.name.c_str(), static_cast<unsigned long long>(q), static_cast<unsigned long long>(T),
                      in.s(), m.bound, m.reference, m.margin);
        }
      }
      if (!have_t6 || !have_lehmer) v.fail("missing margins at q=" + std::to_string(q) + " T=" + std::to_string(T));
      ++rows;
    }
  if (v.pass) v.detail << rows << " instances reported, " << violations << " report-only violations logged";
  return v;
}

Verdict spencer() {
  Verdict v;
  const std::vector<std::uint64_t> primes{2, 3};
  double errs[2];
  int i = 0;
  for (std::uint64_t T : {k1e3, k1e6}) {
    const lattice::LatticeInstance inst{{std::log(2.0), std::log(3.0)}, std::log(static_cast<double>(T))};
    const double exact = static_cast<double>(lattice::count_products(primes, T));
    errs[i++] = std::abs(lattice::spencer_estimate(inst) - exact) / exact;
  }
  v.detail << "relative error " << errs[0] << " -> " << errs[1];
  if (!(errs[1] < errs[0])) v.fail("");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"oracle census equality", oracle_census},
      {"criterion vs Rabin triangle", criterion_triangle},
      {"exact stratum identities", exact_identities},
      {"trivial and naive bounds", trivial_and_naive},
      {"worked micro-censuses", micro_censuses},
      {"convergence trends", convergence},
      {"bound margin report", margin_report},
      {"two-term lattice estimate", spencer},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %-30s %s  (%.2fs) %s\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL", secs,
                v.detail.str().c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
