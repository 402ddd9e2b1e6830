#include "binomcensus/census.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "binomcensus/errors.hpp"

namespace binomcensus::census {

namespace {

double factorial(std::size_t n) {
  double r = 1.0;
  for (std::size_t i = 2; i <= n; ++i) r *= static_cast<double>(i);
  return r;
}

double log_product(const std::vector<std::uint64_t>& primes) {
  double r = 1.0;
  for (auto p : primes) r *= std::log(static_cast<double>(p));
  return r;
}

std::uint64_t product(const std::vector<std::uint64_t>& primes) {
  std::uint64_t r = 1;
  for (auto p : primes) r = nt::checked_mul(r, p);
  return r;
}

// prod over the primes selected by `mask` of (p-1)/p.
Rational density(const std::vector<std::uint64_t>& primes, std::size_t mask) {
  BigInt num = 1, den = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (mask >> i & 1) {
      num *= primes[i] - 1;
      den *= primes[i];
    }
  }
  return Rational(num, den);
}

void require_estimable(const CensusInput& input) {
  if (input.s() == 0)
    throw DegenerateCase("s=0 degenerate: q-1 has no active primes (q = " + std::to_string(input.q) + ")");
}

double log_T(const CensusInput& input) { return std::log(static_cast<double>(input.T)); }

StratumHalf half_sums(const std::vector<std::uint64_t>& primes, std::uint64_t budget, Rational weight,
                      std::string label) {
  const std::size_t s = primes.size();
  const std::size_t full = (std::size_t{1} << s) - 1;
  const auto tallies = lattice::zero_mask_tallies(primes, budget);
  StratumHalf h;
  h.label = std::move(label);
  h.budget = budget;
  h.weight = weight;
  h.counts = lattice::strata(primes, budget);
  for (std::size_t zeros = 0; zeros < tallies.size(); ++zeros) {
    if (!tallies[zeros]) continue;
    const Rational term = weight * density(primes, full & ~zeros) * BigInt(tallies[zeros]);
    const int nz = std::popcount(zeros);
    if (nz == 0)
      h.A += term;
    else if (nz == 1)
      h.B += term;
    else
      h.C += term;
  }
  return h;
}

}  // namespace

std::string to_string(Congruence c) {
  return c == Congruence::kThreeModFour ? "q = 3 mod 4" : "q != 3 mod 4";
}

CensusInput CensusInput::make(std::uint64_t q, std::uint64_t T) {
  if (!nt::prime_power(q)) throw InvalidInput("q = " + std::to_string(q) + " is not a prime power");
  if (T < 1) throw InvalidInput("T must be at least 1");
  CensusInput in;
  in.q = q;
  in.T = T;
  in.q_minus_1 = nt::factor(q - 1);
  in.congruence = q % 4 == 3 ? Congruence::kThreeModFour : Congruence::kNotThreeModFour;
  for (auto p : in.q_minus_1.primes())
    if (in.congruence == Congruence::kNotThreeModFour || p != 2) in.active_primes.push_back(p);
  if (in.congruence == Congruence::kThreeModFour && in.q_minus_1.exponent_of(2) != 1)
    throw std::logic_error("q = 3 mod 4 must have q-1 = 2*(odd)");
  return in;
}

NqDetail nq_detail(std::uint64_t q, std::uint64_t t) {
  if (!nt::prime_power(q)) throw InvalidInput("q = " + std::to_string(q) + " is not a prime power");
  if (t < 1) throw InvalidInput("t must be at least 1");
  const auto tf = nt::factor(t);
  const std::uint64_t r4 = nt::rad4(tf);
  if ((q - 1) % r4 != 0) return {0, r4, false};
  const auto ratio = nt::phi_over(tf);
  // denominator = rad(t) / gcd, which divides q-1.
  return {(q - 1) / ratio.denominator() * ratio.numerator(), r4, true};
}

std::uint64_t nq(std::uint64_t q, std::uint64_t t) { return nq_detail(q, t).value; }

void enumerate_eligible(const CensusInput& input, const std::function<void(std::uint64_t, std::uint64_t)>& visit) {
  const auto primes = input.q_minus_1.primes();
  const std::size_t s = primes.size();
  const std::uint64_t n = input.q - 1;
  // Only q = 3 mod 4 caps an exponent: 2 may appear at most once.
  std::vector<unsigned> cap(s, std::numeric_limits<unsigned>::max());
  for (std::size_t i = 0; i < s; ++i)
    if (primes[i] == 2 && input.congruence == Congruence::kThreeModFour) cap[i] = 1;

  std::vector<std::uint64_t> value_by_support(std::size_t{1} << s);
  for (std::size_t m = 0; m < value_by_support.size(); ++m) {
    std::uint64_t r = 1, phi = 1;
    for (std::size_t i = 0; i < s; ++i)
      if (m >> i & 1) {
        r *= primes[i];
        phi *= primes[i] - 1;
      }
    value_by_support[m] = n / r * phi;
  }

  auto dfs = [&](auto&& self, std::size_t i, std::uint64_t t, std::size_t support) -> void {
    if (i == s) {
      visit(t, value_by_support[support]);
      return;
    }
    self(self, i + 1, t, support);
    std::uint64_t cur = t;
    for (unsigned v = 1; v <= cap[i]; ++v) {
      if (!lattice::detail::mul_le(cur, primes[i], input.T, cur)) break;
      self(self, i + 1, cur, support | (std::size_t{1} << i));
    }
  };
  dfs(dfs, 0, 1, 0);
}

std::vector<EligibleDegree> eligible_degrees(const CensusInput& input) {
  std::vector<EligibleDegree> out;
  enumerate_eligible(input, [&](std::uint64_t t, std::uint64_t c) { out.push_back({t, c}); });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return out;
}

std::uint64_t eligible_count(const CensusInput& input) {
  std::uint64_t n = 0;
  enumerate_eligible(input, [&](std::uint64_t, std::uint64_t) { ++n; });
  return n;
}

BigInt exact_sum(const CensusInput& input) {
  // Each term is below 2^64 and there are fewer than 2^64 of them.
  unsigned __int128 acc = 0;
  enumerate_eligible(input, [&](std::uint64_t, std::uint64_t c) { acc += c; });
  BigInt total = static_cast<std::uint64_t>(acc >> 64);
  total <<= 64;
  total += static_cast<std::uint64_t>(acc);
  return total;
}

StratumSums stratum_sums(const CensusInput& input) {
  StratumSums out;
  if (input.congruence == Congruence::kNotThreeModFour) {
    out.halves.push_back(half_sums(input.active_primes, input.T, Rational(1), "all t"));
  } else {
    out.halves.push_back(half_sums(input.active_primes, input.T, Rational(1), "odd t"));
    out.halves.push_back(half_sums(input.active_primes, input.T / 2, Rational(1, 2), "doubled t"));
  }
  for (const auto& h : out.halves) {
    out.A += h.A;
    out.B += h.B;
    out.C += h.C;
  }
  return out;
}

ClosedForms lemma31_closed_forms(const CensusInput& input) {
  const std::uint64_t rad_q = nt::rad(input.q_minus_1);
  if (input.T <= rad_q)
    throw PreconditionFailed("closed forms need T > rad(q-1) = " + std::to_string(rad_q));
  const auto& primes = input.active_primes;
  const std::uint64_t R = product(primes);
  const Rational rho = density(primes, (std::size_t{1} << primes.size()) - 1);

  auto one_half = [&](std::uint64_t budget, const Rational& weight) {
    ClosedForms cf;
    cf.rhsA = weight * rho * BigInt(lattice::count_products(primes, budget / R));
    Rational b = 0;
    for (std::size_t j = 0; j < primes.size(); ++j) {
      std::vector<std::uint64_t> others;
      for (std::size_t i = 0; i < primes.size(); ++i)
        if (i != j) others.push_back(primes[i]);
      // floor(budget * p_j / R) without forming the product.
      const std::uint64_t reduced = budget / (R / primes[j]);
      b += Rational(BigInt(primes[j]), BigInt(primes[j] - 1)) * BigInt(lattice::count_products(others, reduced));
    }
    cf.rhsB = weight * rho * b;
    return cf;
  };

  ClosedForms out = one_half(input.T, Rational(1));
  if (input.congruence == Congruence::kThreeModFour) {
    const auto doubled = one_half(input.T / 2, Rational(1, 2));
    out.rhsA += doubled.rhsA;
    out.rhsB += doubled.rhsB;
  }
  return out;
}

double asymptotic_estimate(const CensusInput& input) {
  require_estimable(input);
  const std::size_t s = input.s();
  const double phi = static_cast<double>(nt::euler_phi(input.q_minus_1));
  const bool case2 = input.congruence == Congruence::kThreeModFour;
  const double lead = (case2 ? 3.0 : 2.0) * phi / (2.0 * factorial(s) * log_product(input.active_primes));
  double correction = 0.0;
  for (auto p : input.active_primes) {
    const double pd = static_cast<double>(p);
    correction += (pd + 1.0) * std::log(pd) / (pd - 1.0);
  }
  if (case2) correction -= std::log(4.0) / 3.0;
  const double L = log_T(input);
  const double sd = static_cast<double>(s);
  return lead * (std::pow(L, sd) + 0.5 * sd * correction * std::pow(L, sd - 1.0));
}

double corollary_limit(const CensusInput& input) {
  return input.congruence == Congruence::kThreeModFour ? 1.5 : 1.0;
}

double corollary_ratio(const CensusInput& input, const BigInt& exact) {
  require_estimable(input);
  if (input.T < 2) throw PreconditionFailed("normalized ratio needs T >= 2");
  const std::size_t s = input.s();
  const double norm = factorial(s) * log_product(input.active_primes) /
                      static_cast<double>(nt::euler_phi(input.q_minus_1));
  return norm * to_double(exact) / std::pow(log_T(input), static_cast<double>(s));
}

double corollary_ratio(const CensusInput& input) { return corollary_ratio(input, exact_sum(input)); }

Theorem6 theorem6_bound(const CensusInput& input) {
  if (input.congruence == Congruence::kThreeModFour) throw PreconditionFailed("small-T bound needs q != 3 mod 4");
  const std::size_t s = input.s();
  if (s < 2) throw PreconditionFailed("small-T bound needs s >= 2 (s = " + std::to_string(s) + ")");
  const std::uint64_t rad_q = nt::rad(input.q_minus_1);
  if (input.T <= rad_q) throw PreconditionFailed("small-T bound needs T > rad(q-1) = " + std::to_string(rad_q));

  const double sd = static_cast<double>(s);
  const double L = log_T(input);
  const double rad_d = static_cast<double>(rad_q);
  const double phi = static_cast<double>(nt::euler_phi(input.q_minus_1));
  const double qm1 = static_cast<double>(input.q - 1);

  Theorem6 out;
  out.R = std::log(rad_d) / L;
  out.M1 = std::pow(rad_d, -(sd - 1.0) / (2.0 * L)) * (1.0 + std::log(2.0 * sd) / sd) - 0.5;
  out.M2 = qm1 * (sd - 1.0) / (2.0 * sd * phi) * std::pow(rad_d, (sd - 2.0) / (2.0 * L)) + 0.125;
  const double main = phi / (factorial(s) * log_product(input.active_primes)) * std::pow(L, sd);
  out.bound = main * (1.0 + sd * out.M1 * out.R + sd * (sd - 1.0) * out.M2 * out.R * out.R);
  return out;
}

NaiveBounds naive_bounds(const CensusInput& input) {
  NaiveBounds nb;
  nb.eligible = eligible_count(input);
  nb.lower = BigInt(nt::euler_phi(input.q_minus_1)) * nb.eligible;
  nb.upper = BigInt(input.q - 1) * nb.eligible;
  return nb;
}

HeShBound hesh_bound(std::uint64_t q, std::uint64_t T, double A, double eps) {
  if (T < 3) throw PreconditionFailed("HeSh bound needs T >= 3");
  if (q < 5) throw PreconditionFailed("HeSh bound needs q >= 5");
  if (!(A > 0.0) || !(eps > 0.0)) throw InvalidInput("HeSh bound needs A > 0 and eps > 0");

  HeShBound out;
  const double L = std::log(static_cast<double>(T));
  out.bound = static_cast<double>(q - 1) * static_cast<double>(T) / std::pow(L, A);
  out.valid = false;
  out.log_threshold = std::numeric_limits<double>::quiet_NaN();

  // log_k q = k-fold iterated log; every argument must exceed 1.
  double arg = static_cast<double>(q);
  double iterated[5] = {arg, 0, 0, 0, 0};
  for (int k = 1; k <= 4; ++k) {
    if (arg <= 1.0) {
      out.reason = "iterated log log_" + std::to_string(k) + " q undefined (argument " + std::to_string(arg) +
                   " <= 1)";
      return out;
    }
    arg = std::log(arg);
    iterated[k] = arg;
  }
  const double log_qm1 = std::log(static_cast<double>(q - 1));
  if (log_qm1 <= 0.0) {
    out.reason = "log(q-1) <= 0";
    return out;
  }
  const double exponent = (1.0 + eps) * A * iterated[3] / iterated[4];
  out.log_threshold = exponent * std::log(log_qm1);
  out.valid = L >= out.log_threshold;
  if (!out.valid) out.reason = "T below validity threshold";
  return out;
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }
double to_double(const Rational& v) { return v.convert_to<double>(); }

BoundReport bound_report(const CensusInput& input, const BigInt& exact, const ReportOptions& options) {
  BoundReport br;
  br.naive = naive_bounds(input);
  const double exact_d = to_double(exact);

  br.margins.push_back({"naive_lower", BoundSide::kLower, to_double(br.naive.lower), exact_d,
                        to_double(br.naive.lower) - exact_d, br.naive.lower <= exact, true});
  br.margins.push_back({"naive_upper", BoundSide::kUpper, to_double(br.naive.upper), exact_d,
                        to_double(br.naive.upper) - exact_d, exact <= br.naive.upper, true});

  br.lattice_count = lattice::count_products(input.active_primes, input.T);
  if (input.s() >= 1 && input.T >= 2) {
    const auto inst = lattice::log_instance(input.active_primes, static_cast<double>(input.T));
    const double count = static_cast<double>(br.lattice_count);
    const auto triv = lattice::trivial_bounds(inst);
    br.margins.push_back({"trivial_lower", BoundSide::kLower, triv.lower, count, triv.lower - count,
                          triv.lower < count, true});
    br.margins.push_back({"trivial_upper", BoundSide::kUpper, triv.upper, count, triv.upper - count,
                          triv.upper > count, true});
    br.lehmer = lattice::lehmer_bounds(inst);
    br.margins.push_back({"lehmer_lower", BoundSide::kLower, br.lehmer->lower, count, br.lehmer->lower - count,
                          br.lehmer->lower < count, false});
    br.margins.push_back({"lehmer_upper", BoundSide::kUpper, br.lehmer->upper, count, br.lehmer->upper - count,
                          br.lehmer->upper > count, false});
  }

  try {
    br.theorem6 = theorem6_bound(input);
    br.margins.push_back({"theorem6_upper", BoundSide::kUpper, br.theorem6->bound, exact_d,
                          br.theorem6->bound - exact_d, br.theorem6->bound >= exact_d, false});
  } catch (const PreconditionFailed& e) {
    br.theorem6_skipped = e.what();
  }

  try {
    br.hesh = hesh_bound(input.q, input.T, options.hesh_A, options.hesh_eps);
    br.margins.push_back({"hesh_upper", BoundSide::kUpper, br.hesh->bound, exact_d, br.hesh->bound - exact_d,
                          br.hesh->bound >= exact_d, false});
  } catch (const PreconditionFailed& e) {
    br.hesh_skipped = e.what();
  }
  return br;
}

CensusReport build_report(const CensusInput& input, const ReportOptions& options) {
  CensusReport r;
  r.input = input;
  r.exact_sum = exact_sum(input);
  if (options.strata) {
    r.strata = stratum_sums(input);
    try {
      r.closed_forms = lemma31_closed_forms(input);
    } catch (const PreconditionFailed& e) {
      r.closed_forms_skipped = e.what();
    }
  }
  if (options.asymptotic) {
    try {
      r.asymptotic = asymptotic_estimate(input);
      r.ratio = corollary_ratio(input, r.exact_sum);
      r.limit = corollary_limit(input);
    } catch (const std::domain_error& e) {
      r.estimator_error = e.what();
    }
  }
  if (options.bounds) r.bounds = bound_report(input, r.exact_sum, options);
  return r;
}

}  // namespace binomcensus::census
