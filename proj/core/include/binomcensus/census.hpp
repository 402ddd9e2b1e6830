#pragma once

// Exact counts of irreducible binomials x^t - a over F_q summed over t <= T,
// their decomposition over lattice strata, and the asymptotic and
// small-T bounds they are compared against.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "binomcensus/lattice.hpp"
#include "binomcensus/nt.hpp"

namespace binomcensus::census {

enum class Congruence {
  kNotThreeModFour,  // q != 3 mod 4: every prime of q-1 is active
  kThreeModFour,     // q = 3 mod 4: q-1 = 2*(odd); only the odd primes are active
};

std::string to_string(Congruence c);

struct CensusInput {
  std::uint64_t q = 2;
  nt::Factorization q_minus_1;
  std::uint64_t T = 1;
  Congruence congruence = Congruence::kNotThreeModFour;
  /// Primes p_1..p_s indexing the main term: all primes of q-1, or its odd
  /// primes when q = 3 mod 4.
  std::vector<std::uint64_t> active_primes;

  std::size_t s() const { return active_primes.size(); }

  /// Validates q as a prime power and T >= 1.
  static CensusInput make(std::uint64_t q, std::uint64_t T);
};

struct NqDetail {
  std::uint64_t value;
  std::uint64_t rad4_t;
  bool eligible;  // rad4(t) | q-1
};

/// N_q(t) = (q-1) phi(t)/t when rad4(t) | q-1, else 0. Throws InvalidInput
/// unless q is a prime power and t >= 1.
std::uint64_t nq(std::uint64_t q, std::uint64_t t);
NqDetail nq_detail(std::uint64_t q, std::uint64_t t);

struct EligibleDegree {
  std::uint64_t t;
  std::uint64_t count;  // N_q(t)

  friend bool operator==(const EligibleDegree&, const EligibleDegree&) = default;
};

/// Visits every t <= T with rad4(t) | q-1 exactly once with its N_q(t).
/// For q = 3 mod 4 these are odd t and 2t; no multiple of 4 is touched.
void enumerate_eligible(const CensusInput& input, const std::function<void(std::uint64_t, std::uint64_t)>& visit);
/// Collected and sorted by t.
std::vector<EligibleDegree> eligible_degrees(const CensusInput& input);
std::uint64_t eligible_count(const CensusInput& input);

BigInt exact_sum(const CensusInput& input);

/// A, B, C over one lattice: Upsilon(budget) on the active primes, each term
/// scaled by `weight`.
struct StratumHalf {
  std::string label;
  std::uint64_t budget;
  Rational weight;
  lattice::StrataCounts counts;
  Rational A, B, C;
};

/// Combined sums satisfy exact_sum = (q-1)(A+B+C). For q = 3 mod 4 the odd
/// half (weight 1, budget T) and the doubled half (weight 1/2, budget T/2)
/// are both listed.
struct StratumSums {
  Rational A, B, C;
  std::vector<StratumHalf> halves;
};

StratumSums stratum_sums(const CensusInput& input);

/// Closed forms for A and B via the shift and boundary reductions:
/// rhsA = (phi(R)/R) |Upsilon(T/R)|,
/// rhsB = (phi(R)/R) sum_j p_j/(p_j-1) |Upsilon_{without p_j}(T p_j/R)|,
/// R = product of the active primes. Requires T > rad(q-1).
struct ClosedForms {
  Rational rhsA, rhsB;
};

ClosedForms lemma31_closed_forms(const CensusInput& input);

/// Two-term main term of the census for the active congruence case.
/// Throws DegenerateCase when s = 0.
double asymptotic_estimate(const CensusInput& input);

/// 1 or 3/2.
double corollary_limit(const CensusInput& input);

/// (s! prod log p_j / phi(q-1)) * exact_sum / (log T)^s. Throws
/// DegenerateCase when s = 0 and PreconditionFailed when T = 1.
double corollary_ratio(const CensusInput& input);
double corollary_ratio(const CensusInput& input, const BigInt& exact);

struct Theorem6 {
  double bound;
  double M1;
  double M2;
  double R;  // log rad(q-1) / log T
};

/// Small-T upper bound. Requires q != 3 mod 4, s >= 2 and T > rad(q-1).
Theorem6 theorem6_bound(const CensusInput& input);

struct NaiveBounds {
  std::uint64_t eligible;  // |Upsilon(T)| under rad4 eligibility
  BigInt lower;            // phi(q-1) * eligible
  BigInt upper;            // (q-1) * eligible
};

NaiveBounds naive_bounds(const CensusInput& input);

struct HeShBound {
  double bound;             // (q-1) T / (log T)^A
  bool valid;               // T above the validity threshold
  double log_threshold;     // log of the threshold, NaN when undefined
  std::string reason;       // why `valid` is false, empty otherwise
};

/// Threshold exponent uses log_k as the k-fold iterated natural log.
/// Requires T >= 3, q >= 5, A > 0, eps > 0.
HeShBound hesh_bound(std::uint64_t q, std::uint64_t T, double A, double eps);

// ---------------------------------------------------------------------------
// Report

enum class BoundSide { kLower, kUpper };

/// One bound compared with its reference value. margin = bound - reference.
struct Margin {
  std::string name;
  BoundSide side;
  double bound;
  double reference;
  double margin;
  bool holds;     // strict for lattice bounds, non-strict for sums
  bool asserted;  // false for report-only bounds
};

struct BoundReport {
  NaiveBounds naive;
  std::uint64_t lattice_count = 0;  // |Upsilon(T)| on the active primes
  std::optional<lattice::Bounds> lehmer;
  std::optional<Theorem6> theorem6;
  std::string theorem6_skipped;
  std::optional<HeShBound> hesh;
  std::string hesh_skipped;
  std::vector<Margin> margins;
};

struct ReportOptions {
  bool strata = false;
  bool bounds = false;
  bool asymptotic = false;
  double hesh_A = 1.0;
  double hesh_eps = 0.5;
};

struct CensusReport {
  CensusInput input;
  BigInt exact_sum;
  std::optional<StratumSums> strata;
  std::optional<ClosedForms> closed_forms;
  std::string closed_forms_skipped;
  std::optional<double> asymptotic;
  std::optional<double> ratio;
  std::optional<double> limit;
  std::string estimator_error;
  std::optional<BoundReport> bounds;
};

BoundReport bound_report(const CensusInput& input, const BigInt& exact, const ReportOptions& options = {});
CensusReport build_report(const CensusInput& input, const ReportOptions& options = {});

double to_double(const BigInt& v);
double to_double(const Rational& v);

}  // namespace binomcensus::census
