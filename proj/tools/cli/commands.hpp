#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "binomcensus/ff.hpp"
#include "cli/record.hpp"

namespace binomcensus::cli {

// Each run_* builds the record for one subcommand. Bad input surfaces as
// InvalidInput / CeilingExceeded / PreconditionFailed; the caller maps those
// to exit code 2.

struct CommandOutcome {
  OutputRecord record;
  int exit_code = kExitOk;
};

struct NqArgs {
  std::uint64_t q = 0;
  std::uint64_t t = 0;
};

struct CensusArgs {
  std::uint64_t q = 0;
  std::uint64_t max_t = 0;
  bool strata = false;
  bool bounds = false;
  bool asymptotic = false;
  double hesh_A = 1.0;
  double hesh_eps = 0.5;
};

struct VerifyArgs {
  std::uint64_t q = 0;
  std::uint64_t max_t = 0;
  ff::OracleLimits limits = ff::OracleLimits::from_env();
};

struct LatticeArgs {
  std::optional<std::vector<double>> coeffs;
  std::optional<std::vector<std::uint64_t>> primes;
  std::optional<double> lambda;
  std::optional<std::uint64_t> max_t;
  bool bounds = false;
  std::optional<std::size_t> lehmer_first;
};

struct SweepArgs {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> max_t_list;
  double hesh_A = 1.0;
  double hesh_eps = 0.5;
};

CommandOutcome run_nq(const NqArgs& args);
CommandOutcome run_census(const CensusArgs& args);
CommandOutcome run_verify(const VerifyArgs& args);
CommandOutcome run_lattice(const LatticeArgs& args);
CommandOutcome run_sweep(const SweepArgs& args);

/// Criterion vs Rabin vs closed form over every (t, a), t <= max_t.
struct VerifyMismatch {
  std::string kind;  // "criterion-vs-rabin" or "count-vs-formula"
  std::uint64_t t = 0;
  std::optional<std::uint32_t> a;
  std::string detail;
};

struct VerifySummary {
  std::uint64_t binomials_checked = 0;
  std::uint64_t mismatch_count = 0;
  std::optional<VerifyMismatch> first_mismatch;  // smallest t, then smallest a
  std::vector<std::uint64_t> oracle_counts;      // index t-1
};

VerifySummary verify_triangle(const ff::FieldCtx& ctx, std::uint64_t max_t);

}  // namespace binomcensus::cli
