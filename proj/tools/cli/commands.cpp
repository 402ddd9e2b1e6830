#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <numeric>

#include "binomcensus/census.hpp"
#include "binomcensus/errors.hpp"
#include "binomcensus/lattice.hpp"

namespace binomcensus::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Json exact_list(const std::vector<std::uint64_t>& xs) {
  Json a = Json::array();
  for (auto x : xs) a.push_back(exact(x));
  return a;
}

Json margin_json(const census::Margin& m) {
  Json j;
  j["name"] = m.name;
  j["side"] = m.side == census::BoundSide::kLower ? "lower" : "upper";
  j["bound"] = real(m.bound);
  j["reference"] = real(m.reference);
  j["margin"] = real(m.margin);
  j["holds"] = m.holds;
  j["asserted"] = m.asserted;
  return j;
}

Json lattice_margin(const std::string& name, bool lower, double bound, double count, bool asserted) {
  census::Margin m{name,  lower ? census::BoundSide::kLower : census::BoundSide::kUpper,
                   bound, count,
                   bound - count, lower ? bound < count : bound > count,
                   asserted};
  return margin_json(m);
}

Json strata_counts_json(const lattice::StrataCounts& c) {
  Json j;
  j["total"] = exact(c.total);
  j["plus"] = exact(c.plus);
  j["boundary"] = exact_list(c.boundary);
  j["rest"] = exact(c.rest);
  Json pairs = Json::array();
  for (std::size_t i = 0; i < c.pairs.size(); ++i)
    for (std::size_t k = i + 1; k < c.pairs.size(); ++k)
      pairs.push_back({{"i", i + 1}, {"j", k + 1}, {"count", exact(c.pairs[i][k])}});
  j["pairs"] = pairs;
  j["partition_holds"] = c.partition_holds();
  return j;
}

double relative_error(double estimate, const BigInt& exact_value) {
  const double e = census::to_double(exact_value);
  return std::abs(estimate - e) / e;
}

}  // namespace

CommandOutcome run_nq(const NqArgs& args) {
  const auto start = Clock::now();
  CommandOutcome out;
  auto& rec = out.record;
  rec.command = "nq";
  rec.params = {{"q", exact(args.q)}, {"t", exact(args.t)}};
  const auto d = census::nq_detail(args.q, args.t);
  rec.results["nq"] = exact(d.value);
  rec.results["rad4_t"] = exact(d.rad4_t);
  rec.results["branch"] = d.eligible ? "rad4 | q−1" : "rad4 ∤ q−1";
  rec.wall_time_s = seconds_since(start);
  return out;
}

CommandOutcome run_census(const CensusArgs& args) {
  const auto start = Clock::now();
  CommandOutcome out;
  auto& rec = out.record;
  rec.command = "census";
  rec.params = {{"q", exact(args.q)},        {"max_t", exact(args.max_t)}, {"strata", args.strata},
                {"bounds", args.bounds},     {"asymptotic", args.asymptotic}};
  if (args.bounds) {
    rec.params["hesh_A"] = real(args.hesh_A);
    rec.params["hesh_eps"] = real(args.hesh_eps);
  }

  const auto input = census::CensusInput::make(args.q, args.max_t);
  census::ReportOptions opts;
  opts.strata = args.strata;
  opts.bounds = args.bounds;
  opts.asymptotic = args.asymptotic;
  opts.hesh_A = args.hesh_A;
  opts.hesh_eps = args.hesh_eps;
  const auto report = census::build_report(input, opts);

  auto& r = rec.results;
  r["q_minus_1"] = input.q_minus_1.to_string();
  r["congruence"] = census::to_string(input.congruence);
  r["s"] = exact(static_cast<std::uint64_t>(input.s()));
  r["active_primes"] = exact_list(input.active_primes);
  r["exact_sum"] = exact(report.exact_sum);
  r["eligible_count"] = exact(census::eligible_count(input));

  if (report.strata) {
    const auto& st = *report.strata;
    Json sj;
    sj["A"] = exact(st.A);
    sj["B"] = exact(st.B);
    sj["C"] = exact(st.C);
    Json halves = Json::array();
    for (const auto& h : st.halves) {
      halves.push_back({{"label", h.label},
                        {"budget", exact(h.budget)},
                        {"weight", exact(h.weight)},
                        {"A", exact(h.A)},
                        {"B", exact(h.B)},
                        {"C", exact(h.C)},
                        {"counts", strata_counts_json(h.counts)}});
    }
    sj["halves"] = halves;
    sj["sum_identity_holds"] = Rational(BigInt(input.q - 1)) * (st.A + st.B + st.C) == Rational(report.exact_sum);
    if (report.closed_forms) {
      sj["closed_forms"] = {{"rhsA", exact(report.closed_forms->rhsA)},
                            {"rhsB", exact(report.closed_forms->rhsB)},
                            {"A_matches", report.closed_forms->rhsA == st.A},
                            {"B_matches", report.closed_forms->rhsB == st.B}};
    } else {
      sj["closed_forms"] = {{"skipped", report.closed_forms_skipped}};
    }
    r["strata"] = sj;
  }

  if (args.asymptotic) {
    Json aj;
    if (report.asymptotic) {
      aj["estimate"] = real(*report.asymptotic);
      aj["relative_error"] = real(relative_error(*report.asymptotic, report.exact_sum));
      aj["ratio"] = real(*report.ratio);
      aj["limit"] = real(*report.limit);
      aj["ratio_distance"] = real(std::abs(*report.ratio - *report.limit));
    } else {
      aj["error"] = report.estimator_error;
    }
    r["asymptotic"] = aj;
  }

  if (report.bounds) {
    const auto& b = *report.bounds;
    r["naive"] = {{"eligible", exact(b.naive.eligible)},
                  {"lower", exact(b.naive.lower)},
                  {"upper", exact(b.naive.upper)}};
    r["lattice_count"] = exact(b.lattice_count);
    if (b.theorem6) {
      r["theorem6"] = {{"bound", real(b.theorem6->bound)},
                       {"M1", real(b.theorem6->M1)},
                       {"M2", real(b.theorem6->M2)},
                       {"R", real(b.theorem6->R)}};
    } else {
      rec.flags["theorem6_skipped"] = b.theorem6_skipped;
    }
    if (b.hesh) {
      r["hesh"] = {{"bound", real(b.hesh->bound)},
                   {"valid", b.hesh->valid},
                   {"log_threshold", real(b.hesh->log_threshold)}};
      if (!b.hesh->valid) rec.flags["hesh_invalid_reason"] = b.hesh->reason;
      rec.flags["hesh_log_k"] = "interpreted as k-fold iterated natural logarithm";
    } else {
      rec.flags["hesh_skipped"] = b.hesh_skipped;
    }
    bool violation = false;
    for (const auto& m : b.margins) {
      rec.margins.push_back(margin_json(m));
      if (!m.holds) violation = true;
    }
    rec.flags["bound_violation"] = violation;
  }
  rec.wall_time_s = seconds_since(start);
  return out;
}

VerifySummary verify_triangle(const ff::FieldCtx& ctx, std::uint64_t max_t) {
  VerifySummary sum;
  const std::uint64_t q = ctx.size();
  const auto& qm1 = ctx.unit_group_order();
  std::vector<std::uint64_t> orders(q, 0);
  for (ff::Elem a = 1; a < q; ++a) orders[a] = ff::multiplicative_order(ctx, a).order;

  auto note = [&](VerifyMismatch m) {
    ++sum.mismatch_count;
    if (!sum.first_mismatch) sum.first_mismatch = std::move(m);
  };

  for (std::uint64_t t = 1; t <= max_t; ++t) {
    std::uint64_t count = 0;
    for (ff::Elem a = 1; a < q; ++a) {
      const bool rabin = ff::rabin_irreducible(ctx, ff::poly::binomial(ctx, t, a));
      ++sum.binomials_checked;
      if (rabin) ++count;
      if (t >= 2) {
        const bool crit = ff::criterion_irreducible(qm1, t, orders[a]);
        if (crit != rabin)
          note({"criterion-vs-rabin", t, a,
                "criterion says " + std::string(crit ? "irreducible" : "reducible") + ", Rabin says " +
                    (rabin ? "irreducible" : "reducible") + " (ord a = " + std::to_string(orders[a]) + ")"});
      }
    }
    sum.oracle_counts.push_back(count);
    const std::uint64_t formula = census::nq(q, t);
    if (formula != count)
      note({"count-vs-formula", t, std::nullopt,
            "oracle " + std::to_string(count) + " vs closed form " + std::to_string(formula)});
  }
  return sum;
}

CommandOutcome run_verify(const VerifyArgs& args) {
  const auto start = Clock::now();
  const auto pp = nt::prime_power(args.q);
  if (!pp) throw InvalidInput("q = " + std::to_string(args.q) + " is not a prime power");
  if (args.q > args.limits.census_q_ceiling)
    throw CeilingExceeded("q = " + std::to_string(args.q) + " exceeds the oracle ceiling " +
                          std::to_string(args.limits.census_q_ceiling) + " (set BINOMCENSUS_ORACLE_CEILING)");
  if (args.max_t < 1) throw InvalidInput("max-t must be at least 1");
  if (args.max_t > args.limits.census_t_ceiling)
    throw CeilingExceeded("max-t exceeds the oracle ceiling " + std::to_string(args.limits.census_t_ceiling));

  const auto ctx = ff::build_field(pp->prime, pp->exponent, args.limits);
  const auto summary = verify_triangle(ctx, args.max_t);

  CommandOutcome out;
  auto& rec = out.record;
  rec.command = "verify";
  rec.params = {{"q", exact(args.q)}, {"max_t", exact(args.max_t)}};
  Json modulus = Json::array();
  for (auto c : ctx.modulus()) modulus.push_back(exact(std::uint64_t{c}));
  rec.results["modulus"] = modulus;
  rec.results["binomials_checked"] = exact(summary.binomials_checked);
  rec.results["mismatches"] = exact(summary.mismatch_count);
  rec.results["oracle_sum"] = exact(std::accumulate(summary.oracle_counts.begin(), summary.oracle_counts.end(),
                                                    std::uint64_t{0}));
  rec.results["formula_sum"] = exact(census::exact_sum(census::CensusInput::make(args.q, args.max_t)));
  rec.results["agree"] = summary.mismatch_count == 0;
  if (summary.first_mismatch) {
    const auto& m = *summary.first_mismatch;
    Json cj = {{"kind", m.kind}, {"t", exact(m.t)}, {"detail", m.detail}};
    cj["a"] = m.a ? Json(ctx.decode(*m.a).coefficients) : Json(nullptr);
    rec.results["counterexample"] = cj;
    out.exit_code = kExitOracleMismatch;
  }
  rec.wall_time_s = seconds_since(start);
  return out;
}

CommandOutcome run_lattice(const LatticeArgs& args) {
  const auto start = Clock::now();
  if (args.coeffs.has_value() == args.primes.has_value())
    throw InvalidInput("give exactly one of --coeffs or --primes");
  if (args.lambda.has_value() == args.max_t.has_value())
    throw InvalidInput("give exactly one of --lambda or --max-t");
  if (args.coeffs && !args.lambda) throw InvalidInput("--coeffs pairs with --lambda");
  if (args.primes && !args.max_t) throw InvalidInput("--primes pairs with --max-t");

  CommandOutcome out;
  auto& rec = out.record;
  rec.command = "lattice";

  lattice::LatticeInstance inst;
  std::uint64_t count = 0;
  if (args.primes) {
    for (auto p : *args.primes)
      if (!nt::is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
    if (*args.max_t < 1) throw InvalidInput("max-t must be at least 1");
    rec.params = {{"primes", exact_list(*args.primes)}, {"max_t", exact(*args.max_t)}};
    count = lattice::count_products(*args.primes, *args.max_t);
    inst = lattice::log_instance(*args.primes, static_cast<double>(*args.max_t));
    rec.results["path"] = "integer";
    rec.results["count"] = exact(count);
    rec.results["count_real_path"] = exact(lattice::count_real(inst));
    rec.results["strata"] = strata_counts_json(lattice::strata(*args.primes, *args.max_t));
    rec.results["shift_identity_holds"] = lattice::shift_identity_check(*args.primes, *args.max_t);
  } else {
    inst.coeffs = *args.coeffs;
    inst.lambda = *args.lambda;
    for (double a : inst.coeffs)
      if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("coefficients must be positive and finite");
    if (!(inst.lambda >= 0.0) || !std::isfinite(inst.lambda)) throw InvalidInput("lambda must be >= 0");
    Json coeffs = Json::array();
    for (double a : inst.coeffs) coeffs.push_back(real(a));
    rec.params = {{"coeffs", coeffs}, {"lambda", real(inst.lambda)}};
    count = lattice::count_real(inst);
    rec.results["path"] = "real";
    rec.results["count"] = exact(count);
  }
  rec.results["s"] = exact(static_cast<std::uint64_t>(inst.dimension()));
  rec.results["lambda"] = real(inst.lambda);

  if (args.bounds) {
    rec.params["bounds"] = true;
    if (inst.dimension() == 0 || !(inst.lambda > 0.0)) {
      rec.flags["bounds_skipped"] = "bounds need s >= 1 and lambda > 0";
    } else {
      const double c = static_cast<double>(count);
      const auto triv = lattice::trivial_bounds(inst);
      const std::size_t first = args.lehmer_first.value_or(lattice::lehmer_default_first(inst));
      const auto leh = lattice::lehmer_bounds(inst, first);
      const double spencer = lattice::spencer_estimate(inst);
      rec.margins.push_back(lattice_margin("trivial_lower", true, triv.lower, c, true));
      rec.margins.push_back(lattice_margin("trivial_upper", false, triv.upper, c, true));
      rec.margins.push_back(lattice_margin("lehmer_lower", true, leh.lower, c, false));
      rec.margins.push_back(lattice_margin("lehmer_upper", false, leh.upper, c, false));
      rec.results["spencer"] = {{"estimate", real(spencer)},
                                {"relative_error", real(std::abs(spencer - c) / c)},
                                {"hypothesis_holds", lattice::coefficients_are_prime_logs(inst)}};
      rec.flags["lehmer_first_index"] = first;
      rec.flags["lehmer_lower_violated"] = !(leh.lower < c);
      rec.flags["lehmer_upper_violated"] = !(leh.upper > c);
      rec.flags["trivial_bounds_hold"] = triv.lower < c && c < triv.upper;
    }
  }
  rec.wall_time_s = seconds_since(start);
  return out;
}

CommandOutcome run_sweep(const SweepArgs& args) {
  const auto start = Clock::now();
  if (args.max_t_list.empty()) throw InvalidInput("--max-t-list must not be empty");
  for (auto T : args.max_t_list)
    if (T < 1) throw InvalidInput("every T must be at least 1");
  census::CensusInput::make(args.q, 1);  // validates q up front

  CommandOutcome out;
  auto& rec = out.record;
  rec.command = "sweep";
  rec.params = {{"q", exact(args.q)}, {"max_t_list", exact_list(args.max_t_list)}};

  auto row_for = [&](std::uint64_t T) {
    const auto input = census::CensusInput::make(args.q, T);
    census::ReportOptions opts;
    opts.hesh_A = args.hesh_A;
    opts.hesh_eps = args.hesh_eps;
    const BigInt exact_value = census::exact_sum(input);
    Json row;
    row["T"] = exact(T);
    row["exact_sum"] = exact(exact_value);
    row["eligible_count"] = exact(census::eligible_count(input));
    try {
      const double est = census::asymptotic_estimate(input);
      const double ratio = census::corollary_ratio(input, exact_value);
      const double limit = census::corollary_limit(input);
      row["asymptotic"] = real(est);
      row["relative_error"] = real(relative_error(est, exact_value));
      row["ratio"] = real(ratio);
      row["limit"] = real(limit);
      row["ratio_distance"] = real(std::abs(ratio - limit));
      row["estimator_error"] = "";
    } catch (const std::domain_error& e) {
      row["asymptotic"] = nullptr;
      row["relative_error"] = nullptr;
      row["ratio"] = nullptr;
      row["limit"] = nullptr;
      row["ratio_distance"] = nullptr;
      row["estimator_error"] = e.what();
    }
    const auto br = census::bound_report(input, exact_value, opts);
    Json margins = Json::object();
    for (const auto& m : br.margins) margins[m.name] = real(m.margin);
    for (const char* name : {"theorem6_upper", "hesh_upper", "lehmer_lower", "lehmer_upper"})
      if (!margins.contains(name)) margins[name] = nullptr;
    row["margins"] = margins;
    row["hesh_valid"] = br.hesh ? Json(br.hesh->valid) : Json(nullptr);
    return row;
  };

  std::vector<std::future<Json>> pending;
  for (auto T : args.max_t_list) pending.push_back(std::async(std::launch::async, row_for, T));
  Json rows = Json::array();
  for (auto& f : pending) rows.push_back(f.get());
  rec.results["rows"] = rows;
  rec.flags["case"] = census::to_string(census::CensusInput::make(args.q, 1).congruence);
  rec.wall_time_s = seconds_since(start);
  return out;
}

}  // namespace binomcensus::cli
