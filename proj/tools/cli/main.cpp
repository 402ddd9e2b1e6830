// binomcensus: exact censuses of irreducible binomials over F_q and the
// bounds and asymptotics they are compared against.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "binomcensus/errors.hpp"
#include "cli/commands.hpp"

namespace bc = binomcensus;
namespace cli = binomcensus::cli;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::uint64_t> parse_counts(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(s)) out.push_back(cli::parse_count(item));
  return out;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) throw bc::InvalidInput("not a real number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact counts of irreducible binomials over finite fields"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "table";
  app.add_option("--format", format, "Output format: table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));

  std::string q_text, t_text, max_t_text, max_t_list_text, coeffs_text, primes_text;
  double lambda = 0;
  bool strata = false, bounds = false, asymptotic = false;
  double hesh_A = 1.0, hesh_eps = 0.5;
  std::size_t lehmer_first = 0;

  auto* nq = app.add_subcommand("nq", "Number of irreducible x^t - a over F_q");
  nq->add_option("--q", q_text, "Field size (prime power)")->required();
  nq->add_option("--t", t_text, "Degree t >= 1")->required();

  auto* census = app.add_subcommand("census", "Exact sum of N_q(t) over t <= T");
  census->add_option("--q", q_text, "Field size (prime power)")->required();
  census->add_option("--max-t", max_t_text, "T (integer, scientific notation allowed)")->required();
  census->add_flag("--strata", strata, "Report the A/B/C stratum sums and closed forms");
  census->add_flag("--bounds", bounds, "Report every bound with margins");
  census->add_flag("--asymptotic", asymptotic, "Report the asymptotic estimate and normalized ratio");
  census->add_option("--hesh-a", hesh_A, "Exponent A of the (q-1)T/(log T)^A bound");
  census->add_option("--hesh-eps", hesh_eps, "epsilon in the validity threshold of that bound");

  auto* verify = app.add_subcommand("verify", "Criterion vs Rabin test vs closed form, exhaustively");
  verify->add_option("--q", q_text, "Field size (prime power)")->required();
  verify->add_option("--max-t", max_t_text, "Largest degree checked")->required();

  auto* lat = app.add_subcommand("lattice", "Lattice points in a_1 x_1 + ... + a_s x_s <= lambda");
  auto* coeffs_opt = lat->add_option("--coeffs", coeffs_text, "Comma-separated positive reals a_1,...,a_s");
  auto* primes_opt = lat->add_option("--primes", primes_text, "Comma-separated distinct primes");
  auto* lambda_opt = lat->add_option("--lambda", lambda, "Real budget lambda >= 0");
  auto* lat_max_t_opt = lat->add_option("--max-t", max_t_text, "Integer bound T on the product");
  lat->add_flag("--bounds", bounds, "Trivial, Lehmer and Spencer values with margins");
  auto* first_opt = lat->add_option("--lehmer-first", lehmer_first, "0-based index of the coefficient playing a_1");

  auto* sweep = app.add_subcommand("sweep", "One census row per T for convergence studies");
  sweep->add_option("--q", q_text, "Field size (prime power)")->required();
  sweep->add_option("--max-t-list", max_t_list_text, "Comma-separated T values, e.g. 1e3,1e6")->required();
  sweep->add_option("--hesh-a", hesh_A, "Exponent A of the (q-1)T/(log T)^A bound");
  sweep->add_option("--hesh-eps", hesh_eps, "epsilon in the validity threshold of that bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInvalidInput;
  }

  try {
    cli::CommandOutcome outcome;
    if (*nq) {
      outcome = cli::run_nq({cli::parse_count(q_text), cli::parse_count(t_text)});
    } else if (*census) {
      cli::CensusArgs a;
      a.q = cli::parse_count(q_text);
      a.max_t = cli::parse_count(max_t_text);
      a.strata = strata;
      a.bounds = bounds;
      a.asymptotic = asymptotic;
      a.hesh_A = hesh_A;
      a.hesh_eps = hesh_eps;
      outcome = cli::run_census(a);
    } else if (*verify) {
      cli::VerifyArgs a;
      a.q = cli::parse_count(q_text);
      a.max_t = cli::parse_count(max_t_text);
      outcome = cli::run_verify(a);
    } else if (*lat) {
      cli::LatticeArgs a;
      if (*coeffs_opt) a.coeffs = parse_reals(coeffs_text);
      if (*primes_opt) a.primes = parse_counts(primes_text);
      if (*lambda_opt) a.lambda = lambda;
      if (*lat_max_t_opt) a.max_t = cli::parse_count(max_t_text);
      if (*first_opt) a.lehmer_first = lehmer_first;
      a.bounds = bounds;
      outcome = cli::run_lattice(a);
    } else if (*sweep) {
      cli::SweepArgs a;
      a.q = cli::parse_count(q_text);
      a.max_t_list = parse_counts(max_t_list_text);
      a.hesh_A = hesh_A;
      a.hesh_eps = hesh_eps;
      outcome = cli::run_sweep(a);
    }

    std::cout << cli::render(outcome.record, cli::parse_format(format));
    if (outcome.record.flags.value("lehmer_upper_violated", false))
      std::cerr << "warning: Lehmer upper bound VIOLATED on this instance\n";
    if (outcome.exit_code == cli::kExitOracleMismatch) std::cerr << "error: oracle mismatch, see counterexample\n";
    return outcome.exit_code;
  } catch (const bc::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const bc::CeilingExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const bc::PreconditionFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const bc::DegenerateCase& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const bc::ArithmeticOverflow& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return cli::kExitInvalidInput;
}
