#pragma once

// Arithmetic in F_{p^e} = F_p[y]/(m(y)), polynomials over it, multiplicative
// orders, the order-based binomial irreducibility criterion and a Rabin-test
// oracle used to check it by exhaustion.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "binomcensus/nt.hpp"

namespace binomcensus::ff {

/// A field element packed as the base-p integer sum c_i p^i of its
/// coefficient vector. 0 is the zero element and 1 the unit.
using Elem = std::uint32_t;

/// Unpacked element: little-endian coefficients in powers of the generator y.
struct FieldElement {
  std::vector<std::uint32_t> coefficients;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

/// Size limits for field construction and exhaustive censuses.
struct OracleLimits {
  std::uint64_t field_ceiling = 1u << 16;  // largest q accepted by build_field
  std::uint64_t census_q_ceiling = 64;     // largest q for exhaustive censuses
  unsigned census_t_ceiling = 200;         // largest t for exhaustive censuses

  /// Defaults, with census_q_ceiling overridden by BINOMCENSUS_ORACLE_CEILING.
  static OracleLimits from_env();
};

/// Immutable context for F_q, q = p^e. Copies share the lookup tables.
class FieldCtx {
 public:
  /// Picks the lexicographically smallest monic irreducible modulus of degree
  /// e over F_p (coefficients compared from x^{e-1} down to x^0).
  static FieldCtx build(std::uint64_t p, unsigned e, const OracleLimits& limits = {});

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return e_; }
  std::uint32_t size() const { return q_; }
  /// Monic modulus, little-endian, length e+1. For e = 1 this is x.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  const nt::Factorization& unit_group_order() const { return *q_minus_1_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  /// Embeds an integer residue of F_p.
  Elem from_residue(std::uint64_t r) const { return static_cast<Elem>(r % p_); }

  Elem add(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return tables_->exp[tables_->log[a] + tables_->log[b]];
  }
  /// Throws InvalidInput for a = 0.
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t exponent) const;

  FieldElement decode(Elem a) const;
  Elem encode(const FieldElement& a) const;

  /// Reference multiplication straight from the polynomial model; used to
  /// build the tables and by tests.
  Elem mul_reference(Elem a, Elem b) const;

  /// Discrete log table entry, for sparse polynomial loops.
  std::uint32_t log_of(Elem a) const { return tables_->log[a]; }
  Elem exp_of(std::uint32_t k) const { return tables_->exp[k]; }

 private:
  struct Tables {
    std::vector<Elem> exp;           // length 2(q-1)
    std::vector<std::uint32_t> log;  // length q, log[0] unused
    std::vector<std::uint16_t> add;  // q*q when q is small, else empty
    std::vector<Elem> neg;
  };

  FieldCtx() = default;
  Elem add_digits(Elem a, Elem b) const;
  void build_tables();

  std::uint32_t p_ = 0;
  unsigned e_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::shared_ptr<const nt::Factorization> q_minus_1_;
  std::shared_ptr<const Tables> tables_;
};

inline FieldCtx build_field(std::uint64_t p, unsigned e, const OracleLimits& limits = {}) {
  return FieldCtx::build(p, e, limits);
}

struct OrderRecord {
  Elem element;
  std::uint64_t order;
};

/// Exact order by stripping primes from q-1 while the power stays 1.
OrderRecord multiplicative_order(const FieldCtx& ctx, Elem a);

/// element^order = 1 and element^(order/l) != 1 for each prime l | order.
bool satisfies_order_invariants(const FieldCtx& ctx, const OrderRecord& rec);

/// Irreducibility of x^t - a from ord(a) alone: every prime of t divides
/// ord(a), gcd(t, (q-1)/ord(a)) = 1, and 4 | t forces q = 1 mod 4.
/// Requires t >= 2 and ord_a | q-1.
bool criterion_irreducible(const nt::Factorization& q_minus_1, std::uint64_t t, std::uint64_t ord_a);

/// Dense little-endian polynomial over F_q; the zero polynomial is empty.
using Poly = std::vector<Elem>;

namespace poly {

void trim(Poly& f);
/// Degree, or -1 for the zero polynomial.
long degree(const Poly& f);
Poly sub(const FieldCtx& ctx, const Poly& a, const Poly& b);
Poly mul(const FieldCtx& ctx, const Poly& a, const Poly& b);
/// Remainder of a modulo non-zero b.
Poly rem(const FieldCtx& ctx, Poly a, const Poly& b);
/// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const FieldCtx& ctx, Poly a, Poly b);
Poly mul_mod(const FieldCtx& ctx, const Poly& a, const Poly& b, const Poly& f);
Poly pow_mod(const FieldCtx& ctx, Poly base, std::uint64_t exponent, const Poly& f);
/// x^t - a.
Poly binomial(const FieldCtx& ctx, std::uint64_t t, Elem a);

}  // namespace poly

/// Rabin's test: f of degree t is irreducible iff x^(q^t) = x mod f and
/// gcd(x^(q^(t/l)) - x, f) = 1 for every prime l | t. Throws for non-monic
/// or constant f.
bool rabin_irreducible(const FieldCtx& ctx, const Poly& f);

/// Number of a in F_q* with x^t - a irreducible, by running the Rabin test on
/// every binomial. `workers` = 0 picks the hardware concurrency.
std::uint64_t oracle_binomial_count(const FieldCtx& ctx, std::uint64_t t, const OracleLimits& limits = {},
                                    unsigned workers = 0);

}  // namespace binomcensus::ff
