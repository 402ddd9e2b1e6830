#include "binomcensus/ff.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>

#include "binomcensus/errors.hpp"

namespace binomcensus::ff {

OracleLimits OracleLimits::from_env() {
  OracleLimits limits;
  if (const char* env = std::getenv("BINOMCENSUS_ORACLE_CEILING"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v >= 2) limits.census_q_ceiling = v;
  }
  return limits;
}

FieldCtx FieldCtx::build(std::uint64_t p, unsigned e, const OracleLimits& limits) {
  if (!nt::is_prime(p)) throw InvalidInput("field characteristic " + std::to_string(p) + " is not prime");
  if (e == 0) throw InvalidInput("extension degree must be at least 1");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < e; ++i) {
    q *= p;
    if (q > limits.field_ceiling)
      throw CeilingExceeded("field size " + std::to_string(p) + "^" + std::to_string(e) + " exceeds ceiling " +
                            std::to_string(limits.field_ceiling));
  }

  FieldCtx ctx;
  ctx.p_ = static_cast<std::uint32_t>(p);
  ctx.e_ = e;
  ctx.q_ = static_cast<std::uint32_t>(q);
  ctx.q_minus_1_ = std::make_shared<const nt::Factorization>(nt::factor(q - 1));

  if (e == 1) {
    ctx.modulus_ = {0, 1};
  } else {
    const FieldCtx base = build(p, 1, limits);
    Poly candidate(e + 1, 0);
    candidate[e] = 1;
    bool found = false;
    // Packed index order over the low coefficients is exactly the
    // lexicographic order on (c_{e-1}, ..., c_0).
    for (std::uint64_t idx = 0; idx < q && !found; ++idx) {
      std::uint64_t rest = idx;
      for (unsigned i = 0; i < e; ++i) {
        candidate[i] = static_cast<Elem>(rest % p);
        rest /= p;
      }
      if (rabin_irreducible(base, candidate)) {
        ctx.modulus_.assign(candidate.begin(), candidate.end());
        found = true;
      }
    }
    if (!found) throw std::logic_error("no irreducible polynomial found");
  }
  ctx.build_tables();
  return ctx;
}

Elem FieldCtx::add_digits(Elem a, Elem b) const {
  if (e_ == 1) return (a + b) % p_;
  Elem out = 0, scale = 1;
  for (unsigned i = 0; i < e_; ++i) {
    out += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return out;
}

Elem FieldCtx::add(Elem a, Elem b) const {
  if (!tables_->add.empty()) return tables_->add[static_cast<std::size_t>(a) * q_ + b];
  return add_digits(a, b);
}

Elem FieldCtx::neg(Elem a) const { return tables_->neg[a]; }

Elem FieldCtx::inv(Elem a) const {
  if (a == 0) throw InvalidInput("inverse of zero");
  const std::uint32_t n = q_ - 1;
  return tables_->exp[(n - tables_->log[a]) % n];
}

Elem FieldCtx::pow(Elem a, std::uint64_t exponent) const {
  Elem result = 1;
  Elem base = a;
  while (exponent) {
    if (exponent & 1) result = mul(result, base);
    base = mul(base, base);
    exponent >>= 1;
  }
  return result;
}

FieldElement FieldCtx::decode(Elem a) const {
  FieldElement out;
  out.coefficients.resize(e_);
  for (unsigned i = 0; i < e_; ++i) {
    out.coefficients[i] = a % p_;
    a /= p_;
  }
  return out;
}

Elem FieldCtx::encode(const FieldElement& a) const {
  if (a.coefficients.size() != e_) throw InvalidInput("element has wrong number of coefficients");
  Elem out = 0;
  for (unsigned i = e_; i-- > 0;) {
    if (a.coefficients[i] >= p_) throw InvalidInput("coefficient out of range");
    out = out * p_ + a.coefficients[i];
  }
  return out;
}

Elem FieldCtx::mul_reference(Elem a, Elem b) const {
  if (e_ == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
  const auto da = decode(a).coefficients;
  const auto db = decode(b).coefficients;
  std::vector<std::uint64_t> prod(2 * e_ - 1, 0);
  for (unsigned i = 0; i < e_; ++i)
    for (unsigned j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{da[i]} * db[j]) % p_;
  // Reduce with the monic modulus: y^e = -(m_0 + ... + m_{e-1} y^{e-1}).
  for (unsigned k = 2 * e_ - 1; k-- > e_;) {
    const std::uint64_t c = prod[k];
    if (!c) continue;
    prod[k] = 0;
    for (unsigned j = 0; j < e_; ++j) prod[k - e_ + j] = (prod[k - e_ + j] + (p_ - c) * modulus_[j]) % p_;
  }
  FieldElement out;
  out.coefficients.assign(prod.begin(), prod.begin() + e_);
  return encode(out);
}

void FieldCtx::build_tables() {
  auto t = std::make_shared<Tables>();
  const std::uint32_t n = q_ - 1;

  auto pow_ref = [&](Elem a, std::uint64_t k) {
    Elem r = 1;
    while (k) {
      if (k & 1) r = mul_reference(r, a);
      a = mul_reference(a, a);
      k >>= 1;
    }
    return r;
  };
  Elem generator = 1;
  for (Elem g = 1; g < q_; ++g) {
    bool primitive = true;
    for (const auto& pp : q_minus_1_->factors()) {
      if (pow_ref(g, n / pp.prime) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      generator = g;
      break;
    }
  }

  t->exp.resize(2 * static_cast<std::size_t>(n));
  t->log.assign(q_, 0);
  Elem cur = 1;
  for (std::uint32_t k = 0; k < n; ++k) {
    t->exp[k] = cur;
    t->log[cur] = k;
    cur = mul_reference(cur, generator);
  }
  for (std::uint32_t k = 0; k < n; ++k) t->exp[n + k] = t->exp[k];

  t->neg.resize(q_);
  for (Elem a = 0; a < q_; ++a) {
    FieldElement d = decode(a);
    for (auto& c : d.coefficients) c = (p_ - c) % p_;
    t->neg[a] = encode(d);
  }
  if (q_ <= 256) {
    t->add.resize(static_cast<std::size_t>(q_) * q_);
    for (Elem a = 0; a < q_; ++a)
      for (Elem b = 0; b < q_; ++b) t->add[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(add_digits(a, b));
  }
  tables_ = std::move(t);
}

OrderRecord multiplicative_order(const FieldCtx& ctx, Elem a) {
  if (a == 0) throw InvalidInput("zero has no multiplicative order");
  std::uint64_t order = ctx.size() - 1;
  for (const auto& pp : ctx.unit_group_order().factors()) {
    while (order % pp.prime == 0 && ctx.pow(a, order / pp.prime) == 1) order /= pp.prime;
  }
  return {a, order};
}

bool satisfies_order_invariants(const FieldCtx& ctx, const OrderRecord& rec) {
  if (rec.order == 0 || (ctx.size() - 1) % rec.order != 0) return false;
  if (ctx.pow(rec.element, rec.order) != 1) return false;
  const auto of = nt::factor(rec.order);
  for (const auto& pp : of.factors())
    if (ctx.pow(rec.element, rec.order / pp.prime) == 1) return false;
  return true;
}

bool criterion_irreducible(const nt::Factorization& q_minus_1, std::uint64_t t, std::uint64_t ord_a) {
  if (t < 2) throw InvalidInput("criterion requires t >= 2");
  const std::uint64_t n = q_minus_1.value();
  if (ord_a == 0 || n % ord_a != 0) throw InvalidInput("order must divide q-1");
  const auto tf = nt::factor(t);
  for (const auto& pp : tf.factors())
    if (ord_a % pp.prime != 0) return false;
  if (std::gcd(t, n / ord_a) != 1) return false;
  // q = n + 1, so q = 1 mod 4 iff 4 | n.
  if (t % 4 == 0 && n % 4 != 0) return false;
  return true;
}

namespace poly {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

long degree(const Poly& f) {
  for (std::size_t i = f.size(); i-- > 0;)
    if (f[i] != 0) return static_cast<long>(i);
  return -1;
}

Poly sub(const FieldCtx& ctx, const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = ctx.sub(out[i], b[i]);
  trim(out);
  return out;
}

Poly mul(const FieldCtx& ctx, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  // Nonzero terms of b as (index, log) pairs; binomial moduli keep these short.
  std::vector<std::pair<std::size_t, std::uint32_t>> terms;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (b[j]) terms.emplace_back(j, ctx.log_of(b[j]));
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    const std::uint32_t la = ctx.log_of(a[i]);
    for (const auto& [j, lb] : terms) out[i + j] = ctx.add(out[i + j], ctx.exp_of(la + lb));
  }
  trim(out);
  return out;
}

Poly rem(const FieldCtx& ctx, Poly a, const Poly& b) {
  const long db = degree(b);
  if (db < 0) throw InvalidInput("polynomial division by zero");
  trim(a);
  if (static_cast<long>(a.size()) <= db) return a;
  const Elem lead_inv = ctx.inv(b[db]);
  std::vector<std::pair<std::size_t, Elem>> lower;
  for (long j = 0; j < db; ++j)
    if (b[j]) lower.emplace_back(static_cast<std::size_t>(j), b[j]);
  for (std::size_t k = a.size(); k-- > static_cast<std::size_t>(db);) {
    if (!a[k]) continue;
    const Elem c = ctx.mul(a[k], lead_inv);
    a[k] = 0;
    const std::size_t shift = k - static_cast<std::size_t>(db);
    for (const auto& [j, bj] : lower) a[shift + j] = ctx.sub(a[shift + j], ctx.mul(c, bj));
  }
  a.resize(static_cast<std::size_t>(db));
  trim(a);
  return a;
}

Poly gcd(const FieldCtx& ctx, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(ctx, std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Elem inv = ctx.inv(a.back());
    for (auto& c : a) c = ctx.mul(c, inv);
  }
  return a;
}

Poly mul_mod(const FieldCtx& ctx, const Poly& a, const Poly& b, const Poly& f) {
  return rem(ctx, mul(ctx, a, b), f);
}

Poly pow_mod(const FieldCtx& ctx, Poly base, std::uint64_t exponent, const Poly& f) {
  Poly result = rem(ctx, Poly{1}, f);
  base = rem(ctx, std::move(base), f);
  while (exponent) {
    if (exponent & 1) result = mul_mod(ctx, result, base, f);
    exponent >>= 1;
    if (exponent) base = mul_mod(ctx, base, base, f);
  }
  return result;
}

Poly binomial(const FieldCtx& ctx, std::uint64_t t, Elem a) {
  Poly f(t + 1, 0);
  f[0] = ctx.neg(a);
  f[t] = 1;
  return f;
}

}  // namespace poly

bool rabin_irreducible(const FieldCtx& ctx, const Poly& f) {
  const long deg = poly::degree(f);
  if (deg < 1) throw InvalidInput("Rabin test needs degree >= 1");
  if (f[deg] != 1) throw InvalidInput("Rabin test needs a monic polynomial");
  if (deg == 1) return true;
  const auto t = static_cast<std::uint64_t>(deg);
  Poly modulus(f.begin(), f.begin() + deg + 1);

  std::vector<std::uint64_t> checkpoints;
  const auto tf = nt::factor(t);
  for (const auto& pp : tf.factors()) checkpoints.push_back(t / pp.prime);

  const Poly x = poly::rem(ctx, Poly{0, 1}, modulus);
  Poly h = x;
  for (std::uint64_t k = 1; k <= t; ++k) {
    h = poly::pow_mod(ctx, std::move(h), ctx.size(), modulus);
    if (std::find(checkpoints.begin(), checkpoints.end(), k) != checkpoints.end()) {
      if (poly::degree(poly::gcd(ctx, poly::sub(ctx, h, x), modulus)) != 0) return false;
    }
  }
  return poly::sub(ctx, h, x).empty();
}

std::uint64_t oracle_binomial_count(const FieldCtx& ctx, std::uint64_t t, const OracleLimits& limits,
                                    unsigned workers) {
  if (t < 1) throw InvalidInput("degree must be at least 1");
  if (ctx.size() > limits.census_q_ceiling)
    throw CeilingExceeded("q = " + std::to_string(ctx.size()) + " exceeds oracle ceiling " +
                          std::to_string(limits.census_q_ceiling));
  if (t > limits.census_t_ceiling)
    throw CeilingExceeded("t = " + std::to_string(t) + " exceeds oracle ceiling " +
                          std::to_string(limits.census_t_ceiling));

  const std::uint32_t units = ctx.size() - 1;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, units);

  auto count_range = [&](Elem lo, Elem hi) {
    std::uint64_t n = 0;
    for (Elem a = lo; a < hi; ++a)
      if (rabin_irreducible(ctx, poly::binomial(ctx, t, a))) ++n;
    return n;
  };
  if (workers <= 1) return count_range(1, ctx.size());

  std::vector<std::uint64_t> partial(workers, 0);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const Elem lo = 1 + static_cast<Elem>(std::uint64_t{units} * w / workers);
      const Elem hi = 1 + static_cast<Elem>(std::uint64_t{units} * (w + 1) / workers);
      pool.emplace_back([&, w, lo, hi] { partial[w] = count_range(lo, hi); });
    }
  }
  return std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
}

}  // namespace binomcensus::ff
