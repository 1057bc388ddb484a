#include "branchflow/puiseux.hpp"

#include <algorithm>
#include <numeric>

namespace branchflow {

long support_gcd(const PuiseuxParam& p) {
  long g = p.n;
  for (const auto& [e, c] : p.y.terms) g = std::gcd(g, e);
  return g;
}

void check_valid(const PuiseuxParam& p) {
  if (p.n < 1) throw MathError(Errc::BadInput, "multiplicity must be >= 1");
  if (!p.y.terms.empty() && p.y.terms.begin()->first < p.n)
    throw MathError(Errc::TangentConeViolation,
                    "y-part has order below the multiplicity (branch tangent to OY)");
}

void check_irreducible(const PuiseuxParam& p) {
  check_valid(p);
  long g = support_gcd(p);
  if (g == 1) return;
  if (p.y.trunc >= kUnbounded)
    throw MathError(Errc::BadInput,
                    "parametrization is a reparametrized n/" + std::to_string(g) + " branch");
  throw MathError(Errc::TruncationExhausted,
                  "irreducibility not certifiable: support gcd " + std::to_string(g) +
                      " at truncation " + std::to_string(p.y.trunc));
}

Ord first_exponent(const PuiseuxParam& p) { return p.y.ord(); }

long default_trunc(long conductor, long n) { return conductor + 2 * n + 4; }

PrepareResult prepare(const PuiseuxParam& p) {
  check_valid(p);
  PrepareResult res;
  res.param = p;
  while (true) {
    Ord o = res.param.y.ord();
    if (!o.exact) {
      res.smooth = true;
      if (p.n > 1)
        throw MathError(Errc::TruncationExhausted,
                        "preparation consumed every stored term of a multiple branch");
      return res;
    }
    if (o.value % p.n != 0) return res;
    long k = o.value / p.n;
    Scalar a = res.param.y.coeff(o.value);
    res.param.y.set_coeff(o.value, Scalar(0));
    res.log.push_back({k, a});
  }
}

SemigroupData semigroup(const PuiseuxParam& p) {
  check_irreducible(p);
  Ord m = first_exponent(p);
  if (m.exact && m.value % p.n == 0)
    throw MathError(Errc::BadInput, "semigroup needs a prepared parametrization");

  SemigroupData s;
  s.char_exponents.push_back(p.n);
  long e = p.n;
  while (e != 1) {
    long beta = -1;
    for (const auto& [exp, c] : p.y.terms)
      if (exp % e != 0) {
        beta = exp;
        break;
      }
    if (beta < 0)
      throw MathError(Errc::TruncationExhausted,
                      "gcd chain does not reach 1 within truncation " +
                          std::to_string(p.trunc()));
    s.char_exponents.push_back(beta);
    e = std::gcd(e, beta);
  }

  // bbar_{q+1} = n_q bbar_q + beta_{q+1} - beta_q, c = sum (n_q - 1) bbar_q - n + 1
  size_t g = s.char_exponents.size() - 1;
  std::vector<long> eq(g + 1);
  eq[0] = p.n;
  for (size_t q = 1; q <= g; ++q) eq[q] = std::gcd(eq[q - 1], s.char_exponents[q]);
  s.generators.push_back(p.n);
  long conductor = 1 - p.n;
  for (size_t q = 1; q <= g; ++q) {
    long nq = eq[q - 1] / eq[q];
    long bbar;
    if (q == 1) {
      bbar = s.char_exponents[1];
    } else {
      long nq_prev = eq[q - 2] / eq[q - 1];
      bbar = nq_prev * s.generators[q - 1] + s.char_exponents[q] - s.char_exponents[q - 1];
    }
    s.generators.push_back(bbar);
    conductor += (nq - 1) * bbar;
  }
  s.conductor = conductor;
  return s;
}

bool semigroup_contains(const SemigroupData& s, long value) {
  if (value < 0) return false;
  if (value == 0) return true;
  std::vector<char> dp(value + 1, 0);
  dp[0] = 1;
  for (long g : s.generators)
    for (long v = g; v <= value; ++v)
      if (dp[v - g]) dp[v] = 1;
  return dp[value];
}

BlowupStep blow_up_step(const PuiseuxParam& p) {
  check_valid(p);
  if (p.trunc() <= p.n)
    throw MathError(Errc::TruncationExhausted, "truncation exhausted in blow-up");
  BlowupStep step;
  step.mult = p.n;
  TSeries ybar = shifted(p.y, -p.n);
  step.divisor_coord = ybar.coeff(0);
  ybar.set_coeff(0, Scalar(0));

  Ord e = ybar.ord();
  if (!e.exact || e.value >= p.n) {
    step.param = {p.n, std::move(ybar)};
    return step;
  }
  // multiplicity drops: swap charts and extract an e-th root to renormalize
  step.swapped = true;
  long en = e.value;
  TSeries root = nth_root_series(ybar, en);
  TSeries tau = invert_param(root);
  TSeries newy = pow(tau, p.n);
  newy.truncate(std::min(newy.trunc, tau.trunc));
  step.param = {en, std::move(newy)};
  return step;
}

PuiseuxParam strict_transform(const PuiseuxParam& p) { return blow_up_step(p).param; }

std::vector<long> mult_sequence(const PuiseuxParam& p, long depth) {
  std::vector<long> mults;
  PuiseuxParam cur = p;
  for (long i = 0; i < depth; ++i) {
    mults.push_back(cur.n);
    if (cur.n == 1 && cur.y.known_zero() && cur.trunc() >= kUnbounded) {
      // smooth axis: every further multiplicity is 1
      while ((long)mults.size() < depth) mults.push_back(1);
      break;
    }
    cur = blow_up_step(cur).param;
  }
  return mults;
}

BiPoly implicitize(const PuiseuxParam& p) {
  check_irreducible(p);
  if (p.trunc() < kUnbounded)
    throw MathError(Errc::BadInput, "implicitization needs exact polynomial y data");
  long n = p.n;
  // reduce y(t) modulo t^n = x: row r collects c_r(x)
  std::vector<BiPoly> c(n, BiPoly::zero());
  for (const auto& [e, coef] : p.y.terms)
    c[e % n] = c[e % n] + BiPoly::monomial(e / n, 0, coef);

  // multiplication-by-y matrix on basis {1, t, ..., t^{n-1}} over Q(zeta)[x]
  std::vector<std::vector<BiPoly>> A(n, std::vector<BiPoly>(n, BiPoly::zero()));
  for (long col = 0; col < n; ++col)
    for (long r = 0; r < n; ++r) {
      if (c[r].known_zero()) continue;
      long e = r + col;
      BiPoly entry = c[r];
      if (e >= n) entry = entry * BiPoly::x();
      A[e % n][col] = A[e % n][col] + entry;
    }

  // characteristic polynomial det(yI - A) by Faddeev-LeVerrier
  auto mat_mul = [n](const std::vector<std::vector<BiPoly>>& X,
                     const std::vector<std::vector<BiPoly>>& Y) {
    std::vector<std::vector<BiPoly>> Z(n, std::vector<BiPoly>(n, BiPoly::zero()));
    for (long i = 0; i < n; ++i)
      for (long k = 0; k < n; ++k) {
        if (X[i][k].known_zero()) continue;
        for (long j = 0; j < n; ++j) {
          if (Y[k][j].known_zero()) continue;
          Z[i][j] = Z[i][j] + X[i][k] * Y[k][j];
        }
      }
    return Z;
  };
  auto trace = [n](const std::vector<std::vector<BiPoly>>& X) {
    BiPoly t = BiPoly::zero();
    for (long i = 0; i < n; ++i) t = t + X[i][i];
    return t;
  };

  std::vector<BiPoly> charc(n + 1, BiPoly::zero());  // coefficient of y^k
  charc[n] = BiPoly::constant(Scalar(1));
  std::vector<std::vector<BiPoly>> M = A;
  BiPoly ck = -trace(A);
  charc[n - 1] = ck;
  for (long k = 2; k <= n; ++k) {
    for (long i = 0; i < n; ++i) M[i][i] = M[i][i] + ck;
    M = mat_mul(A, M);
    ck = BiPoly::constant(Scalar(mpq_class(-1, k))) * trace(M);
    charc[n - k] = ck;
  }

  BiPoly f = BiPoly::zero();
  for (long k = 0; k <= n; ++k) {
    if (charc[k].known_zero()) continue;
    BiPoly yk = BiPoly::monomial(0, k, Scalar(1));
    f = f + charc[k] * yk;
  }
  return f;
}

Ord intersection(const PuiseuxParam& p, const BiPoly& g) {
  TSeries xs = TSeries::monomial(p.n, Scalar(1), p.trunc());
  return compose(g, xs, p.y).ord();
}

PuiseuxParam reparam_root_of_unity(const PuiseuxParam& p, long k, long order) {
  Scalar xi = Scalar::root_of_unity(k, order);
  if (!(xi.pow(p.n) == Scalar(1)))
    throw MathError(Errc::BadInput, "reparametrization root must satisfy xi^n = 1");
  PuiseuxParam r;
  r.n = p.n;
  r.y.trunc = p.y.trunc;
  for (const auto& [e, c] : p.y.terms) r.y.terms.emplace(e, c * xi.pow(e));
  return r;
}

bool branch_equal(const PuiseuxParam& a, const PuiseuxParam& b) {
  PrepareResult pa = prepare(a);
  PrepareResult pb = prepare(b);
  if (pa.param.n != pb.param.n) return false;
  if (pa.smooth || pb.smooth) return pa.smooth == pb.smooth;
  long n = pa.param.n;
  long L = 1;
  for (const auto& [e, c] : pa.param.y.terms) L = std::lcm(L, c.order());
  for (const auto& [e, c] : pb.param.y.terms) L = std::lcm(L, c.order());
  L = std::lcm(L, 2L);
  // roots of unity available in the working field: +-zeta_L^k
  for (long k = 0; k < L; ++k) {
    Scalar xi = Scalar::root_of_unity(k, L);
    if (!(xi.pow(n) == Scalar(1))) continue;
    PuiseuxParam cand;
    cand.n = n;
    cand.y.trunc = pa.param.y.trunc;
    for (const auto& [e, c] : pa.param.y.terms) cand.y.terms.emplace(e, c * xi.pow(e));
    if (equal_mod_trunc(cand.y, pb.param.y)) return true;
  }
  return false;
}

}  // namespace branchflow
