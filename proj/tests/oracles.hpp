#pragma once

// Test-only oracles, independent of the library's computation paths.

#include <map>
#include <random>
#include <vector>

#include "branchflow/puiseux.hpp"
#include "branchflow/vfield.hpp"

namespace testutil {

using namespace branchflow;

inline Scalar Q(long num, long den = 1) {
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

inline TSeries series(std::initializer_list<std::pair<long, long>> terms,
                      long trunc = kUnbounded) {
  TSeries s(trunc);
  for (auto [e, c] : terms) s.set_coeff(e, Q(c));
  return s;
}

inline PuiseuxParam param(long n, std::initializer_list<std::pair<long, long>> yterms,
                          long trunc = kUnbounded) {
  return {n, series(yterms, trunc)};
}

inline VectorField mono_field_dx(long i, long j, long c = 1) {
  return {BiPoly::monomial(i, j, Q(c)), BiPoly::zero()};
}
inline VectorField mono_field_dy(long i, long j, long c = 1) {
  return {BiPoly::zero(), BiPoly::monomial(i, j, Q(c))};
}

// Brute-force conductor of the numerical semigroup generated by gens:
// enumerate membership and find the least c with everything >= c present.
inline long gap_conductor(const std::vector<long>& gens) {
  long bound = 1;
  for (long g : gens) bound += g;
  bound *= bound;
  std::vector<char> in(bound + 1, 0);
  in[0] = 1;
  for (long g : gens)
    for (long v = g; v <= bound; ++v)
      if (in[v - g]) in[v] = 1;
  long c = 0;
  for (long v = bound; v >= 1; --v) {
    if (!in[v]) {
      c = v + 1;
      break;
    }
  }
  return c;
}

inline std::vector<long> gap_elements(const std::vector<long>& gens, long bound) {
  std::vector<char> in(bound + 1, 0);
  in[0] = 1;
  for (long g : gens)
    for (long v = g; v <= bound; ++v)
      if (in[v - g]) in[v] = 1;
  std::vector<long> out;
  for (long v = 0; v <= bound; ++v)
    if (in[v]) out.push_back(v);
  return out;
}

// Multiplicity sequence from characteristic exponents by subtractive Euclid,
// one pair (e_{q-1}, beta_q - beta_{q-1}) at a time; padded with 1s.
inline std::vector<long> euclid_mult_sequence(const std::vector<long>& char_exps, long depth) {
  std::vector<long> seq;
  long a = char_exps[0];
  for (size_t q = 1; q < char_exps.size(); ++q) {
    long b = char_exps[q] - (q == 1 ? 0 : char_exps[q - 1]);
    while (b > 0) {
      if (a <= b) {
        seq.push_back(a);
        b -= a;
      } else {
        std::swap(a, b);
      }
    }
  }
  while ((long)seq.size() < depth) seq.push_back(1);
  seq.resize(depth);
  return seq;
}

// Dense univariate rational polynomial helpers (independent of Series).
using QPoly = std::vector<mpq_class>;

inline QPoly qp_mul(const QPoly& a, const QPoly& b, size_t cap) {
  QPoly r(std::min(cap, a.size() + b.size() - 1));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size() && i + j < r.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// Lagrange inversion of s = sum s_k t^k (s_1 != 0): r_k = [t^{k-1}](t/s)^k / k.
inline QPoly lagrange_inverse(const QPoly& s, size_t K) {
  // t/s as a power series of order 0
  QPoly u(K, 0);
  {
    // s/t = s1 + s2 t + ...; invert by triangular solve
    QPoly st(K, 0);
    for (size_t i = 1; i < s.size() && i - 1 < K; ++i) st[i - 1] = s[i];
    u[0] = 1 / st[0];
    for (size_t k = 1; k < K; ++k) {
      mpq_class acc;
      for (size_t j = 1; j <= k && j < st.size(); ++j) acc += st[j] * u[k - j];
      u[k] = -acc / st[0];
    }
  }
  QPoly r(K, 0);
  QPoly pk{1};
  for (size_t k = 1; k < K; ++k) {
    pk = qp_mul(pk, u, K);
    if (k - 1 < pk.size()) r[k] = pk[k - 1] / (long)k;
  }
  return r;
}

// Binomial series (1 + t)^{p/q} coefficients.
inline QPoly binomial_series(const mpq_class& alpha, size_t K) {
  QPoly r(K, 0);
  r[0] = 1;
  for (size_t k = 1; k < K; ++k) r[k] = r[k - 1] * (alpha - (long)(k - 1)) / (long)k;
  return r;
}

// Deterministic RNG for property suites.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(unsigned long seed) : eng(seed) {}
  long pick(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(eng);
  }
  Scalar small_scalar(bool allow_zero = false) {
    static const long nums[] = {1, -1, 2, -2, 3, 1, -1, 2};
    static const long dens[] = {1, 1, 1, 2, 1, 3, 2, 1};
    if (allow_zero && pick(0, 4) == 0) return Q(0);
    long i = pick(0, 7);
    return Q(nums[i], dens[i]);
  }
};

}  // namespace testutil
