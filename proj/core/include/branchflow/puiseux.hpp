#pragma once

#include <optional>
#include <vector>

#include "branchflow/bipoly.hpp"
#include "branchflow/series.hpp"

namespace branchflow {

// Branch parametrization (t^n, y(t)) with ord(y) >= n (tangent cone not the
// OY axis). Truncation metadata lives on the y series.
struct PuiseuxParam {
  long n = 1;
  TSeries y;

  long trunc() const { return y.trunc; }
  bool smooth() const { return n == 1; }
};

// gcd of n and the stored support; irreducibility is certified only when the
// gcd chain reaches 1 within the truncation.
long support_gcd(const PuiseuxParam& p);
void check_irreducible(const PuiseuxParam& p);
void check_valid(const PuiseuxParam& p);

// First y-exponent (the would-be m); at_least when y vanishes to truncation.
Ord first_exponent(const PuiseuxParam& p);

// Default working truncation c + 2n + 4 given conductor and multiplicity.
long default_trunc(long conductor, long n);

// One preparation flow exp(-a x^k d/dy), removing the pure term a t^{kn}.
struct PrepareStep {
  long k = 0;
  Scalar coeff;
};

struct PrepareResult {
  PuiseuxParam param;
  std::vector<PrepareStep> log;
  bool smooth = false;  // y vanished entirely: smooth axis-aligned branch
};

// Remove the pure t^{kn} head terms so the first exponent m satisfies
// m > n, n does not divide m.
PrepareResult prepare(const PuiseuxParam& p);

struct SemigroupData {
  std::vector<long> char_exponents;  // beta_0 = n, beta_1, ..., beta_g
  std::vector<long> generators;      // bbar_0 = n, ..., bbar_g
  long conductor = 0;
};

// Characteristic data from the gcd filtration of the support; conductor via
// c = sum (n_q - 1) bbar_q - n + 1. Requires a prepared parametrization.
SemigroupData semigroup(const PuiseuxParam& p);

bool semigroup_contains(const SemigroupData& s, long value);

// Multiplicities at the successive infinitely-near points, by iterated strict
// transforms. Errors when the truncation is exhausted before `depth`.
std::vector<long> mult_sequence(const PuiseuxParam& p, long depth);

// One blow-up of the branch: divisor coordinate of the strict transform,
// renormalized parametrization, and whether charts were swapped.
struct BlowupStep {
  PuiseuxParam param;
  Scalar divisor_coord;  // position of the strict transform on the new divisor
  bool swapped = false;
  long mult = 1;  // multiplicity before this blow-up
};

BlowupStep blow_up_step(const PuiseuxParam& p);

// Strict transform for prepared input (divisor coordinate 0 by preparation).
PuiseuxParam strict_transform(const PuiseuxParam& p);

// Exact implicit equation: the characteristic polynomial in y of multiplication
// by y(t) on Q(zeta)[x][t]/(t^n - x). Requires polynomial y data.
BiPoly implicitize(const PuiseuxParam& p);

// ord_t of g along the parametrization.
Ord intersection(const PuiseuxParam& p, const BiPoly& g);

// Reparametrize t -> xi t with xi = zeta_order^k.
PuiseuxParam reparam_root_of_unity(const PuiseuxParam& p, long k, long order);

// Equality as branches: prepare both, then look for t -> xi t (xi^n = 1 in the
// field) matching all coefficients up to the common truncation.
bool branch_equal(const PuiseuxParam& a, const PuiseuxParam& b);

}  // namespace branchflow
