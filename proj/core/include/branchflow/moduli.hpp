#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "branchflow/epspoly.hpp"
#include "branchflow/vfield.hpp"

namespace branchflow {

// Parametrization of the flow deformation: y-coefficients are polynomials in
// the formal deformation time eps, truncated at eps_cap.
struct DeformedParam {
  long n = 1;
  EpsSeries y;
  long eps_cap = 0;
  bool auto_prepared = false;  // a recorded linear change made the field prepared
  Scalar prepare_shear;        // the beta of (x, y) -> (x + beta y, y), when used
};

enum class PreparePolicy {
  Require,  // error when the field is not prepared relatively to the branch
  Auto,     // conjugate by a tangent-cone-preserving shear first, and record it
  Formal,   // proceed formally (the eps-truncated computation needs no preparation)
};

// Taylor flow of X applied to the parametrization, renormalized to
// (t^n, ...) over the eps-polynomial coefficient ring.
DeformedParam deform(const PuiseuxParam& p, const VectorField& X, long eps_cap,
                     PreparePolicy policy = PreparePolicy::Require);

// Least exponent whose eps-polynomial moves; the eps cap is doubled until the
// answer is stable. Inexact result = invariant up to the bounds.
Ord contact_exponent_deformation(const PuiseuxParam& p, const VectorField& X,
                                 long eps_cap0 = 4, long eps_cap_max = 32);

// upsilon(m y dx - n x dy) - n; nullopt when the pullback vanishes to
// truncation (quasi-homogeneous head, lambda = infinity).
std::optional<long> lambda_invariant(const PuiseuxParam& p);

// Orders of contact achievable by singular 1-forms, as a witness map
// j -> form with upsilon = j + n, for j in [1, bound]. Gaussian elimination
// by leading order over the monomial pullbacks.
std::map<long, OneForm> contact_set(const PuiseuxParam& p, long bound);

struct ElimResult {
  PuiseuxParam param;
  VectorField witness;
  Scalar s0;
};

// Remove the coefficient of t^j by the time-s0 flow of a nilpotent witness
// with contact exponent j. Coefficients below j are untouched.
ElimResult eliminate_term(const PuiseuxParam& p, long j);

enum class ScaleMode { Exact, Skip, Numeric };

struct NormalStep {
  long j = 0;
  VectorField witness;
  Scalar s0;
};

struct NormalFormReport {
  PuiseuxParam input;
  PuiseuxParam output;
  long n = 1;
  long m = 0;
  std::optional<long> lambda;
  SemigroupData sg;
  std::vector<long> lambda_set;  // contact exponents in [1, truncated_at]
  std::vector<NormalStep> steps;
  long truncated_at = 0;  // co-final truncation bound max(c, m+1)
  long jet_order = 0;

  bool scaled = false;
  Scalar u;    // reparametrization scale, when scaled
  Scalar v_m;  // v^m (the output only ever needs this power)
  std::optional<Scalar> v;
  std::string scale_constraint;  // symbolic constraints when not scaled
};

// prepare -> eliminate ascending (nilpotent witnesses) -> co-final truncation
// -> scaling to a_m = a_lambda = 1. field_order 0 means: use the coefficient
// field as found in the data.
NormalFormReport normal_form(const PuiseuxParam& p, ScaleMode mode = ScaleMode::Exact,
                             long field_order = 0);

// Same class: equal discrete data and a consistent reparametrization scale u
// matching all coefficients; decided exactly via the exponent lattice.
bool moduli_equivalent(const NormalFormReport& r1, const NormalFormReport& r2);

}  // namespace branchflow
