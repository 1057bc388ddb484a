#pragma once

#include <vector>

#include "branchflow/vfield.hpp"

namespace branchflow {

enum class Chart { X, Y };

// True pull-back of a singular field under one point blow-up, in one of the
// two standard charts, keeping the exceptional-divisor factor. The exact
// division by the chart coordinate is verified. `translate` then moves the
// divisor point of interest to the chart origin.
VectorField pullback_field(const VectorField& X, Chart chart, const Scalar& translate);

// Axis label of a divisor through the current chart origin.
enum class Axis { X0, Y0 };  // x = 0 resp. y = 0

struct DivisorThrough {
  long id = 0;  // E_id, id = creation index
  Axis axis = Axis::X0;
  bool free = true;
};

// State of the blow-up iteration at one infinitely near point.
struct LocalModel {
  VectorField X;
  PuiseuxParam curve;
  std::vector<DivisorThrough> divisors;
  std::vector<long> history;  // multiplicities at the visited points
};

struct SharedPath {
  std::vector<long> mults;  // n_0 .. n_N
  long last_index() const { return (long)mults.size() - 1; }

  bool last_point_free = false;            // E_N is a free divisor
  bool last_point_corner = false;          // violates the no-corner lemma if true
  bool last_point_singular_for_curve = false;
  bool last_point_singular_for_X = false;  // false by construction
  bool divisor_invariance_ok = true;
  // restriction of the final pull-back to E_N (degree <= 2 on the divisor line)
  std::vector<Scalar> restricted_field;
  bool restriction_degree_ok = true;
  bool nilpotent_checked = false;
  bool nilpotent_single_singularity = false;
};

// Iterate (strict transform, translated pull-back) until the pulled-back
// field is regular at the point of interest. Throws InvariantSuspected when
// max_depth is exceeded.
SharedPath shared_path(const VectorField& X, const PuiseuxParam& p, long max_depth);

long default_max_depth(const PuiseuxParam& p);

// (Gamma, Gamma_eps) = sum_{i<N} n_i^2.
long noether_intersection(const SharedPath& path);
// n_{N-1} + sum_{j=1}^{N-1} n_j; equals the contact exponent.
long contact_from_path(const SharedPath& path);
// n_{N-1} + sum_{j=0}^{N-1} n_j; equals upsilon of the dual form.
long upsilon_from_path(const SharedPath& path);

}  // namespace branchflow
