#pragma once

#include <vector>

#include "branchflow/bipoly.hpp"
#include "branchflow/puiseux.hpp"

namespace branchflow {

// Singular plane vector field A d/dx + B d/dy.
struct VectorField {
  BiPoly A, B;
};

// P dx + Q dy.
struct OneForm {
  BiPoly P, Q;
};

inline OneForm dual_form(const VectorField& X) { return {-X.B, X.A}; }

bool is_singular(const VectorField& X);
long multiplicity(const VectorField& X);

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator*(const Scalar& c, const VectorField& X);

// X(f) = A f_x + B f_y.
BiPoly apply_to(const VectorField& X, const BiPoly& f);

// upsilon_Gamma(omega) = ord_t(P(phi) x' + Q(phi) y') + 1.
Ord upsilon(const OneForm& w, const PuiseuxParam& p);

// Contact exponent via its valuative characterization upsilon(dual) - n.
// Inexact result means "invariant up to truncation".
Ord contact_exponent(const VectorField& X, const PuiseuxParam& p);

// (X(f), f) with f the implicit equation; needs polynomial y data.
Ord tangency_order(const VectorField& X, const PuiseuxParam& p);
// Orders (X^k(f), f) for k = 1..kmax.
std::vector<Ord> iterated_tangency(const VectorField& X, const PuiseuxParam& p, long kmax);

bool is_nilpotent(const VectorField& X);
// Relative preparation: dA/dy(0,0) = 0 or dB/dx(0,0) = 0; the tangent cone of
// p must be y = 0.
bool is_prepared(const VectorField& X, const PuiseuxParam& p);

// Polynomial jet of a diffeomorphism: images of x and y, exact to total
// degree `order`.
struct JetDiffeo {
  BiPoly fx, fy;
  long order = 0;
};

JetDiffeo identity_jet(long order);
bool is_unipotent(const JetDiffeo& d);

// N-jet of the time-1 flow of a nilpotent field: sum X^j / j! on coordinates.
// The iteration is capped at (N+1)(N+2) terms; hitting the cap means the
// field was not nilpotent.
JetDiffeo jet_exp(const VectorField& X, long order);

// Inverse of jet_exp on unipotent jets, via the logarithm of the pullback
// operator g -> g o Phi on the jet algebra.
VectorField jet_log(const JetDiffeo& d);

// Composition of a polynomial diffeomorphism jet with a parametrization,
// renormalized back to the (t^n, ...) shape.
PuiseuxParam apply_diffeo(const JetDiffeo& d, const PuiseuxParam& p);

}  // namespace branchflow
