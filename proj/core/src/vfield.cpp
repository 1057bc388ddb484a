#include "branchflow/vfield.hpp"

namespace branchflow {

bool is_singular(const VectorField& X) {
  return X.A.ord_lb() >= 1 && X.B.ord_lb() >= 1 &&
         X.A.coeff(0, 0).is_zero() && X.B.coeff(0, 0).is_zero();
}

long multiplicity(const VectorField& X) {
  return std::min(X.A.ord_lb(), X.B.ord_lb());
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  return {a.A + b.A, a.B + b.B};
}

VectorField operator*(const Scalar& c, const VectorField& X) {
  return {c * X.A, c * X.B};
}

BiPoly apply_to(const VectorField& X, const BiPoly& f) {
  return X.A * f.deriv_x() + X.B * f.deriv_y();
}

Ord upsilon(const OneForm& w, const PuiseuxParam& p) {
  check_valid(p);
  TSeries xs = TSeries::monomial(p.n, Scalar(1), p.trunc());
  TSeries xdot = derivative(xs);
  TSeries ydot = derivative(p.y);
  TSeries pull = compose(w.P, xs, p.y) * xdot + compose(w.Q, xs, p.y) * ydot;
  Ord o = pull.ord();
  return {o.value + 1, o.exact};
}

Ord contact_exponent(const VectorField& X, const PuiseuxParam& p) {
  if (!is_singular(X)) throw MathError(Errc::BadInput, "contact exponent needs a singular field");
  Ord u = upsilon(dual_form(X), p);
  return {u.value - p.n, u.exact};
}

Ord tangency_order(const VectorField& X, const PuiseuxParam& p) {
  BiPoly f = implicitize(p);
  return intersection(p, apply_to(X, f));
}

std::vector<Ord> iterated_tangency(const VectorField& X, const PuiseuxParam& p, long kmax) {
  BiPoly f = implicitize(p);
  std::vector<Ord> out;
  BiPoly g = f;
  for (long k = 1; k <= kmax; ++k) {
    g = apply_to(X, g);
    out.push_back(intersection(p, g));
  }
  return out;
}

bool is_nilpotent(const VectorField& X) {
  if (!is_singular(X)) return false;
  Scalar a10 = X.A.coeff(1, 0), a01 = X.A.coeff(0, 1);
  Scalar b10 = X.B.coeff(1, 0), b01 = X.B.coeff(0, 1);
  Scalar tr = a10 + b01;
  Scalar det = a10 * b01 - a01 * b10;
  return tr.is_zero() && det.is_zero();
}

bool is_prepared(const VectorField& X, const PuiseuxParam& p) {
  Ord m = first_exponent(p);
  if (m.exact && m.value == p.n)
    throw MathError(Errc::BadInput, "preparation test needs tangent cone y = 0");
  return X.A.coeff(0, 1).is_zero() || X.B.coeff(1, 0).is_zero();
}

JetDiffeo identity_jet(long order) {
  return {BiPoly::x().truncate(order + 1), BiPoly::y().truncate(order + 1), order};
}

bool is_unipotent(const JetDiffeo& d) {
  Scalar a = d.fx.coeff(1, 0), b = d.fx.coeff(0, 1);
  Scalar c = d.fy.coeff(1, 0), e = d.fy.coeff(0, 1);
  // both eigenvalues 1: trace 2, determinant 1
  return (a + e == Scalar(2)) && (a * e - b * c == Scalar(1)) &&
         d.fx.coeff(0, 0).is_zero() && d.fy.coeff(0, 0).is_zero();
}

JetDiffeo jet_exp(const VectorField& X, long order) {
  if (!is_nilpotent(X))
    throw MathError(Errc::NotNilpotent, "jet exponential needs a nilpotent field");
  long cap = order + 1;
  JetDiffeo d;
  d.order = order;
  BiPoly gx = BiPoly::x().truncate(cap);
  BiPoly gy = BiPoly::y().truncate(cap);
  d.fx = gx;
  d.fy = gy;
  mpq_class fact(1);
  long hard_cap = (order + 1) * (order + 2);
  for (long j = 1; j <= hard_cap; ++j) {
    gx = apply_to(X, gx).truncate(cap);
    gy = apply_to(X, gy).truncate(cap);
    if (gx.known_zero() && gy.known_zero()) return d;
    fact *= j;
    Scalar inv_fact{mpq_class(1) / fact};
    d.fx = d.fx + inv_fact * gx;
    d.fy = d.fy + inv_fact * gy;
  }
  throw MathError(Errc::NotNilpotent, "flow series did not terminate on the jet space");
}

VectorField jet_log(const JetDiffeo& d) {
  if (!is_unipotent(d))
    throw MathError(Errc::NotUnipotent, "jet logarithm needs a unipotent diffeomorphism");
  long cap = d.order + 1;
  // U(g) = g o Phi - g is nilpotent on the jet algebra; log(Id + U) on x, y.
  auto U = [&](const BiPoly& g) {
    return (compose_bipoly(g, d.fx, d.fy, cap) - g).truncate(cap);
  };
  BiPoly hx = (d.fx - BiPoly::x()).truncate(cap);
  BiPoly hy = (d.fy - BiPoly::y()).truncate(cap);
  BiPoly ax = BiPoly::zero(cap), ay = BiPoly::zero(cap);
  long hard_cap = (d.order + 1) * (d.order + 2);
  long sign = 1;
  for (long k = 1; k <= hard_cap; ++k) {
    Scalar w{mpq_class(sign, k)};
    ax = ax + w * hx;
    ay = ay + w * hy;
    hx = U(hx);
    hy = U(hy);
    sign = -sign;
    if (hx.known_zero() && hy.known_zero()) {
      return {ax, ay};
    }
  }
  throw MathError(Errc::NotUnipotent, "logarithm series did not terminate on the jet space");
}

PuiseuxParam apply_diffeo(const JetDiffeo& d, const PuiseuxParam& p) {
  check_valid(p);
  TSeries xs = TSeries::monomial(p.n, Scalar(1), p.trunc());
  TSeries u = compose(d.fx, xs, p.y);
  TSeries v = compose(d.fy, xs, p.y);
  Ord ou = u.ord();
  if (!ou.exact || ou.value != p.n)
    throw MathError(Errc::TangentConeViolation,
                    "diffeomorphism moves the tangent line onto the OY axis");
  TSeries sigma = nth_root_series(u, p.n);
  TSeries tau = invert_param(sigma);
  PuiseuxParam out;
  out.n = p.n;
  out.y = compose(v, tau);
  check_valid(out);
  return out;
}

}  // namespace branchflow
