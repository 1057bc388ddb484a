#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "branchflow/series.hpp"

namespace branchflow {

// Truncated bivariate polynomial over Scalar, sparse in (deg_x, deg_y), with
// total-degree truncation. trunc == kUnbounded is the exact polynomial mode
// used by implicitization and the blow-up engine.
class BiPoly {
 public:
  using Key = std::pair<long, long>;

  std::map<Key, Scalar> terms;
  long trunc = kUnbounded;

  BiPoly() = default;
  explicit BiPoly(long trunc_) : trunc(trunc_) {}

  static BiPoly zero(long trunc_ = kUnbounded) { return BiPoly(trunc_); }
  static BiPoly constant(Scalar c, long trunc_ = kUnbounded) {
    return monomial(0, 0, std::move(c), trunc_);
  }
  static BiPoly monomial(long i, long j, Scalar c, long trunc_ = kUnbounded) {
    BiPoly p(trunc_);
    if (!c.is_zero() && i + j < trunc_) p.terms.emplace(Key{i, j}, std::move(c));
    return p;
  }
  static BiPoly x() { return monomial(1, 0, Scalar(1)); }
  static BiPoly y() { return monomial(0, 1, Scalar(1)); }

  bool known_zero() const { return terms.empty(); }
  bool is_polynomial() const { return trunc >= kUnbounded; }

  Ord ord() const;
  long ord_lb() const;
  Scalar coeff(long i, long j) const;
  void set_coeff(long i, long j, Scalar c);
  BiPoly& truncate(long D);
  long max_degree() const;

  BiPoly operator-() const;
  friend BiPoly operator+(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator-(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const Scalar& c, const BiPoly& p);

  BiPoly deriv_x() const;
  BiPoly deriv_y() const;

  // f(x, x*y): the x-chart blow-up substitution (monomial remap (i,j)->(i+j,j)).
  BiPoly subst_x_xy() const;
  // f(x*y, y): the y-chart substitution ((i,j)->(i,i+j)).
  BiPoly subst_xy_y() const;
  // Exact division by x (resp. y); throws when not divisible.
  BiPoly divide_x() const;
  BiPoly divide_y() const;
  // f(x, y + c) / f(x + c, y); exact polynomials only.
  BiPoly translate_y(const Scalar& c) const;
  BiPoly translate_x(const Scalar& c) const;
  BiPoly swap_xy() const;

  // Restriction to an axis as a dense univariate coefficient vector.
  std::vector<Scalar> restrict_x0() const;  // f(0, z)
  std::vector<Scalar> restrict_y0() const;  // f(z, 0)

  bool operator==(const BiPoly& b) const { return trunc == b.trunc && terms == b.terms; }

  std::string to_string() const;
};

// f evaluated at a pair of series with positive order (pullback along a
// parametrization). Coefficients lift into the ring R.
template <class R>
Series<R> compose(const BiPoly& f, const Series<R>& xs, const Series<R>& ys) {
  long d1 = std::max(xs.ord_lb(), 1L);
  long d2 = std::max(ys.ord_lb(), 1L);
  if ((!xs.terms.empty() && xs.terms.begin()->first < 1) ||
      (!ys.terms.empty() && ys.terms.begin()->first < 1))
    throw MathError(Errc::BadInput, "pullback along a series of order 0");

  long bound = ord_mul(f.trunc, std::min(d1, d2));
  for (const auto& [k, c] : f.terms) {
    auto [i, j] = k;
    if (i >= 1) bound = std::min(bound, ord_add(ord_add(ord_mul(i - 1, d1), ord_mul(j, d2)), xs.trunc));
    if (j >= 1) bound = std::min(bound, ord_add(ord_add(ord_mul(i, d1), ord_mul(j - 1, d2)), ys.trunc));
  }

  std::vector<Series<R>> xp{Series<R>::monomial(0, R(Scalar(1)), bound)};
  std::vector<Series<R>> yp{Series<R>::monomial(0, R(Scalar(1)), bound)};
  auto power = [bound](std::vector<Series<R>>& cache, const Series<R>& base, long e) {
    while ((long)cache.size() <= e) {
      Series<R> nxt = cache.back() * base;
      nxt.truncate(std::min(nxt.trunc, bound));
      cache.push_back(std::move(nxt));
    }
    return cache[e];
  };

  Series<R> acc(bound);
  for (const auto& [k, c] : f.terms) {
    auto [i, j] = k;
    if (ord_add(ord_mul(i, d1), ord_mul(j, d2)) >= bound) continue;
    Series<R> term = power(xp, xs, i) * power(yp, ys, j);
    acc = acc + R(c) * term;
  }
  acc.trunc = std::min(acc.trunc, bound);
  acc.truncate(acc.trunc);
  return acc;
}

// f(u(x,y), v(x,y)) truncated at total degree cap; u, v without constant term.
BiPoly compose_bipoly(const BiPoly& f, const BiPoly& u, const BiPoly& v, long cap);

}  // namespace branchflow
