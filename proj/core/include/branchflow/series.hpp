#pragma once

#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "branchflow/errors.hpp"
#include "branchflow/scalar.hpp"

namespace branchflow {

// Exponent value standing for "no truncation": polynomial / exact data.
constexpr long kUnbounded = (1L << 40);

inline long ord_add(long a, long b) {
  if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
  long s = a + b;
  return s >= kUnbounded ? kUnbounded : s;
}
inline long ord_mul(long a, long b) {
  if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
  if (b != 0 && a > kUnbounded / b) return kUnbounded;
  return a * b;
}

// Order of a series: either known exactly, or only known to be >= value
// because every stored coefficient below the truncation vanished. AtLeast is
// a legitimate result (invariant curves have infinite contact), not an error.
struct Ord {
  long value = 0;
  bool exact = true;

  static Ord exactly(long v) { return {v, true}; }
  static Ord at_least(long v) { return {v, false}; }
  bool operator==(const Ord& o) const = default;
};

inline std::string to_string(const Ord& o) {
  return o.exact ? std::to_string(o.value) : ">=" + std::to_string(o.value);
}

// Truncated power series in one variable over a coefficient ring R.
// Invariants: no stored zero coefficients, no exponent >= trunc, exponents >= 0.
// R must provide ring ops, is_zero(), inverse(), nth_root(n), and be
// constructible from Scalar.
template <class R>
struct Series {
  std::map<long, R> terms;
  long trunc = kUnbounded;

  Series() = default;
  explicit Series(long trunc_) : trunc(trunc_) {}

  static Series zero(long trunc_ = kUnbounded) { return Series(trunc_); }
  static Series monomial(long e, R c, long trunc_ = kUnbounded) {
    Series s(trunc_);
    if (e < trunc_ && !c.is_zero()) s.terms.emplace(e, std::move(c));
    return s;
  }
  // the identity parameter t
  static Series t(long trunc_ = kUnbounded) { return monomial(1, R(Scalar(1)), trunc_); }

  bool known_zero() const { return terms.empty(); }

  Ord ord() const {
    if (terms.empty()) return Ord::at_least(trunc);
    return Ord::exactly(terms.begin()->first);
  }
  // Lower bound for the order, usable for truncation bookkeeping.
  long ord_lb() const { return terms.empty() ? trunc : terms.begin()->first; }

  R coeff(long e) const {
    auto it = terms.find(e);
    return it == terms.end() ? R() : it->second;
  }

  void set_coeff(long e, R c) {
    if (e >= trunc) return;
    if (c.is_zero())
      terms.erase(e);
    else
      terms[e] = std::move(c);
  }

  Series& truncate(long K) {
    trunc = std::min(trunc, K);
    terms.erase(terms.lower_bound(trunc), terms.end());
    return *this;
  }

  std::string to_string(const std::string& var = "t") const {
    if (terms.empty()) return "0 + O(" + var + "^" + std::to_string(trunc) + ")";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.to_string() << ")*" << var << "^" << e;
    }
    if (trunc < kUnbounded) os << " + O(" << var << "^" << trunc << ")";
    return os.str();
  }
};

template <class R>
Series<R> operator+(const Series<R>& a, const Series<R>& b) {
  Series<R> r(std::min(a.trunc, b.trunc));
  r.terms = a.terms;
  for (const auto& [e, c] : b.terms) {
    auto [it, fresh] = r.terms.emplace(e, c);
    if (!fresh) it->second = it->second + c;
  }
  r.truncate(r.trunc);
  for (auto it = r.terms.begin(); it != r.terms.end();)
    it = it->second.is_zero() ? r.terms.erase(it) : std::next(it);
  return r;
}

template <class R>
Series<R> operator-(const Series<R>& a) {
  Series<R> r = a;
  for (auto& [e, c] : r.terms) c = -c;
  return r;
}

template <class R>
Series<R> operator-(const Series<R>& a, const Series<R>& b) {
  return a + (-b);
}

template <class R>
Series<R> operator*(const Series<R>& a, const Series<R>& b) {
  if (a.terms.empty() && a.trunc >= kUnbounded) return Series<R>::zero();
  if (b.terms.empty() && b.trunc >= kUnbounded) return Series<R>::zero();
  long t = std::min(ord_add(a.trunc, b.ord_lb()), ord_add(b.trunc, a.ord_lb()));
  Series<R> r(t);
  for (const auto& [i, ci] : a.terms) {
    if (i >= t) break;
    for (const auto& [j, cj] : b.terms) {
      long e = i + j;
      if (e >= t) break;
      R p = ci * cj;
      if (p.is_zero()) continue;
      auto [it, fresh] = r.terms.emplace(e, p);
      if (!fresh) it->second = it->second + p;
    }
  }
  for (auto it = r.terms.begin(); it != r.terms.end();)
    it = it->second.is_zero() ? r.terms.erase(it) : std::next(it);
  return r;
}

template <class R>
Series<R> operator*(const R& c, const Series<R>& s) {
  Series<R> r(s.trunc);
  if (c.is_zero()) return r;
  for (const auto& [e, v] : s.terms) {
    R p = c * v;
    if (!p.is_zero()) r.terms.emplace(e, p);
  }
  return r;
}

// Multiply by t^k (k may be negative; then exact divisibility is required).
template <class R>
Series<R> shifted(const Series<R>& s, long k) {
  Series<R> r(ord_add(s.trunc, k));
  for (const auto& [e, c] : s.terms) {
    if (e + k < 0) throw MathError(Errc::Internal, "inexact shift of a series");
    r.terms.emplace(e + k, c);
  }
  return r;
}

template <class R>
Series<R> derivative(const Series<R>& s) {
  Series<R> r(s.trunc >= kUnbounded ? kUnbounded : s.trunc - 1);
  for (const auto& [e, c] : s.terms) {
    if (e == 0) continue;
    R p = R(Scalar(e)) * c;
    if (!p.is_zero()) r.terms.emplace(e - 1, p);
  }
  return r;
}

template <class R>
Series<R> pow(const Series<R>& s, long k) {
  Series<R> acc = Series<R>::monomial(0, R(Scalar(1)));
  Series<R> base = s;
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

// (1 + f)^{p/q} for ord(f) >= 1, by the first-order recurrence
// j h_j = sum_{i<=j} (i p/q - (j-i)) f_i h_{j-i}.
template <class R>
Series<R> pow_rational_unit(const Series<R>& f, const mpq_class& alpha, long cap) {
  if (f.ord_lb() < 1) throw MathError(Errc::Internal, "pow_rational_unit needs ord >= 1");
  long T = std::min(cap, f.trunc);
  Series<R> h(T);
  if (T <= 0) return h;
  std::map<long, R> hc;
  hc[0] = R(Scalar(1));
  for (long j = 1; j < T; ++j) {
    R acc;
    for (const auto& [i, fi] : f.terms) {
      if (i > j) break;
      auto it = hc.find(j - i);
      if (it == hc.end()) continue;
      mpq_class w = alpha * i - (j - i);
      if (w == 0) continue;
      acc = acc + R(Scalar(w)) * (fi * it->second);
    }
    if (!acc.is_zero()) hc[j] = R(Scalar(mpq_class(1, j))) * acc;
  }
  for (auto& [e, c] : hc)
    if (!c.is_zero()) h.terms.emplace(e, c);
  return h;
}

// Reciprocal of a unit series (ord 0 with invertible constant coefficient).
template <class R>
Series<R> inverse_unit(const Series<R>& s) {
  if (s.ord_lb() != 0) throw MathError(Errc::DivisionByZero, "series has no constant term");
  R c0 = s.terms.begin()->second;
  R inv0 = c0.inverse();
  Series<R> f = (inv0 * s) - Series<R>::monomial(0, R(Scalar(1)), s.trunc);
  f.truncate(s.trunc);
  Series<R> g = pow_rational_unit(f, mpq_class(-1), s.trunc);
  return inv0 * g;
}

// Substitution outer(inner); ord(inner) >= 1 required.
template <class R>
Series<R> compose(const Series<R>& outer, const Series<R>& inner) {
  if (!inner.terms.empty() && inner.terms.begin()->first < 1)
    throw MathError(Errc::BadInput, "composition with a series of order 0");
  long d = std::max(inner.ord_lb(), 1L);
  long bound = ord_mul(outer.trunc, d);
  long e1 = kUnbounded;  // least positive exponent of outer
  for (const auto& [e, c] : outer.terms)
    if (e >= 1) {
      e1 = e;
      break;
    }
  if (e1 < kUnbounded) bound = std::min(bound, ord_add(ord_mul(e1 - 1, d), inner.trunc));

  Series<R> acc(bound);
  long prev = 0;
  for (auto it = outer.terms.rbegin(); it != outer.terms.rend(); ++it) {
    if (prev != 0) acc = acc * pow(inner, prev - it->first);
    acc = acc + Series<R>::monomial(0, it->second);
    prev = it->first;
  }
  if (prev != 0) acc = acc * pow(inner, prev);
  acc.trunc = std::min(acc.trunc, bound);
  acc.truncate(acc.trunc);
  return acc;
}

// Compositional inverse of s with ord(s) = 1, via Lagrange's formula
// r_k = [t^{k-1}] (t/s)^k / k.
template <class R>
Series<R> invert_param(const Series<R>& s) {
  if (s.ord().exact == false || s.ord().value != 1)
    throw MathError(Errc::BadInput, "compositional inverse needs order exactly 1");
  long T = s.trunc;
  // t/s = 1/(s1 (1 + g))
  R s1 = s.terms.begin()->second;
  Series<R> unit = shifted(s, -1);
  Series<R> p = inverse_unit(unit);
  if (T >= kUnbounded) T = kUnbounded;
  Series<R> r(T);
  Series<R> pk = Series<R>::monomial(0, R(Scalar(1)));
  for (long k = 1; k < T && k < kUnbounded; ++k) {
    pk = pk * p;
    pk.truncate(T);
    R ck = pk.coeff(k - 1);
    if (!ck.is_zero()) r.terms.emplace(k, R(Scalar(mpq_class(1, k))) * ck);
    if (pk.terms.empty()) break;
  }
  return r;
}

// r with r^n = a, when ord(a) is exact, divisible by n, and the leading
// coefficient has an n-th root in the ring.
template <class R>
Series<R> nth_root_series(const Series<R>& a, long n) {
  if (n < 1) throw MathError(Errc::BadInput, "root index must be >= 1");
  Ord o = a.ord();
  if (!o.exact)
    throw MathError(Errc::TruncationExhausted, "series root of a series with unknown order");
  if (o.value % n != 0)
    throw MathError(Errc::NotRepresentable,
                    "series order " + std::to_string(o.value) + " not divisible by " +
                        std::to_string(n));
  R lead = a.terms.begin()->second;
  std::optional<R> w0 = lead.nth_root(n);
  if (!w0)
    throw MathError(Errc::NotRepresentable, "leading coefficient has no n-th root in the field");
  Series<R> unit = shifted(a, -o.value);
  Series<R> f = lead.inverse() * unit - Series<R>::monomial(0, R(Scalar(1)), unit.trunc);
  f.truncate(unit.trunc);
  Series<R> w = *w0 * pow_rational_unit(f, mpq_class(1, n), unit.trunc);
  return shifted(w, o.value / n);
}

template <class R>
bool equal_mod_trunc(const Series<R>& a, const Series<R>& b) {
  long K = std::min(a.trunc, b.trunc);
  for (const auto& [e, c] : a.terms)
    if (e < K && !(b.coeff(e) == c)) return false;
  for (const auto& [e, c] : b.terms)
    if (e < K && a.terms.find(e) == a.terms.end() && !c.is_zero()) return false;
  return true;
}

using TSeries = Series<Scalar>;

}  // namespace branchflow
