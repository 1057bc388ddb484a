#pragma once

#include <optional>
#include <sstream>
#include <vector>

#include "branchflow/scalar.hpp"
#include "branchflow/series.hpp"

namespace branchflow {

// Element of Q(zeta_L)[eps]/(eps^{cap+1}): the coefficient ring for formal
// flow deformations. cap = kUnbounded marks an exact polynomial (constants
// embedded from Scalar); mixed-cap arithmetic truncates to the smaller cap.
class EpsPoly {
 public:
  EpsPoly() = default;
  explicit EpsPoly(Scalar c) : c_{std::move(c)} { trim_(); }
  EpsPoly(std::vector<Scalar> c, long cap) : c_(std::move(c)), cap_(cap) {
    if ((long)c_.size() > cap_ + 1) c_.resize(cap_ + 1);
    trim_();
  }

  static EpsPoly eps(long cap) {
    std::vector<Scalar> v(2);
    v[1] = Scalar(1);
    return EpsPoly(std::move(v), cap);
  }

  long cap() const { return cap_; }
  long degree() const { return (long)c_.size() - 1; }  // -1 for zero
  Scalar coeff(long j) const { return j < (long)c_.size() ? c_[j] : Scalar(0); }
  Scalar constant_term() const { return coeff(0); }

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }

  EpsPoly operator-() const {
    EpsPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend EpsPoly operator+(const EpsPoly& a, const EpsPoly& b) {
    EpsPoly r;
    r.cap_ = std::min(a.cap_, b.cap_);
    r.c_.resize(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < r.c_.size(); ++i) {
      if (i < a.c_.size()) r.c_[i] += a.c_[i];
      if (i < b.c_.size()) r.c_[i] += b.c_[i];
    }
    if ((long)r.c_.size() > r.cap_ + 1) r.c_.resize(r.cap_ + 1);
    r.trim_();
    return r;
  }
  friend EpsPoly operator-(const EpsPoly& a, const EpsPoly& b) { return a + (-b); }
  friend EpsPoly operator*(const EpsPoly& a, const EpsPoly& b) {
    EpsPoly r;
    r.cap_ = std::min(a.cap_, b.cap_);
    if (a.is_zero() || b.is_zero()) return r;
    long n = std::min((long)(a.c_.size() + b.c_.size()) - 1, r.cap_ >= kUnbounded
                                                                 ? (long)(a.c_.size() + b.c_.size()) - 1
                                                                 : r.cap_ + 1);
    r.c_.assign(n, Scalar(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size() && (long)(i + j) < n; ++j) {
        if (b.c_[j].is_zero()) continue;
        r.c_[i + j] += a.c_[i] * b.c_[j];
      }
    }
    r.trim_();
    return r;
  }

  // Inverse of a unit (nonzero constant term), by triangular solve.
  EpsPoly inverse() const {
    if (is_zero() || c_[0].is_zero())
      throw MathError(Errc::DivisionByZero, "eps-polynomial is not a unit");
    if (cap_ >= kUnbounded && c_.size() > 1)
      throw MathError(Errc::Internal, "inverse of a non-constant exact eps-polynomial");
    long n = is_constant() ? 1 : cap_ + 1;
    std::vector<Scalar> inv(n);
    Scalar i0 = c_[0].inverse();
    inv[0] = i0;
    for (long k = 1; k < n; ++k) {
      Scalar acc;
      for (long j = 1; j <= k && j < (long)c_.size(); ++j) acc += c_[j] * inv[k - j];
      inv[k] = -(i0 * acc);
    }
    return EpsPoly(std::move(inv), cap_);
  }

  // n-th root: deterministic Scalar branch on the constant term, then a
  // unique triangular lift. nullopt when the constant term has no root.
  std::optional<EpsPoly> nth_root(long n) const {
    if (is_zero()) return *this;
    std::optional<Scalar> r0 = c_[0].nth_root(n);
    if (!r0) return std::nullopt;
    if (is_constant()) return EpsPoly(std::vector<Scalar>{*r0}, cap_);
    if (r0->is_zero()) return std::nullopt;  // lift needs a unit
    long m = cap_ >= kUnbounded ? degree() + 1 : cap_ + 1;
    // w = r0 * (1 + f)^{1/n} with f = this/c0 - 1
    EpsPoly f = (*this) * EpsPoly(c_[0].inverse()) - EpsPoly(Scalar(1));
    std::vector<Scalar> h(m);
    h[0] = Scalar(1);
    mpq_class alpha(1, n);
    for (long j = 1; j < m; ++j) {
      Scalar acc;
      for (long i = 1; i <= j && i < (long)f.c_.size(); ++i) {
        if (f.c_[i].is_zero()) continue;
        mpq_class w = alpha * i - (j - i);
        if (w == 0) continue;
        acc += Scalar(w) * f.c_[i] * h[j - i];
      }
      h[j] = Scalar(mpq_class(1, j)) * acc;
    }
    return EpsPoly(*r0) * EpsPoly(std::move(h), cap_);
  }

  bool operator==(const EpsPoly& b) const {
    size_t n = std::max(c_.size(), b.c_.size());
    for (size_t i = 0; i < n; ++i)
      if (!(coeff(i) == b.coeff(i))) return false;
    return true;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << c_[i].to_string() << ")";
      if (i >= 1) os << "*eps^" << i;
    }
    return os.str();
  }

 private:
  std::vector<Scalar> c_;  // c_[j] is the eps^j coefficient; no trailing zeros
  long cap_ = kUnbounded;

  void trim_() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
};

using EpsSeries = Series<EpsPoly>;

}  // namespace branchflow
