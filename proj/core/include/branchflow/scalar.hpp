#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "branchflow/errors.hpp"

namespace branchflow {

// Exact element of the cyclotomic field Q(zeta_L), stored as the canonical
// residue modulo the L-th cyclotomic polynomial: a vector of phi(L) rationals,
// each in lowest terms. Equality of canonical representatives is coefficient-wise.
//
// L = 1 is the plain-rational fast path; rationals embed into any Q(zeta_L),
// and arithmetic silently promotes an operand whose order divides the other's.
// Anything else is a FieldMismatch error.
class Scalar {
 public:
  Scalar() : order_(1), c_(1) {}
  explicit Scalar(long v) : order_(1), c_(1, mpq_class(v)) {}
  explicit Scalar(const mpq_class& v) : order_(1), c_(1, v) {}
  Scalar(const mpq_class& v, long order);

  static Scalar zero(long order);
  static Scalar one(long order);
  // zeta_order^k, canonically reduced.
  static Scalar root_of_unity(long k, long order);

  long order() const { return order_; }
  bool is_zero() const;
  bool is_one() const;
  // True when all non-constant coordinates vanish.
  bool is_rational() const;
  const mpq_class& rational_part() const { return c_[0]; }
  const std::vector<mpq_class>& coords() const { return c_; }

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  Scalar inverse() const;
  Scalar pow(long e) const;

  // n-th root under the documented deterministic branch: candidates are
  // q * zeta_L^k with q a positive rational, tried with k ascending from 0.
  // nullopt when no candidate of that shape exists in the field.
  std::optional<Scalar> nth_root(long n) const;

  // Representation in Q(zeta_order) for a multiple `order` of this->order().
  Scalar promoted(long order) const;

  bool operator==(const Scalar& b) const;
  bool operator!=(const Scalar& b) const { return !(*this == b); }

  // Text grammar (L implicit from context):
  //   value := term (('+'|'-') term)*
  //   term  := rat | rat '*z^' k | 'z^' k | '-z^' k
  //   rat   := ['-'] digits ['/' digits]
  // to_string always emits the canonical ascending-power form; parse accepts
  // whitespace between tokens. Round-trips exactly under a fixed L.
  std::string to_string() const;
  static Scalar parse(std::string_view text, long order);

  // Display-only numeric value.
  std::complex<double> approx() const;

 private:
  long order_;
  std::vector<mpq_class> c_;  // size phi(order_)

  void reduce_tail_(std::vector<mpq_class>& raw) const;
  friend struct FieldContext;
};

long euler_phi(long n);

}  // namespace branchflow
