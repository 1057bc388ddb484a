#include "branchflow/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace branchflow {

namespace {

// Integer-coefficient cyclotomic polynomial Phi_n, monic, ascending degrees.
std::vector<mpz_class> cyclotomic_poly(long n);

// Exact division of integer polynomials; throws on nonzero remainder.
std::vector<mpz_class> exact_div(std::vector<mpz_class> num, const std::vector<mpz_class>& den) {
  while (!num.empty() && num.back() == 0) num.pop_back();
  std::vector<mpz_class> q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0);
  for (long i = (long)num.size() - (long)den.size(); i >= 0; --i) {
    mpz_class lead = num[i + den.size() - 1];
    if (lead == 0) continue;
    if (!mpz_divisible_p(lead.get_mpz_t(), den.back().get_mpz_t()))
      throw MathError(Errc::Internal, "cyclotomic division not exact");
    mpz_class c = lead / den.back();
    q[i] = c;
    for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
  }
  for (const auto& r : num)
    if (r != 0) throw MathError(Errc::Internal, "cyclotomic division remainder");
  return q;
}

std::vector<mpz_class> cyclotomic_poly(long n) {
  // x^n - 1 divided by Phi_d over proper divisors d.
  std::vector<mpz_class> p(n + 1);
  p[0] = -1;
  p[n] = 1;
  for (long d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    p = exact_div(std::move(p), cyclotomic_poly(d));
  }
  return p;
}

}  // namespace

long euler_phi(long n) {
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

struct FieldContext {
  long order;
  long phi;
  std::vector<mpz_class> cyclo;  // Phi_order, monic, degree phi

  explicit FieldContext(long L) : order(L), phi(euler_phi(L)), cyclo(cyclotomic_poly(L)) {}

  static const FieldContext& get(long L) {
    static std::mutex mu;
    static std::map<long, std::unique_ptr<FieldContext>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(L);
    if (it == cache.end())
      it = cache.emplace(L, std::make_unique<FieldContext>(L)).first;
    return *it->second;
  }

  // Reduce a raw coefficient vector (any length) modulo Phi_order.
  std::vector<mpq_class> reduce(const std::vector<mpq_class>& raw) const {
    std::vector<mpq_class> work = raw;
    if ((long)work.size() < phi) work.resize(phi);
    for (long d = (long)work.size() - 1; d >= phi; --d) {
      if (work[d] == 0) continue;
      mpq_class c = work[d];
      work[d] = 0;
      for (long i = 0; i < phi; ++i)
        if (cyclo[i] != 0) work[d - phi + i] -= c * cyclo[i];
    }
    work.resize(phi);
    return work;
  }
};

Scalar::Scalar(const mpq_class& v, long order) : order_(order) {
  if (order < 1) throw MathError(Errc::BadInput, "field order must be positive");
  c_.assign(euler_phi(order), mpq_class(0));
  c_[0] = v;
}

Scalar Scalar::zero(long order) { return Scalar(mpq_class(0), order); }
Scalar Scalar::one(long order) { return Scalar(mpq_class(1), order); }

Scalar Scalar::root_of_unity(long k, long order) {
  if (order < 1) throw MathError(Errc::BadInput, "field order must be positive");
  const FieldContext& ctx = FieldContext::get(order);
  k %= order;
  if (k < 0) k += order;
  std::vector<mpq_class> raw(k + 1);
  raw[k] = 1;
  Scalar s;
  s.order_ = order;
  s.c_ = ctx.reduce(raw);
  return s;
}

bool Scalar::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const mpq_class& q) { return q == 0; });
}

bool Scalar::is_one() const {
  if (c_[0] != 1) return false;
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

bool Scalar::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Scalar Scalar::promoted(long order) const {
  if (order == order_) return *this;
  if (order % order_ != 0)
    throw MathError(Errc::FieldMismatch, "cannot embed Q(zeta_" + std::to_string(order_) +
                                             ") into Q(zeta_" + std::to_string(order) + ")");
  const FieldContext& ctx = FieldContext::get(order);
  long m = order / order_;
  // zeta_{order_}^i = zeta_order^{m i}
  std::vector<mpq_class> raw(m * (c_.size() ? c_.size() - 1 : 0) + 1);
  for (size_t i = 0; i < c_.size(); ++i) raw[m * i] = c_[i];
  Scalar s;
  s.order_ = order;
  s.c_ = ctx.reduce(raw);
  return s;
}

namespace {
inline void align(const Scalar& a, const Scalar& b, Scalar& pa, Scalar& pb) {
  if (a.order() == b.order()) {
    pa = a;
    pb = b;
  } else if (b.order() % a.order() == 0) {
    pa = a.promoted(b.order());
    pb = b;
  } else if (a.order() % b.order() == 0) {
    pa = a;
    pb = b.promoted(a.order());
  } else {
    throw MathError(Errc::FieldMismatch,
                    "mixed field orders " + std::to_string(a.order()) + " and " +
                        std::to_string(b.order()));
  }
}
}  // namespace

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  Scalar x, y;
  align(a, b, x, y);
  for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
  return x;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  Scalar x, y;
  align(a, b, x, y);
  for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
  return x;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar x, y;
  align(a, b, x, y);
  if (y.is_rational()) {
    for (auto& q : x.c_) q *= y.c_[0];
    return x;
  }
  if (x.is_rational()) {
    for (auto& q : y.c_) q *= x.c_[0];
    return y;
  }
  const FieldContext& ctx = FieldContext::get(x.order_);
  std::vector<mpq_class> raw(2 * x.c_.size() - 1);
  for (size_t i = 0; i < x.c_.size(); ++i) {
    if (x.c_[i] == 0) continue;
    for (size_t j = 0; j < y.c_.size(); ++j) {
      if (y.c_[j] == 0) continue;
      raw[i + j] += x.c_[i] * y.c_[j];
    }
  }
  Scalar r;
  r.order_ = x.order_;
  r.c_ = ctx.reduce(raw);
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw MathError(Errc::DivisionByZero, "inverse of zero");
  if (is_rational()) {
    Scalar r = *this;
    r.c_[0] = 1 / r.c_[0];
    return r;
  }
  // extended Euclid in Q[x] against the cyclotomic polynomial
  const FieldContext& ctx = FieldContext::get(order_);
  using Poly = std::vector<mpq_class>;
  auto deg = [](const Poly& p) {
    for (long i = (long)p.size() - 1; i >= 0; --i)
      if (p[i] != 0) return i;
    return -1L;
  };
  Poly r0(ctx.cyclo.size());
  for (size_t i = 0; i < ctx.cyclo.size(); ++i) r0[i] = mpq_class(ctx.cyclo[i]);
  Poly r1(c_.begin(), c_.end());
  Poly t0(1, mpq_class(0)), t1(1, mpq_class(1));
  while (deg(r1) > 0) {
    long d0 = deg(r0), d1 = deg(r1);
    Poly q(d0 - d1 + 1);
    Poly rem = r0;
    for (long i = d0 - d1; i >= 0; --i) {
      mpq_class cq = rem[i + d1] / r1[d1];
      q[i] = cq;
      if (cq == 0) continue;
      for (long j = 0; j <= d1; ++j) rem[i + j] -= cq * r1[j];
    }
    Poly tn(std::max(t0.size(), q.size() + t1.size()));
    for (size_t i = 0; i < t0.size(); ++i) tn[i] = t0[i];
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < t1.size(); ++j) tn[i + j] -= q[i] * t1[j];
    r0 = std::move(r1);
    r1 = std::move(rem);
    t0 = std::move(t1);
    t1 = std::move(tn);
  }
  if (deg(r1) != 0)
    throw MathError(Errc::Internal, "cyclotomic polynomial not coprime with residue");
  mpq_class lead = r1[0];
  Scalar out;
  out.order_ = order_;
  std::vector<mpq_class> raw(t1.size());
  for (size_t i = 0; i < t1.size(); ++i) raw[i] = t1[i] / lead;
  out.c_ = ctx.reduce(raw);
  return out;
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw MathError(Errc::DivisionByZero, "division by zero");
  Scalar x, y;
  align(a, b, x, y);
  if (y.is_rational()) {
    for (auto& q : x.c_) q /= y.c_[0];
    return x;
  }
  return x * y.inverse();
}

Scalar Scalar::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Scalar acc = Scalar::one(order_);
  Scalar base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

std::optional<Scalar> Scalar::nth_root(long n) const {
  if (n < 1) throw MathError(Errc::BadInput, "root index must be >= 1");
  if (n == 1) return *this;
  if (is_zero()) return *this;
  // Candidates q * zeta_L^k, k ascending, q a positive rational with q^n equal
  // to the rational radicand s * zeta_L^{-kn}.
  for (long k = 0; k < order_; ++k) {
    Scalar u = *this * root_of_unity(-k * n, order_);
    if (!u.is_rational()) continue;
    const mpq_class& q = u.rational_part();
    if (q <= 0) continue;
    mpz_class num_root, den_root;
    if (!mpz_root(num_root.get_mpz_t(), q.get_num().get_mpz_t(), n)) continue;
    if (!mpz_root(den_root.get_mpz_t(), q.get_den().get_mpz_t(), n)) continue;
    mpq_class root(num_root, den_root);
    root.canonicalize();
    return Scalar(root, order_) * root_of_unity(k, order_);
  }
  return std::nullopt;
}

bool Scalar::operator==(const Scalar& b) const {
  if (order_ == b.order_) return c_ == b.c_;
  long l = std::lcm(order_, b.order_);
  return promoted(l).c_ == b.promoted(l).c_;
}

std::string Scalar::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    mpq_class v = c_[i];
    if (first) {
      if (v < 0) {
        os << "-";
        v = -v;
      }
      first = false;
    } else {
      os << (v < 0 ? " - " : " + ");
      if (v < 0) v = -v;
    }
    if (i == 0) {
      os << v.get_str();
    } else {
      if (v != 1) os << v.get_str() << "*";
      os << "z^" << i;
    }
  }
  return os.str();
}

Scalar Scalar::parse(std::string_view text, long order) {
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto parse_uint = [&]() -> std::string {
    size_t start = pos;
    while (pos < text.size() && isdigit((unsigned char)text[pos])) ++pos;
    if (start == pos) throw MathError(Errc::BadInput, "expected digits in scalar literal");
    return std::string(text.substr(start, pos - start));
  };

  Scalar acc = Scalar::zero(order);
  bool first = true;
  skip_ws();
  while (pos < text.size()) {
    int sign = 1;
    skip_ws();
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip_ws();
    } else if (!first) {
      throw MathError(Errc::BadInput, "expected '+' or '-' between scalar terms");
    }
    first = false;

    mpq_class rat(1);
    bool have_rat = false;
    if (pos < text.size() && isdigit((unsigned char)text[pos])) {
      std::string num = parse_uint();
      std::string den = "1";
      if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den = parse_uint();
      }
      rat = mpq_class(num + "/" + den);
      rat.canonicalize();
      have_rat = true;
    }
    long k = 0;
    bool have_z = false;
    skip_ws();
    if (have_rat && pos < text.size() && text[pos] == '*') {
      ++pos;
      skip_ws();
    }
    if (pos < text.size() && text[pos] == 'z') {
      ++pos;
      have_z = true;
      k = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        k = std::stol(parse_uint());
      }
    }
    if (!have_rat && !have_z)
      throw MathError(Errc::BadInput, "empty term in scalar literal");
    if (rat.get_den() == 0) throw MathError(Errc::BadInput, "zero denominator");
    Scalar term = Scalar(sign < 0 ? mpq_class(-rat) : rat, order);
    if (have_z) term = term * root_of_unity(k, order);
    acc = acc + term;
    skip_ws();
  }
  return acc;
}

std::complex<double> Scalar::approx() const {
  std::complex<double> z(0.0, 0.0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    double ang = 2.0 * M_PI * (double)i / (double)order_;
    z += c_[i].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return z;
}

}  // namespace branchflow
