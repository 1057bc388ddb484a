#include "branchflow/bipoly.hpp"

#include <algorithm>
#include <sstream>

namespace branchflow {

Ord BiPoly::ord() const {
  if (terms.empty()) return Ord::at_least(trunc);
  long best = kUnbounded;
  for (const auto& [k, c] : terms) best = std::min(best, k.first + k.second);
  return Ord::exactly(best);
}

long BiPoly::ord_lb() const {
  return terms.empty() ? trunc : ord().value;
}

Scalar BiPoly::coeff(long i, long j) const {
  auto it = terms.find({i, j});
  return it == terms.end() ? Scalar(0) : it->second;
}

void BiPoly::set_coeff(long i, long j, Scalar c) {
  if (i + j >= trunc) return;
  if (c.is_zero())
    terms.erase({i, j});
  else
    terms[{i, j}] = std::move(c);
}

BiPoly& BiPoly::truncate(long D) {
  trunc = std::min(trunc, D);
  for (auto it = terms.begin(); it != terms.end();)
    it = (it->first.first + it->first.second >= trunc) ? terms.erase(it) : std::next(it);
  return *this;
}

long BiPoly::max_degree() const {
  long d = 0;
  for (const auto& [k, c] : terms) d = std::max(d, k.first + k.second);
  return d;
}

BiPoly BiPoly::operator-() const {
  BiPoly r = *this;
  for (auto& [k, c] : r.terms) c = -c;
  return r;
}

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
  BiPoly r = a;
  r.trunc = std::min(a.trunc, b.trunc);
  for (const auto& [k, c] : b.terms) {
    auto [it, fresh] = r.terms.emplace(k, c);
    if (!fresh) it->second += c;
  }
  r.truncate(r.trunc);
  for (auto it = r.terms.begin(); it != r.terms.end();)
    it = it->second.is_zero() ? r.terms.erase(it) : std::next(it);
  return r;
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  if (a.terms.empty() && a.is_polynomial()) return BiPoly::zero();
  if (b.terms.empty() && b.is_polynomial()) return BiPoly::zero();
  long t = std::min(ord_add(a.trunc, b.ord_lb()), ord_add(b.trunc, a.ord_lb()));
  BiPoly r(t);
  for (const auto& [ka, ca] : a.terms) {
    for (const auto& [kb, cb] : b.terms) {
      long i = ka.first + kb.first, j = ka.second + kb.second;
      if (i + j >= t) continue;
      Scalar p = ca * cb;
      if (p.is_zero()) continue;
      auto [it, fresh] = r.terms.emplace(BiPoly::Key{i, j}, p);
      if (!fresh) it->second += p;
    }
  }
  for (auto it = r.terms.begin(); it != r.terms.end();)
    it = it->second.is_zero() ? r.terms.erase(it) : std::next(it);
  return r;
}

BiPoly operator*(const Scalar& c, const BiPoly& p) {
  BiPoly r(p.trunc);
  if (c.is_zero()) return r;
  for (const auto& [k, v] : p.terms) {
    Scalar q = c * v;
    if (!q.is_zero()) r.terms.emplace(k, q);
  }
  return r;
}

BiPoly BiPoly::deriv_x() const {
  BiPoly r(trunc >= kUnbounded ? kUnbounded : trunc - 1);
  for (const auto& [k, c] : terms) {
    if (k.first == 0) continue;
    r.terms.emplace(Key{k.first - 1, k.second}, Scalar(k.first) * c);
  }
  return r;
}

BiPoly BiPoly::deriv_y() const {
  BiPoly r(trunc >= kUnbounded ? kUnbounded : trunc - 1);
  for (const auto& [k, c] : terms) {
    if (k.second == 0) continue;
    r.terms.emplace(Key{k.first, k.second - 1}, Scalar(k.second) * c);
  }
  return r;
}

BiPoly BiPoly::subst_x_xy() const {
  BiPoly r(trunc);  // images have total degree >= original, so trunc stays valid
  for (const auto& [k, c] : terms) r.terms.emplace(Key{k.first + k.second, k.second}, c);
  return r;
}

BiPoly BiPoly::subst_xy_y() const {
  BiPoly r(trunc);
  for (const auto& [k, c] : terms) r.terms.emplace(Key{k.first, k.first + k.second}, c);
  return r;
}

BiPoly BiPoly::divide_x() const {
  BiPoly r(trunc >= kUnbounded ? kUnbounded : trunc - 1);
  for (const auto& [k, c] : terms) {
    if (k.first == 0)
      throw MathError(Errc::BadInput, "division by x not exact");
    r.terms.emplace(Key{k.first - 1, k.second}, c);
  }
  return r;
}

BiPoly BiPoly::divide_y() const {
  BiPoly r(trunc >= kUnbounded ? kUnbounded : trunc - 1);
  for (const auto& [k, c] : terms) {
    if (k.second == 0)
      throw MathError(Errc::BadInput, "division by y not exact");
    r.terms.emplace(Key{k.first, k.second - 1}, c);
  }
  return r;
}

BiPoly BiPoly::translate_y(const Scalar& c) const {
  if (!is_polynomial())
    throw MathError(Errc::Internal, "translation of a truncated polynomial");
  if (c.is_zero()) return *this;
  BiPoly r;
  for (const auto& [k, v] : terms) {
    // y^j -> (y + c)^j
    Scalar binom(1);
    Scalar cpow(1);
    for (long m = k.second; m >= 0; --m) {
      // coefficient of y^m: C(j, m) c^{j-m}
      r.set_coeff(k.first, m, r.coeff(k.first, m) + v * binom * cpow);
      if (m > 0) {
        binom = binom * Scalar(m) / Scalar(k.second - m + 1);
        cpow = cpow * c;
      }
    }
  }
  return r;
}

BiPoly BiPoly::translate_x(const Scalar& c) const {
  return swap_xy().translate_y(c).swap_xy();
}

BiPoly BiPoly::swap_xy() const {
  BiPoly r(trunc);
  for (const auto& [k, c] : terms) r.terms.emplace(Key{k.second, k.first}, c);
  return r;
}

std::vector<Scalar> BiPoly::restrict_x0() const {
  std::vector<Scalar> out;
  for (const auto& [k, c] : terms) {
    if (k.first != 0) continue;
    if ((long)out.size() <= k.second) out.resize(k.second + 1, Scalar(0));
    out[k.second] = c;
  }
  return out;
}

std::vector<Scalar> BiPoly::restrict_y0() const {
  std::vector<Scalar> out;
  for (const auto& [k, c] : terms) {
    if (k.second != 0) continue;
    if ((long)out.size() <= k.first) out.resize(k.first + 1, Scalar(0));
    out[k.first] = c;
  }
  return out;
}

std::string BiPoly::to_string() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    if (k.first) os << "*x^" << k.first;
    if (k.second) os << "*y^" << k.second;
  }
  if (trunc < kUnbounded) os << " + O(deg " << trunc << ")";
  return os.str();
}

BiPoly compose_bipoly(const BiPoly& f, const BiPoly& u, const BiPoly& v, long cap) {
  if (u.ord_lb() < 1 || v.ord_lb() < 1)
    throw MathError(Errc::BadInput, "jet substitution needs positive-order components");
  long bound = std::min(cap, std::min(ord_mul(f.trunc, 1L),
                                      std::min(u.trunc, v.trunc)));
  std::vector<BiPoly> up{BiPoly::constant(Scalar(1))};
  std::vector<BiPoly> vp{BiPoly::constant(Scalar(1))};
  auto power = [bound](std::vector<BiPoly>& cache, const BiPoly& base, long e) {
    while ((long)cache.size() <= e) {
      BiPoly nxt = cache.back() * base;
      nxt.truncate(bound);
      cache.push_back(std::move(nxt));
    }
    return cache[e];
  };
  BiPoly acc(bound);
  for (const auto& [k, c] : f.terms) {
    if (k.first + k.second >= bound) continue;
    BiPoly term = power(up, u, k.first) * power(vp, v, k.second);
    acc = acc + c * term;
  }
  acc.truncate(bound);
  return acc;
}

}  // namespace branchflow
