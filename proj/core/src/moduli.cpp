#include "branchflow/moduli.hpp"

#include <algorithm>
#include <numeric>

namespace branchflow {

namespace {

// Shear (x, y) -> (x + beta y, y) making the field prepared; solves
// b10 beta^2 + (a10 - b01) beta - a01 = 0 in the field.
std::optional<Scalar> preparing_shear(const VectorField& X) {
  Scalar a10 = X.A.coeff(1, 0), a01 = X.A.coeff(0, 1);
  Scalar b10 = X.B.coeff(1, 0), b01 = X.B.coeff(0, 1);
  if (a01.is_zero() || b10.is_zero()) return Scalar(0);
  Scalar disc = (a10 - b01) * (a10 - b01) + Scalar(4) * a01 * b10;
  std::optional<Scalar> root = disc.nth_root(2);
  if (!root) return std::nullopt;
  return ((b01 - a10) + *root) / (Scalar(2) * b10);
}

VectorField conjugate_by_shear(const VectorField& X, const Scalar& beta) {
  // psi = (x + beta y, y), psi^{-1} = (x - beta y, y); X' = Dpsi . X o psi^{-1}
  auto sub = [&beta](const BiPoly& f) {
    // f(x - beta y, y)
    BiPoly out(f.trunc);
    for (const auto& [k, c] : f.terms) {
      // (x - beta y)^i y^j
      BiPoly term = BiPoly::constant(c);
      BiPoly base = BiPoly::x() - beta * BiPoly::y();
      for (long q = 0; q < k.first; ++q) term = term * base;
      term = term * BiPoly::monomial(0, k.second, Scalar(1));
      out = out + term;
    }
    return out;
  };
  BiPoly a = sub(X.A), b = sub(X.B);
  return {a + beta * b, b};
}

EpsSeries lift_eps(const TSeries& s, long k, const mpq_class& w, long cap) {
  // s * w * eps^k as an eps-series
  EpsSeries out(s.trunc);
  for (const auto& [e, c] : s.terms) {
    std::vector<Scalar> v(k + 1);
    v[k] = Scalar(w) * c;
    EpsPoly p(std::move(v), cap);
    if (!p.is_zero()) out.terms.emplace(e, std::move(p));
  }
  return out;
}

}  // namespace

DeformedParam deform(const PuiseuxParam& p, const VectorField& X, long eps_cap,
                     PreparePolicy policy) {
  check_valid(p);
  if (!is_singular(X)) throw MathError(Errc::BadInput, "deformation needs a singular field");
  if (eps_cap < 1) throw MathError(Errc::BadInput, "eps cap must be >= 1");

  DeformedParam out;
  out.n = p.n;
  out.eps_cap = eps_cap;
  out.prepare_shear = Scalar(0);

  PuiseuxParam par = p;
  VectorField fld = X;
  if (!is_prepared(X, p)) {
    switch (policy) {
      case PreparePolicy::Require:
        throw MathError(Errc::BadInput, "field not prepared relatively to the branch");
      case PreparePolicy::Auto: {
        std::optional<Scalar> beta = preparing_shear(X);
        if (!beta)
          throw MathError(Errc::NotRepresentable, "no preparing shear in the field");
        fld = conjugate_by_shear(X, *beta);
        JetDiffeo shear{BiPoly::x() + *beta * BiPoly::y(), BiPoly::y(), 1};
        par = apply_diffeo(shear, p);
        out.auto_prepared = true;
        out.prepare_shear = *beta;
        break;
      }
      case PreparePolicy::Formal:
        break;
    }
  }

  long K = par.trunc();
  long deg_cap = K >= kUnbounded ? kUnbounded : K;
  TSeries xs = TSeries::monomial(par.n, Scalar(1), K);

  EpsSeries u(K), v(K);
  BiPoly gx = BiPoly::x(), gy = BiPoly::y();
  mpq_class fact(1);
  for (long k = 0; k <= eps_cap; ++k) {
    if (k > 0) {
      fact *= k;
      gx = apply_to(fld, gx).truncate(deg_cap);
      gy = apply_to(fld, gy).truncate(deg_cap);
      if (gx.known_zero() && gy.known_zero()) break;
    }
    mpq_class w = mpq_class(1) / fact;
    if (!gx.known_zero()) u = u + lift_eps(compose(gx, xs, par.y), k, w, eps_cap);
    if (!gy.known_zero()) v = v + lift_eps(compose(gy, xs, par.y), k, w, eps_cap);
  }

  Ord ou = u.ord();
  if (!ou.exact || ou.value != par.n)
    throw MathError(Errc::Internal, "deformed x-part lost its order");
  EpsSeries sigma = nth_root_series(u, par.n);
  EpsSeries tau = invert_param(sigma);
  out.y = compose(v, tau);

  // eps = 0 must recover the input parametrization
  long cmp = std::min(out.y.trunc, par.y.trunc);
  for (const auto& [e, c] : out.y.terms)
    if (e < cmp && !(c.constant_term() == par.y.coeff(e)))
      throw MathError(Errc::Internal, "deformation does not specialize to the branch at eps=0");
  for (const auto& [e, c] : par.y.terms)
    if (e < cmp && out.y.terms.find(e) == out.y.terms.end() && !c.is_zero())
      throw MathError(Errc::Internal, "deformation does not specialize to the branch at eps=0");
  return out;
}

namespace {

std::optional<long> least_moving_exponent(const DeformedParam& d) {
  for (const auto& [e, c] : d.y.terms)
    if (!c.is_constant()) return e;
  return std::nullopt;
}

}  // namespace

Ord contact_exponent_deformation(const PuiseuxParam& p, const VectorField& X,
                                 long eps_cap0, long eps_cap_max) {
  long cap = std::max(2L, eps_cap0);
  std::optional<long> prev;
  bool have_prev = false;
  while (cap <= eps_cap_max) {
    DeformedParam d = deform(p, X, cap, PreparePolicy::Formal);
    std::optional<long> cur = least_moving_exponent(d);
    if (have_prev && cur == prev) {
      if (cur) return Ord::exactly(*cur);
      return Ord::at_least(p.trunc() - p.n);  // invariant up to the bounds
    }
    prev = cur;
    have_prev = true;
    cap *= 2;
  }
  if (prev && *prev >= 0) return Ord::exactly(*prev);
  return Ord::at_least(p.trunc() - p.n);
}

std::optional<long> lambda_invariant(const PuiseuxParam& p) {
  check_valid(p);
  Ord mo = first_exponent(p);
  if (!mo.exact) return std::nullopt;  // smooth axis: treat as infinite
  long m = mo.value;
  if (m % p.n == 0)
    throw MathError(Errc::BadInput, "lambda needs a prepared parametrization");
  OneForm w{Scalar(m) * BiPoly::y(), Scalar(-p.n) * BiPoly::x()};
  Ord u = upsilon(w, p);
  if (!u.exact) return std::nullopt;
  return u.value - p.n;
}

std::map<long, OneForm> contact_set(const PuiseuxParam& p, long bound) {
  check_valid(p);
  Ord mo = first_exponent(p);
  if (!mo.exact) throw MathError(Errc::BadInput, "contact set of a smooth axis branch");
  long n = p.n, m = mo.value;
  if (p.trunc() < bound + n)
    throw MathError(Errc::TruncationExhausted,
                    "contact set to " + std::to_string(bound) + " needs truncation >= " +
                        std::to_string(bound + n));

  TSeries xs = TSeries::monomial(n, Scalar(1), p.trunc());
  TSeries xdot = derivative(xs);
  TSeries ydot = derivative(p.y);

  struct Cand {
    long gen_ord;
    int kind;  // 0 = dx, 1 = dy
    long a, b;
  };
  std::vector<Cand> cands;
  for (long a = 0; a * n <= bound + n; ++a)
    for (long b = 0; a * n + b * m <= bound + n; ++b) {
      if (a + b < 1) continue;
      long base = a * n + b * m;
      if (base + n - 1 <= bound + n - 1) cands.push_back({base + n - 1, 0, a, b});
      if (base + m - 1 <= bound + n - 1) cands.push_back({base + m - 1, 1, a, b});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& l, const Cand& r) {
    return std::tie(l.gen_ord, l.kind, l.a, l.b) < std::tie(r.gen_ord, r.kind, r.a, r.b);
  });

  struct Basis {
    TSeries series;
    OneForm combo;
  };
  std::map<long, Basis> basis;

  for (const Cand& cd : cands) {
    BiPoly mono = BiPoly::monomial(cd.a, cd.b, Scalar(1));
    OneForm combo = cd.kind == 0 ? OneForm{mono, BiPoly::zero()} : OneForm{BiPoly::zero(), mono};
    TSeries pull = compose(mono, xs, p.y) * (cd.kind == 0 ? xdot : ydot);
    while (true) {
      Ord o = pull.ord();
      if (!o.exact || o.value > bound + n - 1) break;
      auto it = basis.find(o.value);
      if (it == basis.end()) {
        basis.emplace(o.value, Basis{pull, combo});
        break;
      }
      Scalar c = pull.terms.begin()->second / it->second.series.terms.begin()->second;
      pull = pull - c * it->second.series;
      combo.P = combo.P - c * it->second.combo.P;
      combo.Q = combo.Q - c * it->second.combo.Q;
    }
  }

  std::map<long, OneForm> out;
  for (const auto& [o, b] : basis) {
    long j = o + 1 - n;
    if (j >= 1 && j <= bound) out.emplace(j, b.combo);
  }
  return out;
}

namespace {

// Monomial nilpotent witness with contact exponent exactly j, from a
// decomposition j + n = p*n + q*m; deterministic candidate order.
std::optional<VectorField> monomial_witness(long j, long n, long m) {
  for (long q = 0; q * m <= j + n; ++q) {
    long rem = j + n - q * m;
    if (rem % n != 0) continue;
    long pp = rem / n;
    if (pp >= 1 && !(pp == 1 && q == 0) && !(pp == 1 && q == 1)) {
      VectorField X{BiPoly::zero(), BiPoly::monomial(pp - 1, q, Scalar(1))};
      if (is_nilpotent(X)) return X;
    }
    if (q >= 1 && !(pp == 0 && q == 1) && !(pp == 1 && q == 1)) {
      VectorField X{BiPoly::monomial(pp, q - 1, Scalar(1)), BiPoly::zero()};
      if (is_nilpotent(X)) return X;
    }
  }
  return std::nullopt;
}

VectorField field_of_form(const OneForm& w) {
  // dual of Q dx + P dy ... the field whose dual form is w = P dx + Q dy
  return {w.Q, -w.P};
}

ElimResult eliminate_with(const PuiseuxParam& p, long j, const VectorField& X) {
  Scalar aj = p.y.coeff(j);
  ElimResult res;
  res.witness = X;
  if (aj.is_zero()) {
    res.param = p;
    res.s0 = Scalar(0);
    return res;
  }
  DeformedParam d = deform(p, X, 2, PreparePolicy::Formal);
  EpsPoly cj = d.y.coeff(j);
  if (!(cj.coeff(0) == aj) || !cj.coeff(2).is_zero() || cj.coeff(1).is_zero())
    throw MathError(Errc::Internal,
                    "deformed coefficient at " + std::to_string(j) + " is not affine in eps");
  res.s0 = -(aj / cj.coeff(1));
  long jet_order = p.trunc() >= kUnbounded ? j + 1 : p.trunc();
  JetDiffeo flow = jet_exp(res.s0 * X, jet_order);
  res.param = apply_diffeo(flow, p);
  for (const auto& [e, c] : p.y.terms) {
    if (e >= j) break;
    if (!(res.param.y.coeff(e) == c))
      throw MathError(Errc::CrossCheckFailed, "elimination changed a coefficient below j");
  }
  if (!res.param.y.coeff(j).is_zero())
    throw MathError(Errc::CrossCheckFailed, "elimination left a nonzero coefficient at j");
  return res;
}

}  // namespace

ElimResult eliminate_term(const PuiseuxParam& p, long j) {
  check_valid(p);
  Ord mo = first_exponent(p);
  if (!mo.exact || j <= mo.value)
    throw MathError(Errc::BadInput, "elimination needs j above the first exponent");
  if (std::optional<VectorField> X = monomial_witness(j, p.n, mo.value))
    return eliminate_with(p, j, *X);
  std::map<long, OneForm> cs = contact_set(p, j);
  auto it = cs.find(j);
  if (it == cs.end())
    throw MathError(Errc::BadInput,
                    std::to_string(j) + " is not a contact exponent of the branch");
  VectorField X = field_of_form(it->second);
  if (!is_nilpotent(X))
    throw MathError(Errc::NotNilpotent,
                    "witness at " + std::to_string(j) + " is not nilpotent (Zariski invariant?)");
  return eliminate_with(p, j, X);
}

NormalFormReport normal_form(const PuiseuxParam& p, ScaleMode mode, long field_order) {
  check_irreducible(p);
  NormalFormReport rep;
  rep.input = p;
  rep.n = p.n;

  PrepareResult pr = prepare(p);
  for (const PrepareStep& st : pr.log) {
    NormalStep ns;
    ns.j = st.k * p.n;
    ns.witness = {BiPoly::zero(), BiPoly::monomial(st.k, 0, Scalar(1))};
    ns.s0 = -st.coeff;
    rep.steps.push_back(ns);
  }
  if (pr.smooth) {
    rep.output = PuiseuxParam{1, TSeries::zero()};
    rep.m = 0;
    rep.sg.char_exponents = {1};
    rep.sg.generators = {1};
    rep.sg.conductor = 0;
    rep.truncated_at = 0;
    rep.scaled = true;
    rep.u = Scalar(1);
    rep.v_m = Scalar(1);
    rep.v = Scalar(1);
    return rep;
  }

  rep.sg = semigroup(pr.param);
  rep.m = first_exponent(pr.param).value;
  long cprime = std::max(rep.sg.conductor, rep.m + 1);
  rep.truncated_at = cprime;

  PuiseuxParam cur = pr.param;
  long want = default_trunc(cprime, p.n);
  if (cur.trunc() >= kUnbounded) {
    cur.y.trunc = want;  // exact data: adopt the working window
  } else if (cur.trunc() < cprime + p.n) {
    throw MathError(Errc::TruncationExhausted,
                    "normal form needs truncation >= " + std::to_string(cprime + p.n));
  }
  rep.jet_order = cur.trunc();

  rep.lambda.reset();
  for (long j = rep.m + 1; j < cprime; ++j) {
    Scalar aj = cur.y.coeff(j);
    if (aj.is_zero()) continue;
    if (rep.lambda && j == *rep.lambda) continue;
    if (std::optional<VectorField> X = monomial_witness(j, cur.n, rep.m)) {
      ElimResult er = eliminate_with(cur, j, *X);
      rep.steps.push_back({j, er.witness, er.s0});
      cur = er.param;
      continue;
    }
    std::map<long, OneForm> cs = contact_set(cur, j);
    auto it = cs.find(j);
    if (it == cs.end()) continue;  // not a contact exponent: a modulus, keep it
    VectorField X = field_of_form(it->second);
    if (!is_nilpotent(X)) {
      if (rep.lambda)
        throw MathError(Errc::Internal, "two non-nilpotent contact exponents above m");
      rep.lambda = j;  // Zariski invariant: kept
      continue;
    }
    ElimResult er = eliminate_with(cur, j, X);
    rep.steps.push_back({j, er.witness, er.s0});
    cur = er.param;
  }

  cur.y.truncate(cprime);
  rep.lambda_set.clear();
  for (const auto& [j, w] : contact_set(pr.param, cprime)) rep.lambda_set.push_back(j);

  // scaling to a_m = a_lambda = 1
  long L = field_order;
  if (L == 0) {
    L = 1;
    for (const auto& [e, c] : cur.y.terms) L = std::lcm(L, c.order());
  }
  Scalar am = cur.y.coeff(rep.m);
  auto apply_scaling = [&](const Scalar& u, const Scalar& v_m) {
    PuiseuxParam scaled;
    scaled.n = cur.n;
    scaled.y.trunc = cur.y.trunc;
    Scalar uinv = u.inverse();
    for (const auto& [e, c] : cur.y.terms) scaled.y.set_coeff(e, v_m * uinv.pow(e) * c);
    return scaled;
  };
  if (!rep.lambda) {
    rep.u = Scalar(1);
    rep.v_m = am.inverse();
    rep.v = rep.v_m.nth_root(rep.m);
    rep.scaled = true;
    rep.output = apply_scaling(rep.u, rep.v_m);
  } else {
    Scalar al = cur.y.coeff(*rep.lambda);
    Scalar ratio = (al / am).promoted(std::lcm(am.order(), std::lcm(al.order(), L)));
    std::optional<Scalar> u = ratio.nth_root(*rep.lambda - rep.m);
    if (!u) {
      std::string cons = "u^" + std::to_string(*rep.lambda - rep.m) + " = " + ratio.to_string() +
                         "; v^" + std::to_string(rep.m) + " = u^" + std::to_string(rep.m) + " / (" +
                         am.to_string() + ")";
      if (mode == ScaleMode::Exact)
        throw MathError(Errc::NotRepresentable, "scaling root not in the field: " + cons);
      rep.scaled = false;
      rep.scale_constraint = cons;
      rep.output = cur;
    } else {
      rep.u = *u;
      rep.v_m = u->pow(rep.m) / am;
      rep.v = rep.v_m.nth_root(rep.m);
      rep.scaled = true;
      rep.output = apply_scaling(rep.u, rep.v_m);
    }
  }
  return rep;
}

bool moduli_equivalent(const NormalFormReport& r1, const NormalFormReport& r2) {
  if (r1.n != r2.n || r1.m != r2.m) return false;
  if (r1.lambda.has_value() != r2.lambda.has_value()) return false;
  if (r1.lambda && *r1.lambda != *r2.lambda) return false;
  if (r1.sg.generators != r2.sg.generators || r1.sg.conductor != r2.sg.conductor) return false;
  if (r1.lambda_set != r2.lambda_set) return false;

  long K = std::min(r1.truncated_at, r2.truncated_at);
  std::vector<std::pair<long, Scalar>> eqs;  // u^d = w
  for (long e = r1.m; e < K; ++e) {
    Scalar a = r1.output.y.coeff(e);
    Scalar b = r2.output.y.coeff(e);
    if (a.is_zero() != b.is_zero()) return false;
    if (a.is_zero() || e == r1.m) continue;
    // v_m u^{-e} a = b and v_m u^{-m} a_m = b_m give u^{e-m} = (a/a_m)(b_m/b)
    Scalar am = r1.output.y.coeff(r1.m);
    Scalar bm = r2.output.y.coeff(r2.m);
    eqs.push_back({e - r1.m, (a / am) * (bm / b)});
  }
  if (eqs.empty()) return true;

  // consistency of {u^{d_i} = w_i} over C* via the exponent lattice
  long g = eqs[0].first;
  Scalar W = eqs[0].second;
  for (size_t i = 1; i < eqs.size(); ++i) {
    long d = eqs[i].first;
    // extended gcd: g' = s g + t d
    long old_g = g, s0 = 1, s1 = 0, t0 = 0, t1 = 1, a = g, b = d;
    while (b != 0) {
      long q = a / b;
      long tmp = a - q * b;
      a = b;
      b = tmp;
      tmp = s0 - q * s1;
      s0 = s1;
      s1 = tmp;
      tmp = t0 - q * t1;
      t0 = t1;
      t1 = tmp;
    }
    (void)old_g;
    g = a;
    W = W.pow(s0) * eqs[i].second.pow(t0);
  }
  for (const auto& [d, w] : eqs)
    if (!(W.pow(d / g) == w)) return false;
  return true;
}

}  // namespace branchflow
