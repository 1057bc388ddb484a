#include "branchflow/embedding.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace branchflow {

std::optional<mpq_class> rotation_of(const Scalar& s) {
  long L = s.order();
  for (long j = 0; j < L; ++j) {
    Scalar z = Scalar::root_of_unity(j, L);
    if (s == z) {
      mpq_class r(j, L);
      r.canonicalize();
      return r;
    }
    if (s == -z) {
      mpq_class r(2 * j + L, 2 * L);
      r.canonicalize();
      r -= (r >= 1 ? 1 : 0);
      return r;
    }
  }
  return std::nullopt;
}

namespace {

bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

bool resonance_holds(const EigenPair& e, const ResMonomial& m) {
  mpq_class lhs = m.i * e.r1 + m.j * e.r2;
  mpq_class target = m.target == Target::E1 ? e.r1 : e.r2;
  return is_integer(lhs - target);
}

}  // namespace

std::vector<ResMonomial> resonant_monomials(const EigenPair& e, long degree) {
  if (degree < 2) throw MathError(Errc::BadInput, "resonance degree must be >= 2");
  std::vector<ResMonomial> out;
  for (long d = 2; d <= degree; ++d)
    for (long i = d; i >= 0; --i) {
      long j = d - i;
      for (Target t : {Target::E1, Target::E2}) {
        ResMonomial m{i, j, t};
        if (resonance_holds(e, m)) out.push_back(m);
      }
    }
  return out;
}

ResonanceCertificate obstruction(const EigenPair& e, const std::vector<ResMonomial>& present,
                                 long nonresonance_degree) {
  ResonanceCertificate cert;
  cert.eigenvalues = e;
  cert.present = present;

  for (const ResMonomial& m : present)
    if (!resonance_holds(e, m))
      throw MathError(Errc::BadInput, "monomial is not resonant for the eigenvalues");

  if (present.empty()) {
    if (resonant_monomials(e, nonresonance_degree).empty()) {
      cert.verdict = Verdict::NonResonant;
      cert.detail = "no resonances up to degree " + std::to_string(nonresonance_degree) +
                    "; linearizable, hence embeddable";
    } else {
      cert.verdict = Verdict::NotObstructed;
      cert.has_solution = true;
      cert.detail = "no present resonant monomials: any logarithm choice works";
    }
    return cert;
  }

  // strong resonance for the logs alpha = 2 pi i (r1 + k1), beta = 2 pi i (r2 + k2):
  //   target e1: (i-1)(r1 + k1) + j (r2 + k2) = 0
  //   target e2: i (r1 + k1) + (j-1)(r2 + k2) = 0
  for (const ResMonomial& m : present) {
    SystemRow row;
    if (m.target == Target::E1) {
      row.a = m.i - 1;
      row.b = m.j;
      row.rhs = -((m.i - 1) * e.r1 + m.j * e.r2);
    } else {
      row.a = m.i;
      row.b = m.j - 1;
      row.rhs = -(m.i * e.r1 + (m.j - 1) * e.r2);
    }
    cert.system.push_back(row);
  }

  // exact solve of the <=2-unknown rational system, then integrality
  std::vector<SystemRow> rows = cert.system;
  // eliminate k1 with the first row having a != 0
  auto row_nonzero_a = std::find_if(rows.begin(), rows.end(),
                                    [](const SystemRow& r) { return r.a != 0; });
  std::optional<mpq_class> sol_k1, sol_k2;
  bool rational_infeasible = false;

  std::vector<SystemRow> reduced;
  if (row_nonzero_a != rows.end()) {
    SystemRow pivot = *row_nonzero_a;
    for (const SystemRow& r : rows) {
      if (&r == &*row_nonzero_a) continue;
      mpq_class f = r.a / pivot.a;
      SystemRow nr{0, r.b - f * pivot.b, r.rhs - f * pivot.rhs};
      reduced.push_back(nr);
    }
    std::optional<mpq_class> k2val;
    for (const SystemRow& r : reduced) {
      if (r.b == 0) {
        if (r.rhs != 0) rational_infeasible = true;
        continue;
      }
      mpq_class v = r.rhs / r.b;
      if (k2val && *k2val != v) rational_infeasible = true;
      k2val = v;
    }
    if (!rational_infeasible) {
      if (k2val) {
        sol_k2 = *k2val;
        sol_k1 = (pivot.rhs - pivot.b * *k2val) / pivot.a;
        if (!is_integer(*sol_k1) || !is_integer(*sol_k2)) rational_infeasible = true;
      } else {
        // one effective equation a k1 + b k2 = rhs with integer entries
        long a = pivot.a.get_num().get_si();
        long b = pivot.b.get_num().get_si();
        long rhs = pivot.rhs.get_num().get_si();
        if (!is_integer(pivot.a) || !is_integer(pivot.b) || !is_integer(pivot.rhs)) {
          rational_infeasible = true;
        } else {
          // extended euclid: a x + b y = g
          long old_r = a, rr = b, old_s = 1, ss = 0, old_t = 0, tt = 1;
          while (rr != 0) {
            long q = old_r / rr;
            long tmp = old_r - q * rr;
            old_r = rr;
            rr = tmp;
            tmp = old_s - q * ss;
            old_s = ss;
            ss = tmp;
            tmp = old_t - q * tt;
            old_t = tt;
            tt = tmp;
          }
          long g = old_r, x = old_s, y = old_t;
          if (g < 0) {
            g = -g;
            x = -x;
            y = -y;
          }
          if (g != 0 && rhs % g == 0) {
            sol_k1 = mpq_class(x * (rhs / g));
            sol_k2 = mpq_class(y * (rhs / g));
          } else {
            rational_infeasible = true;
          }
        }
      }
    }
  } else {
    // only k2 appears
    std::optional<mpq_class> k2val;
    for (const SystemRow& r : rows) {
      if (r.b == 0) {
        if (r.rhs != 0) rational_infeasible = true;
        continue;
      }
      mpq_class v = r.rhs / r.b;
      if (k2val && *k2val != v) rational_infeasible = true;
      k2val = v;
    }
    if (!rational_infeasible) {
      sol_k2 = k2val ? *k2val : mpq_class(0);
      sol_k1 = 0;
      if (!is_integer(*sol_k2)) rational_infeasible = true;
    }
  }

  if (rational_infeasible || !sol_k1 || !sol_k2) {
    cert.verdict = Verdict::Obstructed;
    cert.detail = "every logarithm choice leaves a weakly resonant present monomial";
  } else {
    cert.verdict = Verdict::NotObstructed;
    cert.has_solution = true;
    cert.k1 = *sol_k1;
    cert.k2 = *sol_k2;
    cert.detail = "all present monomials strong for k1 = " + cert.k1.get_str() +
                  ", k2 = " + cert.k2.get_str();
  }
  return cert;
}

namespace {

long rank_and_nullspace(std::vector<std::array<Scalar, 6>> rows,
                        std::vector<std::array<Scalar, 6>>* nullspace) {
  std::vector<long> pivot_cols;
  size_t r = 0;
  for (long col = 0; col < 6 && r < rows.size(); ++col) {
    size_t piv = r;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    Scalar inv = rows[r][col].inverse();
    for (long c = 0; c < 6; ++c) rows[r][c] = inv * rows[r][c];
    for (size_t q = 0; q < rows.size(); ++q) {
      if (q == r || rows[q][col].is_zero()) continue;
      Scalar f = rows[q][col];
      for (long c = 0; c < 6; ++c) rows[q][c] = rows[q][c] - f * rows[r][c];
    }
    pivot_cols.push_back(col);
    ++r;
  }
  if (nullspace) {
    nullspace->clear();
    std::vector<bool> is_pivot(6, false);
    for (long c : pivot_cols) is_pivot[c] = true;
    for (long freec = 0; freec < 6; ++freec) {
      if (is_pivot[freec]) continue;
      std::array<Scalar, 6> v;
      v.fill(Scalar(0));
      v[freec] = Scalar(1);
      for (size_t q = 0; q < pivot_cols.size(); ++q) v[pivot_cols[q]] = -rows[q][freec];
      nullspace->push_back(v);
    }
  }
  return (long)pivot_cols.size();
}

}  // namespace

StabilizerJet2 stabilizer_jet2(const PuiseuxParam& p) {
  check_valid(p);
  TSeries xs = TSeries::monomial(p.n, Scalar(1), p.trunc());
  TSeries xdot = derivative(xs);
  TSeries ydot = derivative(p.y);

  // slots a20 a11 a02 b20 b11 b02; omega = -B dx + A dy
  const std::array<std::pair<long, long>, 3> degs{{{2, 0}, {1, 1}, {0, 2}}};
  std::array<TSeries, 6> series;
  for (int s = 0; s < 3; ++s) {
    BiPoly mono = BiPoly::monomial(degs[s].first, degs[s].second, Scalar(1));
    TSeries base = compose(mono, xs, p.y);
    series[s] = base * ydot;        // A-slot
    series[s + 3] = -(base * xdot);  // B-slot
  }

  long cutoff = 0;
  long min_ord = kUnbounded;
  for (const TSeries& s : series) {
    Ord o = s.ord();
    if (o.exact) {
      cutoff = std::max(cutoff, o.value + 1);
      min_ord = std::min(min_ord, o.value);
    }
  }
  if (cutoff == 0)
    throw MathError(Errc::BadInput, "all second-jet pullbacks vanish; branch data degenerate");
  if (cutoff + 1 > p.trunc())
    throw MathError(Errc::TruncationExhausted,
                    "stabilizer system needs truncation > " + std::to_string(cutoff + 1));

  StabilizerJet2 out;
  std::vector<std::array<Scalar, 6>> rows;
  for (long o = min_ord; o <= cutoff; ++o) {
    std::array<Scalar, 6> row;
    bool nonzero = false;
    for (int s = 0; s < 6; ++s) {
      row[s] = series[s].coeff(o);
      nonzero = nonzero || !row[s].is_zero();
    }
    if (!nonzero) continue;
    rows.push_back(row);
    out.rows.emplace_back(o, row);
  }
  long rank = rank_and_nullspace(rows, &out.basis);
  out.dimension = 6 - rank;
  return out;
}

CompletenessCertificate completeness_obstruction(const PuiseuxParam& p, const JetDiffeo& Phi) {
  CompletenessCertificate cert;
  cert.stabilizer = stabilizer_jet2(p);

  if (!Phi.fx.coeff(0, 1).is_zero() || !Phi.fy.coeff(1, 0).is_zero() ||
      !Phi.fx.coeff(0, 0).is_zero() || !Phi.fy.coeff(0, 0).is_zero())
    throw MathError(Errc::BadInput, "2-jet must have diagonal linear part");
  std::optional<mpq_class> r1 = rotation_of(Phi.fx.coeff(1, 0));
  std::optional<mpq_class> r2 = rotation_of(Phi.fy.coeff(0, 1));
  if (!r1 || !r2)
    throw MathError(Errc::BadInput, "eigenvalues must be roots of unity in the field");
  EigenPair e{*r1, *r2};

  std::vector<ResMonomial> present;
  for (const auto& [k, c] : Phi.fx.terms) {
    if (k.first + k.second != 2 || c.is_zero()) continue;
    ResMonomial m{k.first, k.second, Target::E1};
    if (resonance_holds(e, m)) present.push_back(m);
  }
  for (const auto& [k, c] : Phi.fy.terms) {
    if (k.first + k.second != 2 || c.is_zero()) continue;
    ResMonomial m{k.first, k.second, Target::E2};
    if (resonance_holds(e, m)) present.push_back(m);
  }

  cert.resonance = obstruction(e, present);
  cert.certified =
      cert.stabilizer.dimension == 0 && cert.resonance.verdict == Verdict::Obstructed;

  try {
    cert.witness_curve = apply_diffeo(Phi, p);
  } catch (const MathError& err) {
    if (err.code() != Errc::NotRepresentable) throw;
    // renormalization root outside the field: enlarge to Q(zeta_{nL})
    long L = 1;
    for (const auto& [k, c] : Phi.fx.terms) L = std::lcm(L, c.order());
    for (const auto& [k, c] : Phi.fy.terms) L = std::lcm(L, c.order());
    for (const auto& [k, c] : p.y.terms) L = std::lcm(L, c.order());
    long big = L * p.n;
    JetDiffeo PhiBig = Phi;
    for (auto& [k, c] : PhiBig.fx.terms) c = c.promoted(big);
    for (auto& [k, c] : PhiBig.fy.terms) c = c.promoted(big);
    PuiseuxParam pBig = p;
    for (auto& [k, c] : pBig.y.terms) c = c.promoted(big);
    cert.witness_curve = apply_diffeo(PhiBig, pBig);
  }

  if (cert.certified) {
    cert.detail =
        "stabilizer second jets are trivial and the 2-jet resonance system is infeasible: "
        "no diffeomorphism with this 2-jet embeds in a formal flow";
  } else if (cert.stabilizer.dimension != 0) {
    cert.detail = "stabilizer second jets are not certified trivial";
  } else {
    cert.detail = "resonance system is feasible; no obstruction";
  }
  return cert;
}

}  // namespace branchflow
