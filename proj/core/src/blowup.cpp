#include "branchflow/blowup.hpp"

namespace branchflow {

VectorField pullback_field(const VectorField& X, Chart chart, const Scalar& translate) {
  if (!is_singular(X))
    throw MathError(Errc::BadInput, "pull-back needs a singular centre");
  VectorField out;
  if (chart == Chart::X) {
    BiPoly a = X.A.subst_x_xy();
    BiPoly b = X.B.subst_x_xy();
    out.A = a;
    out.B = (b - BiPoly::y() * a).divide_x();
    if (!translate.is_zero()) {
      out.A = out.A.translate_y(translate);
      out.B = out.B.translate_y(translate);
    }
  } else {
    BiPoly a = X.A.subst_xy_y();
    BiPoly b = X.B.subst_xy_y();
    out.B = b;
    out.A = (a - BiPoly::x() * b).divide_y();
    if (!translate.is_zero()) {
      out.A = out.A.translate_x(translate);
      out.B = out.B.translate_x(translate);
    }
  }
  return out;
}

long default_max_depth(const PuiseuxParam& p) {
  PrepareResult pr = prepare(p);
  if (pr.smooth) return p.trunc();
  SemigroupData s = semigroup(pr.param);
  long resolution = 0;
  {
    // length of the multiplicity sequence down to all ones
    long a = s.char_exponents[0];
    for (size_t q = 1; q < s.char_exponents.size(); ++q) {
      long b = s.char_exponents[q] - (q == 1 ? 0 : s.char_exponents[q - 1]);
      while (b > 0) {
        if (a <= b) {
          resolution += 1;
          b -= a;
        } else {
          std::swap(a, b);
        }
      }
    }
  }
  return resolution + s.conductor + 2;
}

namespace {

VectorField swap_field(const VectorField& X) {
  return {X.B.swap_xy(), X.A.swap_xy()};
}

bool divisor_invariant(const VectorField& X, Axis axis) {
  const std::vector<Scalar> r =
      axis == Axis::X0 ? X.A.restrict_x0() : X.B.restrict_y0();
  for (const auto& c : r)
    if (!c.is_zero()) return false;
  return true;
}

std::vector<Scalar> restrict_to_divisor(const VectorField& X, Axis axis) {
  // component along the divisor, restricted to it
  return axis == Axis::X0 ? X.B.restrict_x0() : X.A.restrict_y0();
}

long poly_degree(const std::vector<Scalar>& r) {
  for (long i = (long)r.size() - 1; i >= 0; --i)
    if (!r[i].is_zero()) return i;
  return -1;
}

}  // namespace

SharedPath shared_path(const VectorField& X0, const PuiseuxParam& p0, long max_depth) {
  if (!is_singular(X0))
    throw MathError(Errc::BadInput, "shared path needs a singular field at the origin");
  check_valid(p0);

  const bool nilpotent_input = is_nilpotent(X0);
  LocalModel m{X0, p0, {}, {}};
  SharedPath path;

  for (long depth = 0; depth <= max_depth; ++depth) {
    bool singular_here =
        m.X.A.coeff(0, 0).is_zero() && m.X.B.coeff(0, 0).is_zero();
    path.mults.push_back(m.curve.n);
    m.history.push_back(m.curve.n);

    if (!singular_here) {
      path.last_point_corner = m.divisors.size() >= 2;
      path.last_point_free = !m.divisors.empty() && m.divisors.back().free;
      path.last_point_singular_for_curve = m.curve.n > 1;
      path.last_point_singular_for_X = false;
      if (!m.divisors.empty()) {
        Axis en_axis = m.divisors.back().axis;
        path.restricted_field = restrict_to_divisor(m.X, en_axis);
        long deg = poly_degree(path.restricted_field);
        path.restriction_degree_ok = deg >= 0 && deg <= 2;
        if (nilpotent_input) {
          path.nilpotent_checked = true;
          // one singular point on E_N (as a point of P^1), counting both charts
          if (deg == 0) {
            path.nilpotent_single_singularity = true;  // double zero at infinity
          } else if (deg == 2 && path.restriction_degree_ok) {
            const Scalar& a = path.restricted_field[2];
            const Scalar& b = path.restricted_field[1];
            const Scalar& c = path.restricted_field[0];
            Scalar disc = b * b - Scalar(4) * a * c;
            path.nilpotent_single_singularity = disc.is_zero();
          } else {
            path.nilpotent_single_singularity = false;
          }
        }
      }
      return path;
    }

    if (depth == max_depth) break;

    BlowupStep bs = blow_up_step(m.curve);
    VectorField pulled = pullback_field(m.X, Chart::X, bs.divisor_coord);
    if (bs.swapped) pulled = swap_field(pulled);

    // divisors through the new point: the fresh one, plus the strict transform
    // of an old y=0 divisor when the new point stays on it (divisor coordinate 0)
    std::vector<DivisorThrough> next;
    DivisorThrough fresh;
    fresh.id = depth + 1;
    fresh.axis = bs.swapped ? Axis::Y0 : Axis::X0;
    fresh.free = m.divisors.size() <= 1;
    if (bs.divisor_coord.is_zero()) {
      for (const auto& d : m.divisors) {
        if (d.axis != Axis::Y0) continue;
        DivisorThrough old = d;
        old.axis = bs.swapped ? Axis::X0 : Axis::Y0;
        next.push_back(old);
      }
    }
    next.push_back(fresh);

    m.X = pulled;
    m.curve = bs.param;
    m.divisors = next;

    for (const auto& d : m.divisors)
      if (!divisor_invariant(m.X, d.axis)) path.divisor_invariance_ok = false;
  }

  throw MathError(Errc::InvariantSuspected,
                  "no regular point within depth " + std::to_string(max_depth) +
                      "; the branch may be invariant");
}

long noether_intersection(const SharedPath& path) {
  long N = path.last_index();
  long s = 0;
  for (long i = 0; i < N; ++i) s += path.mults[i] * path.mults[i];
  return s;
}

long contact_from_path(const SharedPath& path) {
  long N = path.last_index();
  if (N < 1) throw MathError(Errc::BadInput, "path too short for a contact exponent");
  long s = path.mults[N - 1];
  for (long j = 1; j <= N - 1; ++j) s += path.mults[j];
  return s;
}

long upsilon_from_path(const SharedPath& path) {
  long N = path.last_index();
  if (N < 1) throw MathError(Errc::BadInput, "path too short");
  long s = path.mults[N - 1];
  for (long j = 0; j <= N - 1; ++j) s += path.mults[j];
  return s;
}

}  // namespace branchflow
