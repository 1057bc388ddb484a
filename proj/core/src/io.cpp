#include "branchflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace branchflow {
namespace io {

namespace {

Scalar parse_scalar(const json& j, long L) {
  if (!j.is_string()) throw MathError(Errc::BadInput, "scalar coefficient must be a string");
  return Scalar::parse(j.get<std::string>(), L);
}

TSeries parse_series(const json& j, long L, long trunc) {
  TSeries s(trunc);
  if (!j.is_array()) throw MathError(Errc::BadInput, "series must be an array of [e, coeff]");
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2)
      throw MathError(Errc::BadInput, "series term must be [exponent, coeff]");
    long e = term[0].get<long>();
    if (e < 0) throw MathError(Errc::BadInput, "negative exponent in series");
    Scalar c = parse_scalar(term[1], L);
    if (!c.is_zero()) s.set_coeff(e, s.coeff(e) + c);
  }
  return s;
}

BiPoly parse_bipoly(const json& j, long L) {
  BiPoly p;
  if (!j.is_array()) throw MathError(Errc::BadInput, "polynomial must be an array of [i, j, coeff]");
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 3)
      throw MathError(Errc::BadInput, "polynomial term must be [i, j, coeff]");
    long a = term[0].get<long>();
    long b = term[1].get<long>();
    if (a < 0 || b < 0) throw MathError(Errc::BadInput, "negative exponent in polynomial");
    Scalar c = parse_scalar(term[2], L);
    p.set_coeff(a, b, p.coeff(a, b) + c);
  }
  return p;
}

}  // namespace

PuiseuxParam parse_param(const json& j, long L) {
  if (!j.contains("n") || !j.contains("y"))
    throw MathError(Errc::BadInput, "curve file needs fields n and y");
  PuiseuxParam p;
  p.n = j["n"].get<long>();
  long trunc = j.contains("trunc") ? j["trunc"].get<long>() : kUnbounded;
  if (trunc <= 0) throw MathError(Errc::BadInput, "trunc must be positive");
  p.y = parse_series(j["y"], L, trunc);
  check_valid(p);
  return p;
}

VectorField parse_field(const json& j, long L) {
  if (!j.contains("A") || !j.contains("B"))
    throw MathError(Errc::BadInput, "field file needs components A and B");
  return {parse_bipoly(j["A"], L), parse_bipoly(j["B"], L)};
}

JetDiffeo parse_jet(const json& j, long L) {
  if (!j.contains("x") || !j.contains("y"))
    throw MathError(Errc::BadInput, "jet file needs components x and y");
  JetDiffeo d;
  d.fx = parse_bipoly(j["x"], L);
  d.fy = parse_bipoly(j["y"], L);
  d.order = j.contains("order") ? j["order"].get<long>()
                                : std::max(d.fx.max_degree(), d.fy.max_degree());
  return d;
}

json series_json(const TSeries& s) {
  json terms = json::array();
  for (const auto& [e, c] : s.terms) terms.push_back({e, c.to_string()});
  json out;
  out["terms"] = terms;
  if (s.trunc < kUnbounded) out["trunc"] = s.trunc;
  return out;
}

json param_json(const PuiseuxParam& p) {
  json out;
  out["n"] = p.n;
  json terms = json::array();
  for (const auto& [e, c] : p.y.terms) terms.push_back({e, c.to_string()});
  out["y"] = terms;
  if (p.trunc() < kUnbounded) out["trunc"] = p.trunc();
  return out;
}

json bipoly_json(const BiPoly& p) {
  json terms = json::array();
  for (const auto& [k, c] : p.terms) terms.push_back({k.first, k.second, c.to_string()});
  return terms;
}

json field_json(const VectorField& X) {
  json out;
  out["A"] = bipoly_json(X.A);
  out["B"] = bipoly_json(X.B);
  return out;
}

json one_form_json(const OneForm& w) {
  json out;
  out["P"] = bipoly_json(w.P);
  out["Q"] = bipoly_json(w.Q);
  return out;
}

json jet_json(const JetDiffeo& d) {
  json out;
  out["x"] = bipoly_json(d.fx);
  out["y"] = bipoly_json(d.fy);
  out["order"] = d.order;
  return out;
}

json ord_json(const Ord& o) {
  json out;
  if (o.exact) {
    out["value"] = o.value;
  } else {
    out["at_least"] = o.value;
  }
  return out;
}

json semigroup_json(const SemigroupData& s) {
  json out;
  out["char_exponents"] = s.char_exponents;
  out["generators"] = s.generators;
  out["conductor"] = s.conductor;
  return out;
}

json shared_path_json(const SharedPath& path) {
  json out;
  out["mults"] = path.mults;
  out["N"] = path.last_index();
  out["last_point_free"] = path.last_point_free;
  out["last_point_corner"] = path.last_point_corner;
  out["last_point_singular_for_curve"] = path.last_point_singular_for_curve;
  out["last_point_singular_for_X"] = path.last_point_singular_for_X;
  out["divisor_invariance_ok"] = path.divisor_invariance_ok;
  json r = json::array();
  for (const auto& c : path.restricted_field) r.push_back(c.to_string());
  out["restricted_field"] = r;
  if (path.nilpotent_checked)
    out["nilpotent_single_singularity"] = path.nilpotent_single_singularity;
  return out;
}

json deformed_json(const DeformedParam& d) {
  json out;
  out["n"] = d.n;
  out["eps_cap"] = d.eps_cap;
  if (d.auto_prepared) out["prepare_shear"] = d.prepare_shear.to_string();
  json terms = json::array();
  for (const auto& [e, c] : d.y.terms) {
    json coeffs = json::array();
    for (long k = 0; k <= std::min(c.degree(), d.eps_cap); ++k)
      coeffs.push_back(c.coeff(k).to_string());
    terms.push_back({e, coeffs});
  }
  out["y"] = terms;
  if (d.y.trunc < kUnbounded) out["trunc"] = d.y.trunc;
  return out;
}

json normal_form_json(const NormalFormReport& r, bool numeric_scalars) {
  json out;
  out["schema"] = "branchflow/normal-form/1";
  out["input"] = param_json(r.input);
  out["output"] = param_json(r.output);
  out["n"] = r.n;
  out["m"] = r.m;
  if (r.lambda)
    out["lambda"] = *r.lambda;
  else
    out["lambda"] = nullptr;
  out["semigroup"] = semigroup_json(r.sg);
  out["contact_exponents"] = r.lambda_set;
  out["truncated_at"] = r.truncated_at;
  out["jet_order"] = r.jet_order;
  json steps = json::array();
  for (const auto& st : r.steps) {
    json s;
    s["j"] = st.j;
    s["witness"] = field_json(st.witness);
    s["s0"] = st.s0.to_string();
    steps.push_back(s);
  }
  out["steps"] = steps;
  out["scaled"] = r.scaled;
  if (r.scaled) {
    out["u"] = r.u.to_string();
    out["v_m"] = r.v_m.to_string();
    if (r.v) out["v"] = r.v->to_string();
    if (numeric_scalars) {
      out["u_numeric"] = scalar_numeric(r.u);
      out["v_m_numeric"] = scalar_numeric(r.v_m);
    }
  } else {
    out["scale_constraint"] = r.scale_constraint;
  }
  return out;
}

NormalFormReport parse_normal_form(const json& j, long L) {
  NormalFormReport r;
  if (!j.contains("schema") || j["schema"] != "branchflow/normal-form/1")
    throw MathError(Errc::BadInput, "not a normal-form report");
  r.input = parse_param(j["input"], L);
  r.output = parse_param(j["output"], L);
  r.n = j["n"].get<long>();
  r.m = j["m"].get<long>();
  if (!j["lambda"].is_null()) r.lambda = j["lambda"].get<long>();
  r.sg.char_exponents = j["semigroup"]["char_exponents"].get<std::vector<long>>();
  r.sg.generators = j["semigroup"]["generators"].get<std::vector<long>>();
  r.sg.conductor = j["semigroup"]["conductor"].get<long>();
  r.lambda_set = j["contact_exponents"].get<std::vector<long>>();
  r.truncated_at = j["truncated_at"].get<long>();
  r.jet_order = j["jet_order"].get<long>();
  for (const auto& s : j["steps"]) {
    NormalStep st;
    st.j = s["j"].get<long>();
    st.witness = parse_field(s["witness"], L);
    st.s0 = Scalar::parse(s["s0"].get<std::string>(), L);
    r.steps.push_back(st);
  }
  r.scaled = j["scaled"].get<bool>();
  if (r.scaled) {
    r.u = Scalar::parse(j["u"].get<std::string>(), L);
    r.v_m = Scalar::parse(j["v_m"].get<std::string>(), L);
    if (j.contains("v")) r.v = Scalar::parse(j["v"].get<std::string>(), L);
  } else {
    r.scale_constraint = j["scale_constraint"].get<std::string>();
  }
  return r;
}

json stabilizer_json(const StabilizerJet2& s) {
  json out;
  out["dimension"] = s.dimension;
  out["unknowns"] = {"a20", "a11", "a02", "b20", "b11", "b02"};
  json rows = json::array();
  for (const auto& [o, row] : s.rows) {
    json r;
    r["t_order"] = o;
    json cs = json::array();
    for (const auto& c : row) cs.push_back(c.to_string());
    r["coeffs"] = cs;
    rows.push_back(r);
  }
  out["rows"] = rows;
  json basis = json::array();
  for (const auto& v : s.basis) {
    json b = json::array();
    for (const auto& c : v) b.push_back(c.to_string());
    basis.push_back(b);
  }
  out["basis"] = basis;
  return out;
}

namespace {
const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Obstructed: return "obstructed";
    case Verdict::NotObstructed: return "not_obstructed";
    case Verdict::NonResonant: return "non_resonant";
  }
  return "unknown";
}
}  // namespace

json resonance_json(const ResonanceCertificate& c) {
  json out;
  out["rotations"] = {c.eigenvalues.r1.get_str(), c.eigenvalues.r2.get_str()};
  json mono = json::array();
  for (const auto& m : c.present)
    mono.push_back({m.i, m.j, m.target == Target::E1 ? "e1" : "e2"});
  out["present_monomials"] = mono;
  out["verdict"] = verdict_name(c.verdict);
  json sys = json::array();
  for (const auto& r : c.system)
    sys.push_back({r.a.get_str(), r.b.get_str(), r.rhs.get_str()});
  out["system_k1_k2_rhs"] = sys;
  if (c.has_solution) {
    out["k1"] = c.k1.get_str();
    out["k2"] = c.k2.get_str();
  }
  out["detail"] = c.detail;
  return out;
}

json completeness_json(const CompletenessCertificate& c) {
  json out;
  out["schema"] = "branchflow/completeness/1";
  out["certified_non_complete"] = c.certified;
  out["stabilizer"] = stabilizer_json(c.stabilizer);
  out["resonance"] = resonance_json(c.resonance);
  out["witness_curve"] = param_json(c.witness_curve);
  out["detail"] = c.detail;
  return out;
}

std::string scalar_numeric(const Scalar& s) {
  std::complex<double> z = s.approx();
  std::ostringstream os;
  os.precision(15);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
  return os.str();
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw MathError(Errc::BadInput, "cannot write " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw MathError(Errc::BadInput, "cannot rename into " + path);
}

}  // namespace io
}  // namespace branchflow
