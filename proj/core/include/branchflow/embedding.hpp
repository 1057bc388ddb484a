#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "branchflow/vfield.hpp"

namespace branchflow {

// Diagonal eigenvalues e^{2 pi i r} as exact rotation numbers r = p/q in [0,1).
struct EigenPair {
  mpq_class r1, r2;
};

// Rotation number of a root of unity, when the scalar is one.
std::optional<mpq_class> rotation_of(const Scalar& s);

enum class Target { E1, E2 };

struct ResMonomial {
  long i = 0, j = 0;
  Target target = Target::E1;
  bool operator==(const ResMonomial&) const = default;
};

// Multiplicative resonances lambda1^i lambda2^j = lambda_target with
// 2 <= i + j <= degree, decided by exact rotation arithmetic.
std::vector<ResMonomial> resonant_monomials(const EigenPair& e, long degree);

enum class Verdict { Obstructed, NotObstructed, NonResonant };

// One row of the integer-feasibility system: a k1 + b k2 = rhs over Z.
struct SystemRow {
  mpq_class a, b, rhs;
};

struct ResonanceCertificate {
  EigenPair eigenvalues;
  std::vector<ResMonomial> present;
  Verdict verdict = Verdict::NotObstructed;
  std::vector<SystemRow> system;  // "all present monomials strong" as equations in (k1, k2)
  bool has_solution = false;
  mpq_class k1, k2;  // a solution when one exists
  std::string detail;
};

// Decide whether some choice of logarithms alpha = 2 pi i (r1 + k1),
// beta = 2 pi i (r2 + k2), k integer, makes every present resonance strong.
// No choice -> Obstructed. Empty `present` with no resonances at any order
// up to `nonresonance_degree` -> NonResonant.
ResonanceCertificate obstruction(const EigenPair& e, const std::vector<ResMonomial>& present,
                                 long nonresonance_degree = 12);

struct StabilizerJet2 {
  long dimension = 0;
  // unknown order: (a20, a11, a02, b20, b11, b02)
  std::vector<std::array<Scalar, 6>> basis;
  std::vector<std::pair<long, std::array<Scalar, 6>>> rows;  // t-order -> equation row
};

// Linear constraints on the second jet of a field preserving the branch:
// the pullback of the dual form must vanish up to max(upsilon values) + 1.
StabilizerJet2 stabilizer_jet2(const PuiseuxParam& p);

struct CompletenessCertificate {
  bool certified = false;
  StabilizerJet2 stabilizer;
  ResonanceCertificate resonance;
  PuiseuxParam witness_curve;  // the conjugated branch Phi(Gamma)
  std::string detail;
};

// Certificate that the class of p is non-complete, witnessed by Phi: needs a
// trivial stabilizer 2-jet and an obstructed resonance system for Phi's 2-jet.
CompletenessCertificate completeness_obstruction(const PuiseuxParam& p, const JetDiffeo& Phi);

}  // namespace branchflow
