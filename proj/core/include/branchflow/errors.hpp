#pragma once

#include <stdexcept>
#include <string>

namespace branchflow {

// Machine-readable failure kinds. The CLI maps these to exit codes and
// report fields; library code throws MathError and never prints.
enum class Errc {
  DivisionByZero,
  FieldMismatch,
  NotRepresentable,
  TruncationExhausted,
  NotNilpotent,
  NotUnipotent,
  InvariantSuspected,
  TangentConeViolation,
  BadInput,
  CrossCheckFailed,
  Internal,
};

inline const char* errc_name(Errc e) {
  switch (e) {
    case Errc::DivisionByZero: return "division_by_zero";
    case Errc::FieldMismatch: return "field_mismatch";
    case Errc::NotRepresentable: return "not_representable";
    case Errc::TruncationExhausted: return "truncation_exhausted";
    case Errc::NotNilpotent: return "not_nilpotent";
    case Errc::NotUnipotent: return "not_unipotent";
    case Errc::InvariantSuspected: return "invariant_suspected";
    case Errc::TangentConeViolation: return "tangent_cone_violation";
    case Errc::BadInput: return "bad_input";
    case Errc::CrossCheckFailed: return "cross_check_failed";
    case Errc::Internal: return "internal";
  }
  return "unknown";
}

class MathError : public std::runtime_error {
 public:
  MathError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace branchflow
