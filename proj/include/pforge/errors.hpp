#pragma once

#include <stdexcept>
#include <string>

namespace pforge {

enum class errc {
  division_by_zero,
  incompatible_towers,
  zero_input,
  arity_mismatch,
  non_invertible_substitution,
  zero_divisor,
  degree_cap_exceeded,
  not_a_poisson_ideal,
  not_central,
  not_graded,
  factorization_unavailable,
  degree_too_high,
  tower_adjunction_failed,
  not_homogeneous,
  alpha_not_poisson,
  delta_not_compatible,
  lie_jacobi_fails,
  zero_parameter,
  not_antisymmetric,
  zero_denominator,
  syntax_error,
  unknown_generator,
  invalid_argument,
};

inline const char* errc_name(errc k) {
  switch (k) {
    case errc::division_by_zero: return "DivisionByZero";
    case errc::incompatible_towers: return "IncompatibleTowers";
    case errc::zero_input: return "ZeroInput";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::non_invertible_substitution: return "NonInvertibleSubstitution";
    case errc::zero_divisor: return "ZeroDivisor";
    case errc::degree_cap_exceeded: return "DegreeCapExceeded";
    case errc::not_a_poisson_ideal: return "NotAPoissonIdeal";
    case errc::not_central: return "NotCentral";
    case errc::not_graded: return "NotGraded";
    case errc::factorization_unavailable: return "FactorizationUnavailable";
    case errc::degree_too_high: return "DegreeTooHigh";
    case errc::tower_adjunction_failed: return "TowerAdjunctionFailed";
    case errc::not_homogeneous: return "NotHomogeneous";
    case errc::alpha_not_poisson: return "AlphaNotPoisson";
    case errc::delta_not_compatible: return "DeltaNotCompatible";
    case errc::lie_jacobi_fails: return "LieJacobiFails";
    case errc::zero_parameter: return "ZeroParameter";
    case errc::not_antisymmetric: return "NotAntisymmetric";
    case errc::zero_denominator: return "ZeroDenominator";
    case errc::syntax_error: return "SyntaxError";
    case errc::unknown_generator: return "UnknownGenerator";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Domain error carrying a machine-readable kind (the CLI maps these to exit
/// code 2 with an error document).
class domain_error : public std::runtime_error {
 public:
  domain_error(errc kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  errc kind() const noexcept { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc k, const std::string& msg) {
  throw domain_error(k, std::string(errc_name(k)) + ": " + msg);
}

}  // namespace pforge
