#pragma once

#include <string>

#include "bfq/rational.hpp"

namespace bfq {

/// Multiplicative prefactor of a state:
///   coeff * sqrt(sqrt_arg) * (2 pi hbar)^{two_pi_hbar_exp} * hbar^{hbar_exp} * zeta^{phase16}
/// with zeta = exp(2 pi i / 16). Exponents of (2 pi hbar) and hbar live in (1/4)Z,
/// phase16 in Z/16. Canonical form keeps sqrt_arg a squarefree positive integer and
/// phase16 in {0,1,2,3} (powers of i are folded into coeff).
struct Prefactor {
  GaussianRational coeff{Rat(1)};
  Rat sqrt_arg{1};
  Rat two_pi_hbar_exp{0};
  Rat hbar_exp{0};
  long long phase16 = 0;

  static Prefactor one() { return Prefactor(); }
  static Prefactor zero() {
    Prefactor p;
    p.coeff = GaussianRational(Rat(0));
    return p;
  }

  bool is_zero() const { return coeff.is_zero(); }

  void normalize();
  Prefactor operator*(const Prefactor& o) const;
  Prefactor& operator*=(const Prefactor& o) { *this = *this * o; return *this; }

  /// Multiply by sqrt of a positive rational.
  void mul_sqrt(const Rat& arg);
  /// Multiply by exp(2 pi i s / 16).
  void mul_phase16(long long s);

  bool operator==(const Prefactor& o) const;
  bool equals_up_to_sign(const Prefactor& o) const;

  std::string str() const;
};

}  // namespace bfq
