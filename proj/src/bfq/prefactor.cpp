#include "bfq/prefactor.hpp"

#include <stdexcept>

namespace bfq {

void Prefactor::normalize() {
  if (coeff.is_zero()) {
    sqrt_arg = 1;
    two_pi_hbar_exp = 0;
    hbar_exp = 0;
    phase16 = 0;
    return;
  }
  if (sqrt_arg <= 0) throw std::domain_error("sqrt_arg must be positive");
  // sqrt(p/q) = sqrt(p*q)/q
  Int num = boost::multiprecision::numerator(sqrt_arg);
  Int den = boost::multiprecision::denominator(sqrt_arg);
  Int n = num * den;
  auto [root, rest] = extract_square(n);
  coeff *= GaussianRational(Rat(root, den));
  sqrt_arg = Rat(rest);
  // phase16 -> {0,1,2,3}, folding quarter turns into coeff
  phase16 = ((phase16 % 16) + 16) % 16;
  long long quarters = phase16 / 4;
  phase16 %= 4;
  coeff *= i_power(quarters);
}

Prefactor Prefactor::operator*(const Prefactor& o) const {
  Prefactor r;
  r.coeff = coeff * o.coeff;
  r.sqrt_arg = sqrt_arg * o.sqrt_arg;
  r.two_pi_hbar_exp = two_pi_hbar_exp + o.two_pi_hbar_exp;
  r.hbar_exp = hbar_exp + o.hbar_exp;
  r.phase16 = phase16 + o.phase16;
  r.normalize();
  return r;
}

void Prefactor::mul_sqrt(const Rat& arg) {
  if (arg <= 0) throw std::domain_error("mul_sqrt needs positive argument");
  sqrt_arg *= arg;
  normalize();
}

void Prefactor::mul_phase16(long long s) {
  phase16 += s;
  normalize();
}

bool Prefactor::operator==(const Prefactor& o) const {
  Prefactor a = *this, b = o;
  a.normalize();
  b.normalize();
  return a.coeff == b.coeff && a.sqrt_arg == b.sqrt_arg && a.two_pi_hbar_exp == b.two_pi_hbar_exp &&
         a.hbar_exp == b.hbar_exp && a.phase16 == b.phase16;
}

bool Prefactor::equals_up_to_sign(const Prefactor& o) const {
  Prefactor neg = o;
  neg.coeff = -neg.coeff;
  return *this == o || *this == neg;
}

std::string Prefactor::str() const {
  Prefactor p = *this;
  p.normalize();
  std::string s = "(" + p.coeff.str() + ")";
  if (p.sqrt_arg != 1) s += "*sqrt(" + p.sqrt_arg.str() + ")";
  if (p.two_pi_hbar_exp != 0) s += "*(2*pi*hbar)^(" + p.two_pi_hbar_exp.str() + ")";
  if (p.hbar_exp != 0) s += "*hbar^(" + p.hbar_exp.str() + ")";
  if (p.phase16 != 0) s += "*zeta16^" + std::to_string(p.phase16);
  return s;
}

}  // namespace bfq
