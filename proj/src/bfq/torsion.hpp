#pragma once

#include "bfq/cochain.hpp"

namespace bfq {

/// Reidemeister torsion magnitude; the overall sign is not defined.
struct TorsionValue {
  Rat magnitude{1};

  TorsionValue operator*(const TorsionValue& o) const { return {magnitude * o.magnitude}; }
  TorsionValue inverse() const { return {Rat(1) / magnitude}; }
  bool operator==(const TorsionValue& o) const { return magnitude == o.magnitude; }
};

/// Torsion of the based complex underlying `con.ambient`, with cohomology
/// representatives con.incl. Degree-k transition determinant enters with
/// exponent (-1)^k. Throws BasisMismatch if the supplied H-data is inconsistent.
TorsionValue reidemeister_torsion(const Contraction& con);

/// Same, but with the degree-k block of cohomology representatives replaced by
/// incl * hbasis[k] (hbasis[k] is an invertible dim H^k square matrix).
TorsionValue reidemeister_torsion_with_basis(const Contraction& con, const std::vector<Matrix>& hbasis);

/// Torsion of a based acyclic complex via square submatrices of d: independent
/// of the contraction route. Degree-k determinant enters with exponent (-1)^{k+1}.
/// Throws NotExact if the complex is not acyclic.
TorsionValue torsion_alternating_oracle(const CochainComplex& C);

/// Data of a short exact sequence 0 -> A -> C -> B -> 0 of cochain complexes,
/// with alpha/beta given per degree.
struct ComplexSES {
  CochainComplex A, C, B;
  std::vector<Matrix> alpha;  // dim C(k) x dim A(k)
  std::vector<Matrix> beta;   // dim B(k) x dim C(k)
};

/// The long exact cohomology sequence of an SES as a based acyclic complex
/// (based by the chosen cohomology bases). Throws NotExact if it fails exactness.
CochainComplex les_complex(const ComplexSES& ses, const Contraction& hA, const Contraction& hC,
                           const Contraction& hB);

/// Multiplicativity prediction: tau(C) from tau(A), tau(B) and the LES torsion.
TorsionValue torsion_of_gluing(const TorsionValue& tau_a, const TorsionValue& tau_b,
                               const CochainComplex& les);

/// SES 0 -> C(M1, out M1) -> C(M, out M) -> C(M2, out M2) -> 0 for a cobordism
/// composition glued = a `then` b where identify maps out(a) to in(b); cells of the
/// glued complex carry a-names on the a-side.
ComplexSES gluing_ses(const CellComplex& a, const CellComplex& b, const CellComplex& glued,
                      const std::map<std::string, std::string>& identify);

}  // namespace bfq
