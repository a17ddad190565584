#pragma once

#include "bfq/matrix.hpp"
#include "bfq/poly.hpp"
#include "bfq/prefactor.hpp"

namespace bfq {

/// Odd symplectic structure in paired form: each conjugate pair couples an even
/// generator u and an odd generator t with omega(u, t) = c != 0. Every residual
/// generator belongs to exactly one pair.
class OddSymplectic {
 public:
  OddSymplectic() = default;
  OddSymplectic(ContextPtr ctx, std::vector<std::tuple<int, int, Rat>> pairs);

  const ContextPtr& ctx() const { return ctx_; }
  const std::vector<std::tuple<int, int, Rat>>& pairs() const { return pairs_; }
  bool is_paired(int g) const { return partner_.count(g) != 0; }
  int partner(int g) const { return partner_.at(g); }

  /// Restriction to the pairs whose generators pass the filter.
  OddSymplectic restricted(const std::vector<int>& keep_gens) const;

 private:
  ContextPtr ctx_;
  std::vector<std::tuple<int, int, Rat>> pairs_;  // (even gen, odd gen, c)
  std::map<int, int> partner_;
};

/// BV Laplacian: Delta = sum_pairs (1/c) d_L/du d_L/dt. Second order, Delta^2 = 0.
Poly bv_laplacian(const Poly& f, const OddSymplectic& omega);

/// Antibracket derived from Delta:
///   (F, G) = (-1)^{|F|} [ Delta(F G) - Delta(F) G - (-1)^{|F|} F Delta(G) ]
/// for parity-homogeneous F, extended bilinearly.
Poly antibracket(const Poly& f, const Poly& g, const OddSymplectic& omega);

/// State  pref * mult * exp((i/hbar) F)  with F even of polynomial degree <= 2.
struct State {
  ContextPtr ctx;
  Prefactor pref = Prefactor::one();
  Poly exponent;
  Poly multiplier;

  static State make(ContextPtr ctx, Prefactor pref, Poly exponent);

  /// Fold scalar multipliers into the prefactor and, when the non-constant part
  /// of the multiplier is nilpotent, fold it into the exponent via log.
  void canonicalize();

  bool equals(const State& o) const;
  bool equals_up_to_sign(const State& o) const;

  /// Series expansion pref-excluded: mult * sum_k ((i/hbar) F)^k / k!, degree-truncated.
  Poly truncated_expansion(long long max_degree) const;

  std::string str() const;
};

/// Tensor product of states over a merged context (generator names must be disjoint).
State tensor(const State& a, const State& b);

/// (Delta applied to Z) as Z' = P * Z: returns the polynomial factor
///   P = (i/hbar) Delta F - (1/hbar^2) (1/2)(F,F)   acting on exp, combined with
/// the multiplier by the BV Leibniz rule. Result shares Z's exponent.
State apply_laplacian(const State& z, const OddSymplectic& omega);

/// First-order derivation applied to a state; dparity is the derivation's parity.
State apply_derivation(const State& z, const Derivation& d, int dparity);

/// exp((i/hbar)F) with F of degree > 2 is rejected (UnsupportedExponent).
void require_gaussian_exponent(const State& z);

struct GaussianFactors {
  bool track = true;  // false: pairing normalization cancels them
};

/// Integrate out `odd_vars` (Berezin; ascending measure convention) and then
/// `even_vars` (stationary phase, exact for Gaussians). The even-even Hessian
/// block must be hbar-free rational and nondegenerate (DegenerateHessian).
State integrate_generators(const State& z, std::vector<int> odd_vars, std::vector<int> even_vars);

/// Canonical pairing of states across an interface: pairs[i] = (generator of a,
/// generator of b) with opposite roles and equal parity. Kernel exp((i/hbar) B.A)
/// per pair; measure normalized so a pure cross kernel is exact substitution with
/// unit prefactor.
State pair_states(const State& a, const State& b,
                  const std::vector<std::pair<std::string, std::string>>& pairs);

/// BV pushforward onto the complement of the listed fiber pairs: generators in
/// `set_to_zero` are restricted to zero, the `integrate` list is integrated.
State bv_pushforward(const State& z, const std::vector<int>& integrate,
                     const std::vector<int>& set_to_zero);

/// Linear change of residual coordinates. `replacements` maps generators to
/// same-parity linear polynomials; `jacobian_abs` is |Ber| of the change, whose
/// square root scales the half-density prefactor.
State substitute_linear(const State& z, const std::map<int, Poly>& replacements, const Rat& jacobian_abs);

/// Solve (Omega + hbar^2 Delta) Y = rhs for Y in the space of polynomials of
/// degree <= max_degree (hbar window inferred). Returns the witness on success.
std::optional<Poly> solve_witness(const ContextPtr& ctx, const Derivation& omega_op,
                                  const OddSymplectic& omega, const Poly& rhs, long long max_degree);

}  // namespace bfq
