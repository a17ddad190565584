#pragma once

#include <map>
#include <string>

#include "bfq/bv.hpp"
#include "bfq/cochain.hpp"
#include "bfq/torsion.hpp"

namespace bfq {

/// Prefactor coefficient of the partition function, as exact exponent data:
/// (2 pi hbar)^{sum_k (-1/4 - k/2 (-1)^k) b_k} * (exp(-i pi/2) hbar)^{sum_k (1/4 - k/2 (-1)^k) b_k}.
struct XiFactor {
  std::vector<std::size_t> betti;
  Rat two_pi_hbar_exp{0};
  Rat phase_hbar_exp{0};   // exponent of (exp(-i pi/2) hbar)
  long long s_mod16 = 0;   // mod-16 phase derived from phase_hbar_exp

  /// The exact identity between the fractional phase exponent and s mod 16.
  bool phase_consistent() const;
  Prefactor to_prefactor() const;
};

XiFactor xi_coefficient(const std::vector<std::size_t>& betti, int n);

struct IdentityCheck {
  std::string name;
  bool pass;
  std::string residual;  // polynomial remainder when failing
};

struct ClassicalReport {
  bool pass = true;
  std::vector<IdentityCheck> checks;
};

/// Verify the classical structure identities of the cellular theory on X, as
/// exact polynomial identities in the field coordinates and their variations:
///   Q^2 = 0,  iota_Q omega = delta S + pi* alpha,  L_Q omega = pi* omega_bnd,
///   1/2 iota_Q iota_Q omega = pi* S_bnd,  pi_* Q = Q_bnd,
/// plus the boundary Hamiltonian identity iota_{Q_bnd} omega_bnd = delta S_bnd.
/// `corrupt_boundary_sign` flips the boundary action term (negative control).
ClassicalReport classical_check(const CellComplex& x, bool corrupt_boundary_sign = false);

/// Partition-function state of a cobordism at a chosen realization
/// (the contraction's reduced complex is the space of residual fields).
struct BfState {
  CellComplex complex;
  Contraction contraction;
  State state;
  OddSymplectic residual_pairing;
  Derivation boundary_op;  // Omega as a first-order derivation
  std::string tag;
  XiFactor xi;
  TorsionValue tau;
};

BfState partition_function(const CellComplex& x, const Contraction& con, const std::string& tag = "");
BfState partition_function(const CellComplex& x,
                           PivotStrategy strategy = PivotStrategy::LowestIdFirst,
                           const std::string& tag = "");

/// Partition function at a non-minimal realization: every cell passing `keep`
/// stays a residual slot; the rest is contracted away.
BfState partition_at_realization(const CellComplex& x, const std::set<std::string>& keep,
                                 PivotStrategy strategy = PivotStrategy::LowestIdFirst,
                                 const std::string& tag = "");

/// The boundary operator alone (on the state's generator context).
Derivation omega_boundary(const BfState& z);

struct MqmeReport {
  bool pass = false;
  bool operator_squares_to_zero = false;
  Poly residual;
};

/// Exact check of (Omega + hbar^2 Delta) Z = 0 and of the square of the operator.
/// `corrupt_propagator` perturbs one homotopy entry first (negative control).
MqmeReport check_mqme(const BfState& z);
BfState corrupt_propagator(const BfState& z);

struct GlueResult {
  CellComplex glued_complex;
  Contraction composite_contraction;  // replayed piece gauges + interface elimination
  BfState state;                      // pushed forward onto the glued residual fields
};

/// Segal-style composition: pair the states across the interface and push the
/// result onto the residual fields of the glued cobordism.
GlueResult glue(const CellComplex& a, const CellComplex& b,
                const std::map<std::string, std::string>& identify,
                PivotStrategy strategy = PivotStrategy::LowestIdFirst);

/// BV pushforward from the realization of `z` onto the coarser realization that
/// keeps only `coarse_keep` (must select a sub-realization; NotComparable otherwise).
BfState change_realization(const BfState& z, const std::set<std::string>& coarse_keep);

/// Gauge equivalence: exact witness Y with Z - Z' = (Omega + hbar^2 Delta) Y,
/// solved degree by degree in the truncated polynomial space.
std::optional<Poly> gauge_equivalence_witness(const BfState& z1, const BfState& z2,
                                              long long max_degree);

}  // namespace bfq
