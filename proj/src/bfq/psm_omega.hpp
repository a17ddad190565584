#pragma once

#include "bfq/cell_complex.hpp"
#include "bfq/moyal.hpp"
#include "bfq/poly.hpp"

namespace bfq {

/// Normal-ordered operator: sum of (coefficient polynomial) x (left-derivative
/// word, ascending generator order), all derivatives to the right.
struct OrderedOp {
  ContextPtr ctx;
  // derivative word -> coefficient polynomial
  std::map<std::vector<int>, Poly> terms;

  Poly apply(const Poly& p) const;
  void add(const std::vector<int>& word, const Poly& coeff);
  OrderedOp operator+(const OrderedOp& o) const;
  bool same_terms(const OrderedOp& o) const;
  bool is_zero() const;

  /// Normal-ordered composition this o other, reconstructed from the action on
  /// monomials (triangular in word length).
  OrderedOp compose(const OrderedOp& other) const;
  /// Terms at semiclassical weight w: hbar exponent minus derivative count.
  /// The principal (classical) part of a quantized charge sits at weight 0,
  /// single contractions at weight 1.
  OrderedOp weight_component(long long w) const;
  long long max_word_length() const;
};

/// Operator context for the boundary fields of the sigma model on a cellular
/// circle: one generator per (cell, target index), in-boundary representation
/// (states depend on the B-fields).
struct PsmBoundary {
  CellComplex circle;
  int target_dim = 0;
  ContextPtr ctx;
  std::string gen_name(const std::string& cell, int alpha) const;
};

PsmBoundary psm_boundary_context(const CellComplex& circle, int target_dim);

/// The boundary operator: the de Rham part (m copies of the abelian lift) plus
/// the standard-ordering quantization of (1/2) Pi^{ab}(B) A_a A_b with
/// A_{a,cell} -> i hbar d/dB^{a,cell}, discretized with Alexander-Whitney
/// products edge by edge. `order` is the hbar truncation passed to the star
/// product (constant pi is exact; otherwise only order 0 is available).
OrderedOp omega_psm(const PsmBoundary& bnd, const PoissonStructure& pi, long long order);

/// The abelian part alone (pi = 0), built independently from the de Rham lift.
OrderedOp omega_psm_abelian(const PsmBoundary& bnd);

/// Ultralocal charge of a linear structure at one boundary vertex:
///   (1/2)(i hbar)^2 d_g pi^{ab} B^{g,v} d_{a,v} d_{b,v}.
/// Its square is the quantized Jacobiator: zero iff pi is Poisson. This is the
/// classical BFV statement of the hbar^0 order; the edge-coupled terms of the
/// full operator add discretization artifacts at subleading weight.
OrderedOp omega_psm_vertex_charge(const PsmBoundary& bnd, const PoissonStructure& pi,
                                  const std::string& vertex);

/// Exhaustively verify Omega(Omega(m)) = 0 on all monomials of degree <= deg.
/// Returns the first nonzero residual if any.
Poly omega_square_residual(const OrderedOp& op, long long deg);

}  // namespace bfq
