#include <doctest.h>

#include "bfq/bf.hpp"

using namespace bfq;

namespace {

bool states_match_up_to_sign(const State& x, const State& y) {
  State a = x, b = y;
  a.canonicalize();
  b.canonicalize();
  State a2 = a;
  a2.exponent = a.exponent.remap(b.ctx);
  a2.multiplier = a.multiplier.remap(b.ctx);
  a2.ctx = b.ctx;
  return a2.equals_up_to_sign(b);
}

std::vector<CellComplex> corpus() {
  std::vector<CellComplex> xs;
  for (int n = 1; n <= 4; ++n) xs.push_back(interval_complex(n));
  xs.push_back(circle_complex(1));
  xs.push_back(circle_complex(3));
  xs.push_back(cylinder_complex(2));
  xs.push_back(cylinder_complex(3));
  xs.push_back(disk_complex());
  return xs;
}

}  // namespace

TEST_CASE("xi coefficient formula") {
  // All Betti zero: xi = 1, s = 0.
  XiFactor x0 = xi_coefficient({0, 0}, 1);
  CHECK(x0.two_pi_hbar_exp == Rat(0));
  CHECK(x0.phase_hbar_exp == Rat(0));
  CHECK(x0.s_mod16 == 0);
  CHECK(x0.to_prefactor() == Prefactor::one());
  // dim H^0 = 1 only: exponents (-1/4, +1/4), s = -1 mod 16.
  XiFactor xh0 = xi_coefficient({1, 0}, 1);
  CHECK(xh0.two_pi_hbar_exp == Rat(-1, 4));
  CHECK(xh0.phase_hbar_exp == Rat(1, 4));
  CHECK(xh0.s_mod16 == 15);
  CHECK(xh0.phase_consistent());
  // dim H^1 = 1 only: exponents (+1/4, +3/4), s = -3 mod 16.
  XiFactor xh1 = xi_coefficient({0, 1}, 1);
  CHECK(xh1.two_pi_hbar_exp == Rat(1, 4));
  CHECK(xh1.phase_hbar_exp == Rat(3, 4));
  CHECK(xh1.s_mod16 == 13);
  CHECK(xh1.phase_consistent());
}

TEST_CASE("xi phase consistency is exhaustive for small betti vectors") {
  for (int n = 0; n <= 4; ++n) {
    std::vector<std::size_t> betti(n + 1, 0);
    for (;;) {
      CHECK(xi_coefficient(betti, n).phase_consistent());
      std::size_t pos = 0;
      while (pos < betti.size()) {
        if (betti[pos] < 3) { ++betti[pos]; break; }
        betti[pos] = 0;
        ++pos;
      }
      if (pos == betti.size()) break;
    }
  }
}

TEST_CASE("classical identities hold on the corpus") {
  for (auto& x : corpus()) {
    ClassicalReport rep = classical_check(x);
    for (auto& c : rep.checks) {
      INFO(c.name, " residual: ", c.residual);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("classical check on a closed complex reduces to the exact master equation") {
  ClassicalReport rep = classical_check(circle_complex(2));
  CHECK(rep.pass);
}

TEST_CASE("wrong boundary sign fails the classical check") {
  ClassicalReport rep = classical_check(interval_complex(1), true);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("interval partition function has the explicit propagator kernel") {
  // I2 rel out: no residual fields; Z = xi * exp((i/hbar)(+B A)) in this gauge
  // (the two-step kernel evaluates to -1 and s_K = -1).
  BfState z = partition_function(interval_complex(2));
  CHECK(z.contraction.betti() == std::vector<std::size_t>{0, 0});
  CHECK(z.xi.to_prefactor() == Prefactor::one());
  CHECK(z.tau.magnitude == Rat(1));
  Poly expect = Poly::generator(z.state.ctx, z.state.ctx->index("B:v0")) *
                Poly::generator(z.state.ctx, z.state.ctx->index("A:v2"));
  CHECK(z.state.exponent == expect);
}

TEST_CASE("circle partition function is a constant half-density on 4 residual generators") {
  BfState z = partition_function(circle_complex(1));
  CHECK(z.state.exponent.is_zero());
  CHECK(z.state.ctx->size() == 4);
  XiFactor xi = xi_coefficient({1, 1}, 1);
  Prefactor expect = xi.to_prefactor();
  CHECK(z.state.pref == expect);
  // xi for the circle is exp(-i pi/2) hbar = -i hbar.
  CHECK(expect.hbar_exp == Rat(1));
  CHECK(expect.coeff == GaussianRational(Rat(0), Rat(-1)));
}

TEST_CASE("disjoint union of intervals is the tensor product state") {
  CellComplex u = disjoint_union(interval_complex(2), interval_complex(2), "L_", "R_");
  BfState zu = partition_function(u);
  CellComplex a = interval_complex(2, "L_");
  CellComplex b = interval_complex(2, "R_");
  State t = tensor(partition_function(a).state, partition_function(b).state);
  CHECK(states_match_up_to_sign(zu.state, t));
}

TEST_CASE("boundary operator structure") {
  // n=1: boundaries are points, Omega = 0.
  BfState z1 = partition_function(interval_complex(2));
  CHECK(omega_boundary(z1).coeff.empty());
  // n=2 cylinder: Omega nonzero and squares to zero.
  BfState z2 = partition_function(cylinder_complex(2));
  Derivation om = omega_boundary(z2);
  CHECK_FALSE(om.coeff.empty());
  for (std::size_t g = 0; g < z2.state.ctx->size(); ++g)
    CHECK(om.square_on_generator(static_cast<int>(g)).is_zero());
  // Omega kills constant states.
  Poly c = Poly::constant(z2.state.ctx, Scalar(5));
  CHECK(om.apply(c).is_zero());
}

TEST_CASE("mqme holds exactly on the corpus") {
  for (auto& x : corpus()) {
    BfState z = partition_function(x);
    MqmeReport rep = check_mqme(z);
    INFO("complex with ", x.cells().size(), " cells; residual: ", rep.residual.str());
    CHECK(rep.pass);
    CHECK(rep.operator_squares_to_zero);
  }
}

TEST_CASE("mqme holds with the opposite pivot strategy") {
  for (auto& x : corpus()) {
    BfState z = partition_function(x, PivotStrategy::HighestIdFirst);
    CHECK(check_mqme(z).pass);
  }
}

TEST_CASE("corrupted propagator fails mqme with a nonzero residual") {
  BfState z = partition_function(cylinder_complex(2));
  BfState bad = corrupt_propagator(z);
  MqmeReport rep = check_mqme(bad);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.residual.is_zero());
}

TEST_CASE("mqme at a non-minimal realization") {
  // Keep two extra cells of I2 rel out as residual slots.
  CellComplex x = interval_complex(2);
  BfState z = partition_at_realization(x, {"v1", "e1"});
  CHECK(z.contraction.reduced.dim(0) + z.contraction.reduced.dim(1) == 2);
  CHECK(check_mqme(z).pass);
}

TEST_CASE("realization coarsening matches the direct computation") {
  CellComplex x = interval_complex(3);
  BfState fine = partition_at_realization(x, {"v1", "e1", "v2", "e2"});
  CHECK(check_mqme(fine).pass);
  BfState coarse = change_realization(fine, {"v2", "e2"});
  CHECK(check_mqme(coarse).pass);
  BfState direct = change_realization(fine, {});
  BfState minimal = partition_function(x);
  CHECK(states_match_up_to_sign(direct.state, minimal.state));
  // Composition along the poset: fine -> coarse -> minimal equals fine -> minimal.
  BfState two_step = change_realization(coarse, {});
  CHECK(states_match_up_to_sign(two_step.state, direct.state));
  // Identity realization changes nothing.
  BfState same = change_realization(fine, {"v1", "e1", "v2", "e2"});
  CHECK(states_match_up_to_sign(same.state, fine.state));
}

TEST_CASE("incomparable realizations are rejected") {
  CellComplex x = interval_complex(3);
  BfState fine = partition_at_realization(x, {"v1", "e1", "v2", "e2"});
  CHECK_THROWS_AS(change_realization(fine, {"v1", "v2"}), Error);
  CHECK_THROWS_AS(change_realization(fine, {"v0"}), Error);
}

TEST_CASE("gluing two intervals end to end") {
  CellComplex a = interval_complex(2, "x");
  CellComplex b = interval_complex(2, "y");
  GlueResult res = glue(a, b, {{"xv2", "yv0"}});
  BfState direct = partition_function(res.glued_complex, res.composite_contraction, "");
  CHECK(states_match_up_to_sign(res.state.state, direct.state));
  CHECK(check_mqme(res.state).pass);
  // Also against the default gauge: the interval kernel is gauge independent.
  BfState direct_default = partition_function(res.glued_complex);
  CHECK(states_match_up_to_sign(res.state.state, direct_default.state));
}

TEST_CASE("gluing two intervals into a circle") {
  CellComplex left = CellComplex::build(
      1, {{"p", 0, {}}, {"q", 0, {}}, {"s", 1, {{"q", 1}, {"p", -1}}}}, {}, {"p", "q"});
  CellComplex right = CellComplex::build(
      1, {{"x", 0, {}}, {"y", 0, {}}, {"t", 1, {{"y", 1}, {"x", -1}}}}, {"x", "y"}, {});
  GlueResult res = glue(left, right, {{"p", "x"}, {"q", "y"}});
  CHECK(res.glued_complex.euler_characteristic() == 0);
  BfState direct = partition_function(res.glued_complex, res.composite_contraction, "");
  CHECK(states_match_up_to_sign(res.state.state, direct.state));
  CHECK(check_mqme(res.state).pass);
}

TEST_CASE("gluing two cylinders into a cylinder") {
  // Stack two cylinders: out-circle of the first onto the in-circle of the second.
  CellComplex a = cylinder_complex(2);
  CellComplex b0 = cylinder_complex(2);
  // Rename b's cells to avoid collisions.
  std::vector<RawCell> cells;
  for (auto& c : b0.cells()) {
    RawCell n = c;
    n.id = "u" + c.id;
    for (auto& [f, cf] : n.boundary) { (void)cf; f = "u" + f; }
    cells.push_back(n);
  }
  std::set<std::string> in, out;
  for (auto& s : b0.in_boundary()) in.insert("u" + s);
  for (auto& s : b0.out_boundary()) out.insert("u" + s);
  CellComplex bren = CellComplex::build(2, cells, in, out);

  std::map<std::string, std::string> ident;
  for (auto& s : a.out_boundary()) {
    // a's out-cells are *L1, b's in-cells are u*L0.
    std::string base = s.substr(0, s.size() - 2);
    ident[s] = "u" + base + "L0";
  }
  GlueResult res = glue(a, bren, ident);
  BfState direct = partition_function(res.glued_complex, res.composite_contraction, "");
  CHECK(states_match_up_to_sign(res.state.state, direct.state));
  CHECK(check_mqme(res.state).pass);
}

TEST_CASE("triple gluing of intervals is associative") {
  CellComplex a = interval_complex(1, "x");
  CellComplex b = interval_complex(1, "y");
  CellComplex c = interval_complex(1, "z");
  // (a b) c
  GlueResult ab = glue(a, b, {{"xv1", "yv0"}});
  GlueResult ab_c = glue(ab.glued_complex, c, {{"yv1", "zv0"}});
  // a (b c)
  GlueResult bc = glue(b, c, {{"yv1", "zv0"}});
  GlueResult a_bc = glue(a, bc.glued_complex, {{"xv1", "yv0"}});
  CHECK(states_match_up_to_sign(ab_c.state.state, a_bc.state.state));
}

TEST_CASE("gauge equivalence witness between pivot strategies") {
  for (auto x : {interval_complex(3), cylinder_complex(2)}) {
    BfState z1 = partition_function(x, PivotStrategy::LowestIdFirst);
    BfState z2 = partition_function(x, PivotStrategy::HighestIdFirst);
    auto w = gauge_equivalence_witness(z1, z2, 4);
    REQUIRE(w.has_value());
    // Verify the witness: Z1 - Z2 = (Omega + hbar^2 Delta) Y on the window.
    Poly rhs = z1.state.truncated_expansion(4) - z2.state.truncated_expansion(4).remap(z1.state.ctx);
    Poly img = z1.boundary_op.apply(*w) + bv_laplacian(*w, z1.residual_pairing) * Scalar::hbar(2);
    CHECK(img == rhs);
  }
}

TEST_CASE("gluing with an empty interface is the tensor product") {
  CellComplex a = circle_complex(1, "L_");
  CellComplex b = circle_complex(1, "R_");
  GlueResult res = glue(a, b, {});
  // Direct: disjoint union in the composite gauge.
  BfState direct = partition_function(res.glued_complex, res.composite_contraction, "");
  CHECK(states_match_up_to_sign(res.state.state, direct.state));
  // And it matches the tensor product of the pieces.
  State t = tensor(partition_function(a).state, partition_function(b).state);
  CHECK(states_match_up_to_sign(res.state.state, t));
}

TEST_CASE("pushforwards of gauge-equivalent states stay gauge equivalent") {
  // Z' = Z + (Omega + hbar^2 Delta) Y: after the same pushforward, the
  // difference is again exact, witnessed by an explicit linear solve.
  CellComplex x = interval_complex(3);
  BfState fine = partition_at_realization(x, {"v1", "e1", "v2", "e2"});
  REQUIRE(check_mqme(fine).pass);
  // Test modification by an odd polynomial in the state's generators.
  Poly y(fine.state.ctx);
  {
    int b = fine.state.ctx->index("B:v0");
    y += Poly::generator(fine.state.ctx, b) * Scalar(GaussianRational(Rat(3)));
    int a1 = fine.state.ctx->index("a:v1");
    int bv = fine.state.ctx->index("b:v1");
    y += Poly::generator(fine.state.ctx, a1) * Poly::generator(fine.state.ctx, bv) *
         Poly::generator(fine.state.ctx, b);
  }
  // Exact modification at the state level: Z' = Z + (Omega + hbar^2 Delta)(Y e^{lF}).
  State w_state = fine.state;
  w_state.multiplier = y;
  State ow = apply_derivation(w_state, fine.boundary_op, 1);
  State dw = apply_laplacian(w_state, fine.residual_pairing);
  State modified = fine.state;
  modified.multiplier = modified.multiplier + ow.multiplier + dw.multiplier * Scalar::hbar(2);
  // Push both to the minimal realization along the same fiber.
  std::vector<int> integrate, zero;
  Contraction inner = contract(fine.contraction.reduced, PivotStrategy::LowestIdFirst);
  for (auto& [colLabel, rowLabel] : inner.pivot_sequence) {
    integrate.push_back(fine.state.ctx->index("a:" + colLabel));
    integrate.push_back(fine.state.ctx->index("b:" + rowLabel));
    zero.push_back(fine.state.ctx->index("a:" + rowLabel));
    zero.push_back(fine.state.ctx->index("b:" + colLabel));
  }
  State pz = bv_pushforward(fine.state, integrate, zero);
  State pzp = bv_pushforward(modified, integrate, zero);
  // The coarse model has no residual fields left; the coarse operator is Omega
  // on the surviving boundary generators (here: zero, points only), so the
  // pushed difference must itself be exact for the coarse operator. For the
  // interval that means the difference must vanish identically at the window.
  BfState coarse = change_realization(fine, {});
  Poly d = pzp.truncated_expansion(3).remap(coarse.state.ctx) -
           pz.truncated_expansion(3).remap(coarse.state.ctx);
  auto w = solve_witness(coarse.state.ctx, coarse.boundary_op, coarse.residual_pairing, d, 3);
  REQUIRE(w.has_value());
  Poly img2 = coarse.boundary_op.apply(*w) + bv_laplacian(*w, coarse.residual_pairing) * Scalar::hbar(2);
  CHECK(img2 == d);
}
