#include <doctest.h>

#include <random>

#include "bfq/bv.hpp"
#include "bfq/poly.hpp"

using namespace bfq;

namespace {

// Context with two conjugate pairs (a0,b0), (a1,b1), a boundary pair and an
// auxiliary even parameter. Parities: a0 even, b0 odd, a1 odd, b1 even.
ContextPtr test_ctx() {
  std::vector<GenInfo> gens = {
      {"a0", 0, 0, Role::ResidualA}, {"b0", -1, 0, Role::ResidualB},
      {"a1", 1, 0, Role::ResidualA}, {"b1", -2, 0, Role::ResidualB},
      {"Bnd", -1, 0, Role::BoundaryB}, {"And", 1, 0, Role::BoundaryA},
      {"x", 0, 0, Role::Auxiliary},
  };
  return std::make_shared<GenContext>(gens);
}

OddSymplectic test_omega(const ContextPtr& ctx) {
  return OddSymplectic(ctx, {{ctx->index("a0"), ctx->index("b0"), Rat(1)},
                             {ctx->index("b1"), ctx->index("a1"), Rat(1)}});
}

Poly gen(const ContextPtr& ctx, const std::string& n) { return Poly::generator(ctx, ctx->index(n)); }

Poly random_poly(const ContextPtr& ctx, std::mt19937_64& rng, int terms, int maxdeg, int parity = -1) {
  Poly p(ctx);
  for (int t = 0; t < terms; ++t) {
    Poly m = Poly::constant(ctx, Scalar(GaussianRational(Rat(1 + static_cast<long long>(rng() % 5)),
                                                         Rat(static_cast<long long>(rng() % 3)))));
    int d = static_cast<int>(rng() % (maxdeg + 1));
    for (int i = 0; i < d; ++i) m = m * Poly::generator(ctx, static_cast<int>(rng() % ctx->size()));
    if (m.is_zero()) continue;
    p += m;
  }
  if (parity >= 0) {
    auto [e, o] = p.parity_split();
    p = parity == 0 ? e : o;
  }
  return p;
}

}  // namespace

TEST_CASE("graded commutativity and normal form idempotence") {
  auto ctx = test_ctx();
  Poly b0 = gen(ctx, "b0"), a1 = gen(ctx, "a1"), a0 = gen(ctx, "a0");
  // odd * odd anticommute
  CHECK(b0 * a1 == -(a1 * b0));
  // even commutes
  CHECK(a0 * b0 == b0 * a0);
  // odd squares vanish
  CHECK((b0 * b0).is_zero());
  // normalizing twice equals normalizing once: remap to the same context is the identity
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    Poly p = random_poly(ctx, rng, 6, 4);
    CHECK(p.remap(ctx) == p);
    CHECK((p + p) - p == p);
  }
}

TEST_CASE("left derivative is a graded derivation") {
  auto ctx = test_ctx();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    Poly f = random_poly(ctx, rng, 4, 3, static_cast<int>(rng() % 2));
    Poly g = random_poly(ctx, rng, 4, 3);
    for (auto name : {"a0", "b0", "a1"}) {
      int gi = ctx->index(name);
      int sg = ctx->parity(gi);
      Poly lhs = (f * g).left_derivative(gi);
      int pf = f.is_zero() ? 0 : f.parity();
      Poly rhs = f.left_derivative(gi) * g;
      Poly cross = f * g.left_derivative(gi);
      if (sg * pf % 2) rhs -= cross;
      else rhs += cross;
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("laplacian on conjugate pairs") {
  auto ctx = test_ctx();
  auto omega = test_omega(ctx);
  // Delta(b a) = 1/c for both parity arrangements.
  CHECK(bv_laplacian(gen(ctx, "b0") * gen(ctx, "a0"), omega) == Poly::constant(ctx, Scalar(1)));
  CHECK(bv_laplacian(gen(ctx, "b1") * gen(ctx, "a1"), omega) == Poly::constant(ctx, Scalar(1)));
  // No residual generators: Delta = 0.
  CHECK(bv_laplacian(gen(ctx, "Bnd") * gen(ctx, "And"), omega).is_zero());
  CHECK(bv_laplacian(gen(ctx, "x") * gen(ctx, "x"), omega).is_zero());
}

TEST_CASE("laplacian squares to zero on random polynomials") {
  auto ctx = test_ctx();
  auto omega = test_omega(ctx);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 40; ++i) {
    Poly f = random_poly(ctx, rng, 6, 4);
    CHECK(bv_laplacian(bv_laplacian(f, omega), omega).is_zero());
  }
}

TEST_CASE("bv leibniz identity holds by construction and bracket is graded symmetric") {
  auto ctx = test_ctx();
  auto omega = test_omega(ctx);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 25; ++i) {
    Poly f = random_poly(ctx, rng, 4, 3, static_cast<int>(rng() % 2));
    Poly g = random_poly(ctx, rng, 4, 3, static_cast<int>(rng() % 2));
    if (f.is_zero() || g.is_zero()) continue;
    int pf = f.parity(), pg = g.parity();
    // Delta(FG) = Delta(F) G + (-1)^{|F|} F Delta(G) + (-1)^{|F|} (F,G)
    Poly lhs = bv_laplacian(f * g, omega);
    Poly rhs = bv_laplacian(f, omega) * g;
    Poly t2 = f * bv_laplacian(g, omega) + antibracket(f, g, omega);
    if (pf % 2) rhs -= t2;
    else rhs += t2;
    CHECK(lhs == rhs);
    // (F,G) = -(-1)^{(|F|+1)(|G|+1)} (G,F)
    Poly sym = antibracket(g, f, omega);
    if ((pf + 1) * (pg + 1) % 2 == 0) CHECK(antibracket(f, g, omega) == -sym);
    else CHECK(antibracket(f, g, omega) == sym);
  }
}

TEST_CASE("defining bracket values on a conjugate pair") {
  auto ctx = test_ctx();
  auto omega = test_omega(ctx);
  Poly a = gen(ctx, "a0"), b = gen(ctx, "b0");
  CHECK(antibracket(a, b, omega) == Poly::constant(ctx, Scalar(1)));
  CHECK(antibracket(b, a, omega) == Poly::constant(ctx, Scalar(-1)));
  // Bracket against a constant vanishes.
  CHECK(antibracket(a, Poly::constant(ctx, Scalar(7)), omega).is_zero());
}

TEST_CASE("graded jacobi identity on random cubics") {
  auto ctx = test_ctx();
  auto omega = test_omega(ctx);
  std::mt19937_64 rng(19);
  int checked = 0;
  for (int i = 0; i < 60 && checked < 20; ++i) {
    Poly f = random_poly(ctx, rng, 3, 3, static_cast<int>(rng() % 2));
    Poly g = random_poly(ctx, rng, 3, 3, static_cast<int>(rng() % 2));
    Poly h = random_poly(ctx, rng, 3, 3, static_cast<int>(rng() % 2));
    if (f.is_zero() || g.is_zero() || h.is_zero()) continue;
    ++checked;
    int pf = f.parity(), pg = g.parity(), ph = h.parity();
    auto sgn = [](int e) { return e % 2 ? -1 :1; };
    // (-1)^{(|F|+1)(|H|+1)} (F,(G,H)) + cyclic = 0
    Poly j1 = antibracket(f, antibracket(g, h, omega), omega);
    Poly j2 = antibracket(g, antibracket(h, f, omega), omega);
    Poly j3 = antibracket(h, antibracket(f, g, omega), omega);
    Poly total(ctx);
    total += (sgn((pf + 1) * (ph + 1)) < 0) ? -j1 : j1;
    total += (sgn((pg + 1) * (pf + 1)) < 0) ? -j2 : j2;
    total += (sgn((ph + 1) * (pg + 1)) < 0) ? -j3 : j3;
    CHECK(total.is_zero());
  }
  CHECK(checked >= 10);
}

TEST_CASE("remap reorders odd generators with the koszul sign") {
  auto ctx = test_ctx();
  std::vector<GenInfo> reordered = {ctx->info(ctx->index("a1")), ctx->info(ctx->index("b0")),
                                    ctx->info(ctx->index("a0")), ctx->info(ctx->index("b1")),
                                    ctx->info(ctx->index("Bnd")), ctx->info(ctx->index("And")),
                                    ctx->info(ctx->index("x"))};
  auto ctx2 = std::make_shared<GenContext>(reordered);
  Poly p = gen(ctx, "b0") * gen(ctx, "a1");  // b0 before a1 here, a1 before b0 there
  Poly q = p.remap(ctx2);
  Poly direct = Poly::generator(ctx2, ctx2->index("b0")) * Poly::generator(ctx2, ctx2->index("a1"));
  CHECK(q == direct);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 15; ++i) {
    Poly r = random_poly(ctx, rng, 5, 4);
    CHECK(r.remap(ctx2).remap(ctx) == r);  // round trip is the identity
  }
}
