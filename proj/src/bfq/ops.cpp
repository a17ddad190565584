#include "bfq/ops.hpp"

#include <random>

namespace bfq {

namespace {

std::string betti_string(const std::vector<std::size_t>& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(b[i]);
  }
  return s + ")";
}

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

}  // namespace

RunReport op_cohomology(const CellComplex& x, RelMode mode) {
  RunReport rep;
  CochainComplex c = relative_cochains(x, mode);
  auto h = cohomology(c);
  rep.add_value("betti", betti_string(h.betti));
  long long alt = 0;
  for (std::size_t k = 0; k < h.betti.size(); ++k)
    alt += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(h.betti[k]);
  rep.add_check("euler characteristic equals alternating betti sum", alt == c.euler_characteristic());
  for (int k = 0; k <= h.contraction.reduced.top_degree(); ++k) {
    std::string labels;
    for (auto& l : h.contraction.reduced.basis(k)) labels += (labels.empty() ? "" : ",") + l;
    if (!labels.empty()) rep.add_value("representatives[" + std::to_string(k) + "]", labels);
  }
  return rep;
}

RunReport op_torsion(const CellComplex& x, RelMode mode) {
  RunReport rep;
  CochainComplex c = relative_cochains(x, mode);
  Contraction a = contract(c, PivotStrategy::LowestIdFirst);
  Contraction b = contract(c, PivotStrategy::HighestIdFirst);
  TorsionValue ta = reidemeister_torsion(a);
  TorsionValue tb = reidemeister_torsion(b);
  rep.add_value("torsion", ta.magnitude.str());
  rep.add_value("betti", betti_string(a.betti()));
  rep.add_check("independent of the pivot strategy", ta.magnitude == tb.magnitude,
                tb.magnitude.str());
  return rep;
}

RunReport op_classical_check(const CellComplex& x) {
  RunReport rep;
  ClassicalReport cr = classical_check(x);
  for (auto& c : cr.checks) rep.add_check(c.name, c.pass, c.pass ? "" : c.residual);
  return rep;
}

RunReport op_partition(const CellComplex& x) {
  RunReport rep;
  BfState z = partition_function(x);
  rep.add_value("prefactor", z.state.pref.str());
  rep.add_value("exponent", z.state.exponent.str());
  rep.add_value("torsion", z.tau.magnitude.str());
  rep.add_value("betti", betti_string(z.contraction.betti()));
  rep.add_value("xi_two_pi_hbar_exponent", z.xi.two_pi_hbar_exp.str());
  rep.add_value("xi_phase_hbar_exponent", z.xi.phase_hbar_exp.str());
  rep.add_value("xi_s_mod_16", std::to_string(z.xi.s_mod16));
  rep.add_check("xi phase consistency", z.xi.phase_consistent());
  return rep;
}

RunReport op_qme(const CellComplex& x) {
  RunReport rep;
  BfState z = partition_function(x);
  MqmeReport m = check_mqme(z);
  rep.add_check("mqme", m.pass, m.pass ? "" : m.residual.str());
  rep.add_check("operator squares to zero", m.operator_squares_to_zero);
  rep.add_value("prefactor", z.state.pref.str());
  return rep;
}

RunReport op_glue(const CellComplex& a, const CellComplex& b,
                  const std::map<std::string, std::string>& identify, bool compare_direct) {
  RunReport rep;
  GlueResult res = glue(a, b, identify);
  rep.add_value("glued_cells", std::to_string(res.glued_complex.cells().size()));
  rep.add_value("prefactor", res.state.state.pref.str());
  rep.add_value("exponent", res.state.state.exponent.str());
  MqmeReport m = check_mqme(res.state);
  rep.add_check("mqme of the glued state", m.pass, m.pass ? "" : m.residual.str());
  if (compare_direct) {
    BfState direct = partition_function(res.glued_complex, res.composite_contraction, "");
    bool ok = states_match_up_to_sign(res.state.state, direct.state);
    rep.add_check("glue matches direct (up to sign)", ok);
  }
  // Torsion multiplicativity through the long exact sequence.
  try {
    ComplexSES ses = gluing_ses(a, b, res.glued_complex, identify);
    auto hA = contract(ses.A, PivotStrategy::LowestIdFirst);
    auto hC = contract(ses.C, PivotStrategy::LowestIdFirst);
    auto hB = contract(ses.B, PivotStrategy::LowestIdFirst);
    CochainComplex les = les_complex(ses, hA, hC, hB);
    TorsionValue predicted =
        torsion_of_gluing(reidemeister_torsion(hA), reidemeister_torsion(hB), les);
    TorsionValue direct_tau = reidemeister_torsion(hC);
    rep.add_check("torsion multiplicativity", predicted.magnitude == direct_tau.magnitude,
                  predicted.magnitude.str() + " vs " + direct_tau.magnitude.str());
  } catch (const Error& e) {
    rep.add_check("torsion multiplicativity", false, e.what());
  }
  return rep;
}

RunReport op_realize(const CellComplex& x, const std::set<std::string>& keep,
                     const std::optional<std::set<std::string>>& coarsen_to) {
  RunReport rep;
  BfState z = partition_at_realization(x, keep);
  std::string slots;
  for (int k = 0; k <= z.contraction.reduced.top_degree(); ++k)
    for (auto& l : z.contraction.reduced.basis(k)) slots += (slots.empty() ? "" : ",") + l;
  rep.add_value("residual_slots", slots);
  MqmeReport m = check_mqme(z);
  rep.add_check("mqme at the realization", m.pass, m.pass ? "" : m.residual.str());
  if (coarsen_to) {
    BfState coarse = change_realization(z, *coarsen_to);
    MqmeReport mc = check_mqme(coarse);
    rep.add_check("mqme after pushforward", mc.pass);
    BfState direct = partition_at_realization(x, *coarsen_to);
    rep.add_check("pushforward matches the direct realization (up to sign)",
                  states_match_up_to_sign(coarse.state, direct.state));
  }
  return rep;
}

RunReport op_psm_graphs(int j, int k, int l, const EnumerationBounds& bounds,
                        const std::string& emit) {
  RunReport rep;
  auto graphs = enumerate_graphs(j, k, l, bounds);
  rep.add_value("count", std::to_string(graphs.size()));
  std::size_t idx = 0;
  for (auto& [g, aut] : graphs) {
    std::string key = "graph[" + std::to_string(idx++) + "]";
    if (emit == "tex") {
      std::string s = "\\Gamma_{" + std::to_string(idx - 1) + "}: |\\mathrm{Aut}| = " +
                      std::to_string(aut) + ",\\ \\mathrm{loops} = " + std::to_string(g.loop_count());
      rep.add_value(key, s);
    } else {
      std::string s = "aut=" + std::to_string(aut) + " loops=" + std::to_string(g.loop_count()) +
                      " edges=[";
      bool first = true;
      for (auto& [e, m] : g.edges)
        for (int t = 0; t < m; ++t) {
          if (!first) s += " ";
          first = false;
          s += std::to_string(e.first) + ">" + std::to_string(e.second);
        }
      s += "] a_leaves=[";
      for (int v = 0; v < g.vertex_count(); ++v) s += (v ? "," : "") + std::to_string(g.a_leaves[v]);
      s += "] b_leaves=[";
      for (int v = 0; v < g.vertex_count(); ++v) s += (v ? "," : "") + std::to_string(g.b_leaves[v]);
      s += "]";
      rep.add_value(key, s);
    }
  }
  // Per-graph loop invariant.
  bool loops_ok = true;
  for (auto& [g, aut] : graphs) {
    (void)aut;
    if (g.loop_count() != g.edge_count() - g.vertex_count() + 1) loops_ok = false;
  }
  rep.add_check("loop count equals E - V + 1", loops_ok);
  return rep;
}

RunReport op_psm_weight(const WeightGraph& g, std::uint64_t samples, std::uint64_t seed, int threads,
                        std::optional<double> tolerance) {
  RunReport rep;
  rep.seed = seed;
  WeightEstimate est = tolerance ? kontsevich_weight_checked(g, samples, seed, *tolerance, threads)
                                 : kontsevich_weight(g, samples, seed, threads);
  char buf[64];
  snprintf(buf, sizeof buf, "%.9f", est.value);
  rep.add_value("estimate", buf);
  snprintf(buf, sizeof buf, "%.9f", est.sigma);
  rep.add_value("sigma", buf);
  rep.add_value("samples", std::to_string(est.samples));
  return rep;
}

RunReport op_psm_star(const PoissonStructure& pi, long long order, bool check_assoc) {
  RunReport rep;
  rep.add_check("antisymmetry and jacobi", pi.jacobi_holds());
  rep.add_value("unimodular", pi.is_unimodular() ? "true" : "false");
  if (pi.is_constant()) {
    bool ok = true;
    for (int a = 0; a < pi.dim && ok; ++a)
      for (int b = 0; b < pi.dim && ok; ++b)
        ok = star_commutator_bivector(pi, a, b, order) == pi.component(a, b);
    rep.add_check("star commutator bivector equals pi", ok);
  }
  if (check_assoc) {
    if (!pi.is_constant()) throw Error(ErrorCode::OrderUnavailable, "associativity check needs constant pi");
    bool ok = true;
    std::vector<PolyU> monos;
    for (int a = 0; a < pi.dim; ++a) monos.push_back(PolyU::coordinate(pi.dim, a));
    for (int a = 0; a < pi.dim; ++a)
      for (int b = a; b < pi.dim; ++b) monos.push_back(PolyU::coordinate(pi.dim, a) * PolyU::coordinate(pi.dim, b));
    for (auto& f : monos)
      for (auto& g : monos)
        for (auto& h : monos) {
          PolyU lhs = moyal_star(moyal_star(f, g, pi, order), h, pi, order).truncate_hbar(order);
          PolyU rhs = moyal_star(f, moyal_star(g, h, pi, order), pi, order).truncate_hbar(order);
          if (!(lhs == rhs)) ok = false;
        }
    rep.add_check("associativity to order hbar^" + std::to_string(order), ok);
  }
  return rep;
}

RunReport op_selftest(std::uint64_t seed) {
  RunReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);

  // Contractions on random 2-complexes.
  {
    bool ok = true;
    for (int i = 0; i < 10 && ok; ++i) {
      int nv = 2 + static_cast<int>(rng() % 4);
      int ne = 1 + static_cast<int>(rng() % 6);
      std::vector<RawCell> cells;
      for (int v = 0; v < nv; ++v) cells.push_back({"v" + std::to_string(v), 0, {}});
      for (int e = 0; e < ne; ++e) {
        int a = static_cast<int>(rng() % nv), b = static_cast<int>(rng() % nv);
        RawCell c{"e" + std::to_string(e), 1, {}};
        if (a != b) {
          c.boundary.emplace_back("v" + std::to_string(b), 1);
          c.boundary.emplace_back("v" + std::to_string(a), -1);
        }
        cells.push_back(c);
      }
      CellComplex x = CellComplex::build(1, cells, {}, {});
      CochainComplex c = relative_cochains(x, RelMode::Absolute);
      for (auto strat : {PivotStrategy::LowestIdFirst, PivotStrategy::HighestIdFirst}) {
        try {
          contract(c, strat).verify();
        } catch (const Error&) {
          ok = false;
        }
      }
    }
    rep.add_check("contraction identities on random complexes", ok);
  }
  // Algebra identities on random polynomials.
  {
    std::vector<GenInfo> gens = {{"a0", 0, 0, Role::ResidualA}, {"b0", -1, 0, Role::ResidualB},
                                 {"a1", 1, 0, Role::ResidualA}, {"b1", -2, 0, Role::ResidualB}};
    auto ctx = std::make_shared<GenContext>(gens);
    OddSymplectic omega(ctx, {{0, 1, Rat(1)}, {3, 2, Rat(1)}});
    auto rnd = [&](int parity) {
      Poly p(ctx);
      for (int t = 0; t < 4; ++t) {
        Poly m = Poly::constant(ctx, Scalar(GaussianRational(Rat(1 + static_cast<long long>(rng() % 5)))));
        int d = static_cast<int>(rng() % 4);
        for (int i = 0; i < d; ++i) m = m * Poly::generator(ctx, static_cast<int>(rng() % 4));
        p += m;
      }
      auto [pe, po] = p.parity_split();
      return parity == 0 ? pe : po;
    };
    bool ok = true;
    for (int i = 0; i < 20 && ok; ++i) {
      Poly f = rnd(static_cast<int>(rng() % 2));
      ok = bv_laplacian(bv_laplacian(f, omega), omega).is_zero();
      if (!ok) break;
      Poly g = rnd(static_cast<int>(rng() % 2));
      if (f.is_zero() || g.is_zero()) continue;
      int pf = f.parity();
      Poly lhs = bv_laplacian(f * g, omega);
      Poly rhs = bv_laplacian(f, omega) * g;
      Poly t2 = f * bv_laplacian(g, omega) + antibracket(f, g, omega);
      if (pf % 2) rhs -= t2;
      else rhs += t2;
      ok = (lhs == rhs);
    }
    rep.add_check("bv laplacian and bracket identities", ok);
  }
  // mQME corpus.
  {
    bool ok = true;
    for (auto& x : {interval_complex(2), interval_complex(3), circle_complex(1), disk_complex()}) {
      MqmeReport m = check_mqme(partition_function(x));
      ok = ok && m.pass && m.operator_squares_to_zero;
    }
    rep.add_check("mqme corpus", ok);
  }
  // Graph orbit counting at a small size.
  {
    EnumerationBounds bounds;
    bounds.max_incoming = 2;
    bounds.max_leaves = 2;
    auto reduced = enumerate_graphs(1, 1, 1, bounds);
    auto labeled = enumerate_labeled_graphs(1, 1, 1, bounds);
    std::set<std::string> keys;
    for (auto& g : labeled) keys.insert(g.canonical_key());
    rep.add_check("graph enumeration orbit count", keys.size() == reduced.size());
  }
  return rep;
}

}  // namespace bfq
