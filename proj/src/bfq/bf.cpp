#include "bfq/bf.hpp"

#include <algorithm>

namespace bfq {

namespace conv {
// Sign conventions of the cellular model. The quantum block is pinned by the
// exact mQME/gluing checks, the classical block by the structure identities.
inline int s_in(int n) { return (n % 2 == 0) ? -1 : 1; }   // (-1)^{n-1}
inline int s_out(int n) { return (n % 2 == 0) ? 1 : -1; }  // (-1)^n
constexpr int s_K = -1;
constexpr int s_delta = -1;      // sign of the <b, delta a> term at a realization
constexpr int sigma_B = -1;      // dual-complex transpose sign inside Omega
inline Rat res_pair_coeff(int k, int n) {
  (void)n;
  return (k % 2 == 0) ? Rat(-1) : Rat(1);
}
// Classical sector.
inline int cl_sigma1(int k) { return (k % 2 == 0) ? -1 : 1; }  // (-1)^{k+1}
constexpr int cl_sigma2 = 1;
inline int cl_sigma3(int k) { return (k % 2 == 0) ? 1 : -1; }  // (-1)^k
inline int cl_v(int n, int k) { return ((n + k) % 2 == 0) ? 1 : -1; }
inline int cl_y(int k) { return (k % 2 == 0) ? 1 : -1; }
}  // namespace conv

bool XiFactor::phase_consistent() const {
  // s = -4 * phase_hbar_exp mod 16, and the fractional exponent is in (1/4)Z.
  Rat q = phase_hbar_exp * (-4);
  if (boost::multiprecision::denominator(q) != 1) return false;
  long long qi = static_cast<long long>(boost::multiprecision::numerator(q) % 16);
  return ((qi - s_mod16) % 16 + 16) % 16 == 0;
}

Prefactor XiFactor::to_prefactor() const {
  Prefactor p;
  p.two_pi_hbar_exp = two_pi_hbar_exp;
  p.hbar_exp = phase_hbar_exp;
  Rat s = phase_hbar_exp * (-4);
  if (boost::multiprecision::denominator(s) != 1)
    throw Error(ErrorCode::Internal, "xi phase exponent not in (1/4)Z");
  p.phase16 = static_cast<long long>(boost::multiprecision::numerator(s) % 16);
  p.normalize();
  return p;
}

XiFactor xi_coefficient(const std::vector<std::size_t>& betti, int n) {
  if (static_cast<int>(betti.size()) != n + 1)
    throw Error(ErrorCode::Invalid, "betti vector must have length n+1");
  XiFactor xi;
  xi.betti = betti;
  long long s = 0;
  for (int k = 0; k <= n; ++k) {
    Rat b(static_cast<long long>(betti[k]));
    int sk = (k % 2 == 0) ? 1 : -1;
    xi.two_pi_hbar_exp += b * (Rat(-1, 4) - Rat(k, 2) * sk);
    xi.phase_hbar_exp += b * (Rat(1, 4) - Rat(k, 2) * sk);
    s += static_cast<long long>(betti[k]) * (-1 + 2 * k * sk);
  }
  xi.s_mod16 = ((s % 16) + 16) % 16;
  return xi;
}

// ---------------------------------------------------------------------------
// Classical checks
// ---------------------------------------------------------------------------

namespace {

struct ClassicalModel {
  ContextPtr ctx;
  Derivation q;        // BRST on fields
  Derivation iota_q;   // contraction: delta z -> Q z
  Derivation del;      // field-space de Rham: z -> delta z
  Derivation q_bnd;    // boundary BRST, boundary coordinates only
  Derivation iota_q_bnd;
  Poly action, alpha, omega, omega_bnd, s_bnd;
  std::vector<int> boundary_field_gens;
};

ClassicalModel build_classical_model(const CellComplex& x, bool corrupt_boundary_sign) {
  int n = x.dimension();
  std::vector<GenInfo> gens;
  auto add = [&](const std::string& name, int ghost, int degree, Role role) {
    gens.push_back({name, ghost, degree, role});
  };
  for (const auto& c : x.cells()) {
    add("A:" + c.id, 1 - c.dim, c.dim, Role::Field);
    add("B:" + c.id, c.dim - 2, c.dim, Role::FieldB);
  }
  for (const auto& c : x.cells())
    if (x.is_boundary(c.id)) add("Bb:" + c.id, c.dim - 1, c.dim, Role::FieldB);
  std::size_t nfields = gens.size();
  for (std::size_t i = 0; i < nfields; ++i)
    add("d" + gens[i].name, gens[i].ghost + 1, gens[i].degree, Role::Delta);
  auto ctx = std::make_shared<GenContext>(gens);

  ClassicalModel m;
  m.ctx = ctx;
  auto g = [&](const std::string& name) { return Poly::generator(ctx, ctx->index(name)); };
  auto has = [&](const std::string& name) { return ctx->has(name); };

  // Q on fields.
  m.q.ctx = ctx;
  m.iota_q.ctx = ctx;
  m.del.ctx = ctx;
  m.q_bnd.ctx = ctx;
  m.iota_q_bnd.ctx = ctx;
  for (const auto& c : x.cells()) {
    Poly qa(ctx);
    for (auto& [fid, cf] : c.boundary) qa += g("A:" + fid) * Scalar(GaussianRational(Rat(cf)));
    m.q.coeff[ctx->index("A:" + c.id)] = qa;

    Poly qb(ctx);
    for (const auto& f : x.cells()) {
      long long inc = x.incidence(f.id, c.id);
      if (inc != 0)
        qb += g("B:" + f.id) * Scalar(GaussianRational(Rat(inc * conv::cl_sigma1(c.dim))));
    }
    if (x.is_boundary(c.id)) qb += g("Bb:" + c.id) * Scalar(GaussianRational(Rat(conv::cl_sigma2)));
    m.q.coeff[ctx->index("B:" + c.id)] = qb;

    if (x.is_boundary(c.id)) {
      Poly qbb(ctx);
      for (const auto& f : x.cells()) {
        if (!x.is_boundary(f.id)) continue;
        if (x.is_in(f.id) != x.is_in(c.id)) continue;
        long long inc = x.incidence(f.id, c.id);
        if (inc != 0) qbb += g("Bb:" + f.id) * Scalar(GaussianRational(Rat(inc * conv::cl_sigma3(c.dim))));
      }
      m.q.coeff[ctx->index("Bb:" + c.id)] = qbb;
    }
  }
  // iota_Q: delta z -> Q z; del: z -> delta z.
  for (std::size_t i = 0; i < nfields; ++i) {
    const std::string& name = ctx->info(static_cast<int>(i)).name;
    auto it = m.q.coeff.find(static_cast<int>(i));
    m.iota_q.coeff[ctx->index("d" + name)] = (it != m.q.coeff.end()) ? it->second : Poly(ctx);
    m.del.coeff[static_cast<int>(i)] = g("d" + name);
  }
  // Boundary BRST and its contraction.
  for (const auto& c : x.cells()) {
    if (!x.is_boundary(c.id)) continue;
    m.boundary_field_gens.push_back(ctx->index("A:" + c.id));
    m.boundary_field_gens.push_back(ctx->index("Bb:" + c.id));
    Poly qa(ctx);
    for (auto& [fid, cf] : c.boundary) qa += g("A:" + fid) * Scalar(GaussianRational(Rat(cf)));
    m.q_bnd.coeff[ctx->index("A:" + c.id)] = qa;
    m.iota_q_bnd.coeff[ctx->index("dA:" + c.id)] = qa;
    Poly qbb(ctx);
    for (const auto& f : x.cells()) {
      if (!x.is_boundary(f.id) || x.is_in(f.id) != x.is_in(c.id)) continue;
      long long inc = x.incidence(f.id, c.id);
      if (inc != 0) qbb += g("Bb:" + f.id) * Scalar(GaussianRational(Rat(inc * conv::cl_sigma3(c.dim))));
    }
    m.q_bnd.coeff[ctx->index("Bb:" + c.id)] = qbb;
    m.iota_q_bnd.coeff[ctx->index("dBb:" + c.id)] = qbb;
  }

  // Action S = <B, dA> + (-1)^{n-1} sum_in v(k) Bb A.
  Poly s(ctx);
  for (const auto& f : x.cells())
    for (auto& [eid, cf] : f.boundary)
      s += g("B:" + f.id) * g("A:" + eid) * Scalar(GaussianRational(Rat(cf)));
  int bnd_base = (n % 2 == 0) ? -1 : 1;  // (-1)^{n-1}
  if (corrupt_boundary_sign) bnd_base = -bnd_base;
  for (const auto& c : x.cells())
    if (x.is_in(c.id))
      s += g("Bb:" + c.id) * g("A:" + c.id) *
           Scalar(GaussianRational(Rat(bnd_base * conv::cl_v(n, c.dim))));
  m.action = s;

  // alpha = sum_out Bb dA + sum_in y(k) A dBb.
  Poly alpha(ctx);
  for (const auto& c : x.cells()) {
    if (x.is_out(c.id)) alpha += g("Bb:" + c.id) * g("dA:" + c.id);
    if (x.is_in(c.id))
      alpha += g("A:" + c.id) * g("dBb:" + c.id) * Scalar(GaussianRational(Rat(conv::cl_y(c.dim))));
  }
  m.alpha = alpha;

  // omega = sum_e dB:e dA:e.
  Poly omega(ctx);
  for (const auto& c : x.cells()) omega += g("dB:" + c.id) * g("dA:" + c.id);
  m.omega = omega;

  // omega_bnd = -delta(alpha); S_bnd = sum over same-part incidences Bb[f:c]A.
  m.omega_bnd = -m.del.apply(alpha);
  Poly sb(ctx);
  for (const auto& f : x.cells()) {
    if (!x.is_boundary(f.id)) continue;
    for (auto& [eid, cf] : f.boundary) {
      (void)cf;
      if (!has("Bb:" + f.id) || !has("A:" + eid)) continue;
      sb += g("Bb:" + f.id) * g("A:" + eid) * Scalar(GaussianRational(Rat(x.incidence(f.id, eid))));
    }
  }
  m.s_bnd = sb;
  return m;
}

std::string residual_str(const Poly& p) { return p.is_zero() ? "0" : p.str(); }

}  // namespace

ClassicalReport classical_check(const CellComplex& x, bool corrupt_boundary_sign) {
  ClassicalModel m = build_classical_model(x, corrupt_boundary_sign);
  ClassicalReport rep;
  auto push = [&](const std::string& name, const Poly& residual) {
    bool ok = residual.is_zero();
    rep.checks.push_back({name, ok, residual_str(residual)});
    rep.pass = rep.pass && ok;
  };

  // Q^2 = 0 on every field generator.
  {
    Poly total(m.ctx);
    for (auto& [gi, c] : m.q.coeff) {
      (void)c;
      total += m.q.apply(m.q.apply(Poly::generator(m.ctx, gi)));
    }
    push("Q^2 = 0", total);
  }
  // iota_Q omega = delta S + pi* alpha.
  push("iota_Q omega = delta S + pi* alpha",
       m.iota_q.apply(m.omega) - m.del.apply(m.action) - m.alpha);
  // L_Q omega = pi* omega_bnd with L_Q = iota_Q delta - delta iota_Q.
  {
    Poly lq = m.iota_q.apply(m.del.apply(m.omega)) - m.del.apply(m.iota_q.apply(m.omega));
    push("L_Q omega = pi* omega_bnd", lq - m.omega_bnd);
  }
  // (1/2) iota_Q iota_Q omega = pi* S_bnd.
  {
    Poly half = m.iota_q.apply(m.iota_q.apply(m.omega)) * Scalar(GaussianRational(Rat(1, 2)));
    push("1/2 iota_Q iota_Q omega = pi* S_bnd", half - m.s_bnd);
  }
  // pi_* Q = Q_bnd: on boundary coordinates Q restricts to the boundary BRST.
  {
    Poly total(m.ctx);
    for (int gi : m.boundary_field_gens) {
      Poly qz = m.q.apply(Poly::generator(m.ctx, gi));
      Poly qb = m.q_bnd.apply(Poly::generator(m.ctx, gi));
      total += qz - qb;
    }
    push("pi_* Q = Q_bnd", total);
  }
  // Boundary Hamiltonian consistency. With the odd charge and these sign
  // conventions the generating relation reads iota_{Q_bnd} omega_bnd = -delta S_bnd.
  push("iota_{Q_bnd} omega_bnd = -delta S_bnd",
       m.iota_q_bnd.apply(m.omega_bnd) + m.del.apply(m.s_bnd));
  return rep;
}

// ---------------------------------------------------------------------------
// Partition function
// ---------------------------------------------------------------------------

namespace {

struct QuantumContext {
  ContextPtr ctx;
  // residual slot labels per degree, in reduced-basis order
  std::vector<std::vector<std::string>> slots;
};

QuantumContext build_quantum_context(const CellComplex& x, const CochainComplex& reduced,
                                     const std::string& tag) {
  std::vector<GenInfo> gens;
  for (const auto& c : x.cells()) {
    if (x.is_out(c.id)) gens.push_back({tag + "A:" + c.id, 1 - c.dim, c.dim, Role::BoundaryA});
    if (x.is_in(c.id)) gens.push_back({tag + "B:" + c.id, c.dim - 1, c.dim, Role::BoundaryB});
  }
  QuantumContext qc;
  qc.slots.resize(reduced.top_degree() + 1);
  for (int k = 0; k <= reduced.top_degree(); ++k) {
    for (const auto& label : reduced.basis(k)) {
      gens.push_back({tag + "a:" + label, 1 - k, k, Role::ResidualA});
      gens.push_back({tag + "b:" + label, k - 2, k, Role::ResidualB});
      qc.slots[k].push_back(label);
    }
  }
  qc.ctx = std::make_shared<GenContext>(gens);
  return qc;
}

OddSymplectic build_residual_pairing(const QuantumContext& qc, int n, const std::string& tag) {
  std::vector<std::tuple<int, int, Rat>> pairs;
  for (int k = 0; k < static_cast<int>(qc.slots.size()); ++k) {
    for (const auto& label : qc.slots[k]) {
      int a = qc.ctx->index(tag + "a:" + label);
      int b = qc.ctx->index(tag + "b:" + label);
      Rat c = conv::res_pair_coeff(k, n);
      if (qc.ctx->is_odd(b)) pairs.emplace_back(a, b, c);
      else pairs.emplace_back(b, a, c);
    }
  }
  return OddSymplectic(qc.ctx, std::move(pairs));
}

Derivation build_boundary_operator(const CellComplex& x, const ContextPtr& ctx, const std::string& tag) {
  int n = x.dimension();
  Derivation om{ctx, {}};
  Scalar pref = Scalar::hbar(1, (n % 2 == 0) ? GaussianRational::i() : -GaussianRational::i());
  for (const auto& c : x.cells()) {
    if (x.is_out(c.id)) {
      Poly coeff(ctx);
      for (auto& [fid, cf] : c.boundary)
        coeff += Poly::generator(ctx, ctx->index(tag + "A:" + fid)) * Scalar(GaussianRational(Rat(cf)));
      if (!coeff.is_zero()) om.coeff[ctx->index(tag + "A:" + c.id)] = coeff * pref;
    }
    if (x.is_in(c.id)) {
      Poly coeff(ctx);
      for (const auto& f : x.cells()) {
        if (!x.is_in(f.id)) continue;
        long long inc = x.incidence(f.id, c.id);
        if (inc != 0)
          coeff += Poly::generator(ctx, ctx->index(tag + "B:" + f.id)) *
                   Scalar(GaussianRational(Rat(inc * conv::sigma_B)));
      }
      if (!coeff.is_zero()) om.coeff[ctx->index(tag + "B:" + c.id)] = coeff * pref;
    }
  }
  return om;
}

// Column of the source map: d of the out-cell c, restricted to the rel-out basis.
std::vector<Rat> dout_column(const CellComplex& x, const CochainComplex& ca, const std::string& c,
                             int k) {
  std::vector<Rat> col(ca.dim(k + 1), Rat(0));
  for (std::size_t r = 0; r < ca.dim(k + 1); ++r) {
    long long inc = x.incidence(ca.basis(k + 1)[r], c);
    if (inc != 0) col[r] = inc;
  }
  return col;
}

Poly assemble_exponent(const CellComplex& x, const CochainComplex& ca, const Contraction& con,
                       const QuantumContext& qc, const std::string& tag) {
  int n = x.dimension();
  const ContextPtr& ctx = qc.ctx;
  auto g = [&](const std::string& name) { return Poly::generator(ctx, ctx->index(name)); };
  Poly f(ctx);
  // T1: s_in * B (incl a) over in-cells.
  for (const auto& c : x.cells()) {
    if (!x.is_in(c.id)) continue;
    int k = c.dim;
    std::size_t row = ca.index_of(k, c.id);
    for (std::size_t i = 0; i < con.reduced.dim(k); ++i) {
      const Rat& v = con.incl[k].at(row, i);
      if (v == 0) continue;
      f += g(tag + "B:" + c.id) * g(tag + "a:" + con.reduced.basis(k)[i]) *
           Scalar(GaussianRational(v * conv::s_in(n)));
    }
  }
  // T2: s_out * b (proj Dout A) over out-cells.
  for (const auto& c : x.cells()) {
    if (!x.is_out(c.id)) continue;
    int k = c.dim;
    if (k + 1 > ca.top_degree()) continue;
    auto col = dout_column(x, ca, c.id, k);
    for (std::size_t j = 0; j < con.reduced.dim(k + 1); ++j) {
      Rat v(0);
      for (std::size_t r = 0; r < col.size(); ++r)
        if (col[r] != 0) v += con.proj[k + 1].at(j, r) * col[r];
      if (v == 0) continue;
      f += g(tag + "b:" + con.reduced.basis(k + 1)[j]) * g(tag + "A:" + c.id) *
           Scalar(GaussianRational(v * conv::s_out(n)));
    }
  }
  // T3: s_K * B (K Dout A) between in- and out-cells.
  for (const auto& cp : x.cells()) {
    if (!x.is_out(cp.id)) continue;
    int k = cp.dim;
    if (k + 1 > ca.top_degree()) continue;
    auto col = dout_column(x, ca, cp.id, k);
    // u = hom[k+1] * col lives in C_A^k.
    std::vector<Rat> u(ca.dim(k), Rat(0));
    for (std::size_t r = 0; r < ca.dim(k); ++r)
      for (std::size_t s = 0; s < col.size(); ++s)
        if (col[s] != 0 && con.hom[k + 1].at(r, s) != 0) u[r] += con.hom[k + 1].at(r, s) * col[s];
    for (const auto& c : x.cells()) {
      if (!x.is_in(c.id) || c.dim != k) continue;
      const Rat& v = u[ca.index_of(k, c.id)];
      if (v == 0) continue;
      f += g(tag + "B:" + c.id) * g(tag + "A:" + cp.id) * Scalar(GaussianRational(v * conv::s_K));
    }
  }
  // T4: s_delta * <b, delta a> from the reduced differential (non-minimal realizations).
  for (int k = 0; k < con.reduced.top_degree(); ++k) {
    const Matrix& delta = con.reduced.d(k);
    for (std::size_t j = 0; j < delta.rows(); ++j)
      for (std::size_t i = 0; i < delta.cols(); ++i) {
        if (delta.at(j, i) == 0) continue;
        f += g(tag + "b:" + con.reduced.basis(k + 1)[j]) * g(tag + "a:" + con.reduced.basis(k)[i]) *
             Scalar(GaussianRational(delta.at(j, i) * conv::s_delta));
      }
  }
  return f;
}

BfState make_bf_state(const CellComplex& x, const Contraction& con, const std::string& tag) {
  CochainComplex ca = relative_cochains(x, RelMode::RelOut);
  QuantumContext qc = build_quantum_context(x, con.reduced, tag);
  Poly f = assemble_exponent(x, ca, con, qc, tag);
  XiFactor xi = xi_coefficient(con.betti(), x.dimension());
  TorsionValue tau = reidemeister_torsion(con);
  Prefactor pref = xi.to_prefactor();
  pref.coeff *= GaussianRational(tau.magnitude);
  pref.normalize();
  BfState z{x, con, State::make(qc.ctx, pref, std::move(f)),
            build_residual_pairing(qc, x.dimension(), tag),
            build_boundary_operator(x, qc.ctx, tag), tag, xi, tau};
  return z;
}

}  // namespace

BfState partition_function(const CellComplex& x, const Contraction& con, const std::string& tag) {
  return make_bf_state(x, con, tag);
}

BfState partition_function(const CellComplex& x, PivotStrategy strategy, const std::string& tag) {
  CochainComplex ca = relative_cochains(x, RelMode::RelOut);
  return make_bf_state(x, contract(ca, strategy), tag);
}

BfState partition_at_realization(const CellComplex& x, const std::set<std::string>& keep,
                                 PivotStrategy strategy, const std::string& tag) {
  CochainComplex ca = relative_cochains(x, RelMode::RelOut);
  Contraction con = contract(ca, strategy, [&](const std::string& id) { return !keep.count(id); });
  return make_bf_state(x, con, tag);
}

Derivation omega_boundary(const BfState& z) { return z.boundary_op; }

MqmeReport check_mqme(const BfState& z) {
  MqmeReport rep;
  State oz = apply_derivation(z.state, z.boundary_op, 1);
  State dz = apply_laplacian(z.state, z.residual_pairing);
  rep.residual = oz.multiplier + dz.multiplier * Scalar::hbar(2);
  rep.pass = rep.residual.is_zero();

  // (Omega + hbar^2 Delta)^2 = 0: Omega^2 on generators, Delta^2 structural,
  // and the cross terms on a monomial sample.
  bool sq = true;
  for (std::size_t g = 0; g < z.state.ctx->size() && sq; ++g)
    sq = z.boundary_op.square_on_generator(static_cast<int>(g)).is_zero();
  if (sq) {
    const auto& ctx = z.state.ctx;
    for (std::size_t g1 = 0; g1 < ctx->size() && sq; ++g1)
      for (std::size_t g2 = g1; g2 < ctx->size() && sq; ++g2) {
        Poly m = Poly::generator(ctx, static_cast<int>(g1)) * Poly::generator(ctx, static_cast<int>(g2));
        if (m.is_zero()) continue;
        Poly cross = z.boundary_op.apply(bv_laplacian(m, z.residual_pairing)) +
                     bv_laplacian(z.boundary_op.apply(m), z.residual_pairing);
        sq = cross.is_zero();
      }
  }
  rep.operator_squares_to_zero = sq;
  return rep;
}

BfState corrupt_propagator(const BfState& z) {
  BfState bad = z;
  // Break one homotopy entry; dK + Kd = 1 - ip fails and the state inherits it.
  Contraction con = z.contraction;
  bool done = false;
  for (std::size_t k = 1; k < con.hom.size() && !done; ++k)
    for (std::size_t r = 0; r < con.hom[k].rows() && !done; ++r)
      for (std::size_t c = 0; c < con.hom[k].cols() && !done; ++c)
        if (con.hom[k].at(r, c) != 0) {
          con.hom[k].at(r, c) *= 2;
          done = true;
        }
  if (!done) throw Error(ErrorCode::Invalid, "no propagator entry to corrupt");
  CochainComplex ca = relative_cochains(z.complex, RelMode::RelOut);
  QuantumContext qc = build_quantum_context(z.complex, con.reduced, z.tag);
  Poly f = assemble_exponent(z.complex, ca, con, qc, z.tag);
  bad.state = State::make(qc.ctx, z.state.pref, std::move(f));
  bad.residual_pairing = build_residual_pairing(qc, z.complex.dimension(), z.tag);
  bad.boundary_op = build_boundary_operator(z.complex, qc.ctx, z.tag);
  return bad;
}

// ---------------------------------------------------------------------------
// Gluing
// ---------------------------------------------------------------------------

namespace {

ContextPtr renamed_context(const ContextPtr& ctx, const std::map<std::string, std::string>& rename) {
  std::vector<GenInfo> gens = ctx->all();
  for (auto& g : gens) {
    auto it = rename.find(g.name);
    if (it != rename.end()) g.name = it->second;
  }
  return std::make_shared<GenContext>(gens);
}

Poly rebind(const Poly& p, const ContextPtr& ctx) {
  Poly r(ctx);
  for (auto& [m, c] : p.terms()) r.add_term(m, c);
  return r;
}

}  // namespace

GlueResult glue(const CellComplex& a, const CellComplex& b,
                const std::map<std::string, std::string>& identify, PivotStrategy strategy) {
  CochainComplex ca = relative_cochains(a, RelMode::RelOut);
  CochainComplex cb = relative_cochains(b, RelMode::RelOut);
  Contraction kona = contract(ca, strategy);
  Contraction konb = contract(cb, strategy);
  BfState za = make_bf_state(a, kona, "L.");
  BfState zb = make_bf_state(b, konb, "R.");

  CellComplex g = glue_complexes(a, b, identify);
  CochainComplex cg = relative_cochains(g, RelMode::RelOut);

  // Interface pairs: out-cells of a against the identified in-cells of b.
  std::vector<std::pair<std::string, std::string>> pairs;
  for (auto& [cca, ccb] : identify) pairs.emplace_back("L.A:" + cca, "R.B:" + ccb);
  State paired = pair_states(za.state, zb.state, pairs);

  // Composite gauge: replay both pieces' pivots (b-side labels renamed across
  // the interface), then eliminate what remains.
  std::map<std::string, std::string> rename_b;  // b cell -> glued cell
  for (auto& [cca, ccb] : identify) rename_b[ccb] = cca;
  auto glue_label = [&](const std::string& blabel) {
    auto it = rename_b.find(blabel);
    return it == rename_b.end() ? blabel : it->second;
  };
  std::vector<std::pair<std::string, std::string>> pivots = kona.pivot_sequence;
  for (auto& [pc, pr] : konb.pivot_sequence) pivots.emplace_back(glue_label(pc), glue_label(pr));
  std::size_t replayed = pivots.size();
  Contraction cong = contract_with_pivots(cg, pivots, true, strategy);

  // Which piece generator carries a glued-complex label?
  auto piece_gen = [&](const std::string& side, const std::string& label) -> std::string {
    // side is "a" or "b" (residual sector names)
    std::string la = "L." + side + ":" + label;
    if (paired.ctx->has(la)) return la;
    for (auto& [cca, ccb] : identify)
      if (cca == label) {
        std::string lb = "R." + side + ":" + ccb;
        if (paired.ctx->has(lb)) return lb;
      }
    std::string lb = "R." + side + ":" + label;
    if (paired.ctx->has(lb)) return lb;
    throw Error(ErrorCode::Internal, "no residual generator for glued label '" + label + "'");
  };

  // Fiber pairs from the finishing pivots: integrate (a:col, b:row), set (a:row, b:col) to zero.
  std::vector<int> integrate, zero;
  for (std::size_t i = replayed; i < cong.pivot_sequence.size(); ++i) {
    auto& [colLabel, rowLabel] = cong.pivot_sequence[i];
    integrate.push_back(paired.ctx->index(piece_gen("a", colLabel)));
    integrate.push_back(paired.ctx->index(piece_gen("b", rowLabel)));
    zero.push_back(paired.ctx->index(piece_gen("a", rowLabel)));
    zero.push_back(paired.ctx->index(piece_gen("b", colLabel)));
  }
  State pushed = bv_pushforward(paired, integrate, zero);

  // Rename surviving generators to the glued cobordism's canonical names.
  std::map<std::string, std::string> rename;
  for (auto& ginfo : pushed.ctx->all()) {
    const std::string& nm = ginfo.name;
    if (nm.rfind("L.", 0) == 0) {
      rename[nm] = nm.substr(2);
    } else if (nm.rfind("R.", 0) == 0) {
      std::string rest = nm.substr(2);
      auto colon = rest.find(':');
      std::string kind = rest.substr(0, colon);
      std::string label = rest.substr(colon + 1);
      rename[nm] = kind + ":" + glue_label(label);
    }
  }
  ContextPtr renamed = renamed_context(pushed.ctx, rename);
  State out;
  out.ctx = renamed;
  out.pref = pushed.pref;
  out.exponent = rebind(pushed.exponent, renamed);
  out.multiplier = rebind(pushed.multiplier, renamed);
  out.canonicalize();

  // Express on the canonical glued context (fresh generator order).
  QuantumContext qc = build_quantum_context(g, cong.reduced, "");
  State final_state;
  final_state.ctx = qc.ctx;
  final_state.pref = out.pref;
  final_state.exponent = out.exponent.remap(qc.ctx);
  final_state.multiplier = out.multiplier.remap(qc.ctx);

  GlueResult res{g, cong,
                 BfState{g, cong, std::move(final_state),
                         build_residual_pairing(qc, g.dimension(), ""),
                         build_boundary_operator(g, qc.ctx, ""), "",
                         xi_coefficient(cong.betti(), g.dimension()), reidemeister_torsion(cong)}};
  return res;
}

BfState change_realization(const BfState& z, const std::set<std::string>& coarse_keep) {
  // Current slots.
  std::set<std::string> slots;
  for (int k = 0; k <= z.contraction.reduced.top_degree(); ++k)
    for (auto& l : z.contraction.reduced.basis(k)) slots.insert(l);
  for (auto& l : coarse_keep)
    if (!slots.count(l))
      throw Error(ErrorCode::NotComparable, "'" + l + "' is not a residual slot of the finer realization");
  Contraction inner =
      contract(z.contraction.reduced, PivotStrategy::LowestIdFirst,
               [&](const std::string& id) { return !coarse_keep.count(id); });
  for (int k = 0; k <= inner.reduced.top_degree(); ++k)
    for (auto& l : inner.reduced.basis(k))
      if (!coarse_keep.count(l))
        throw Error(ErrorCode::NotComparable,
                    "realizations are not comparable: '" + l + "' cannot be integrated out");
  std::vector<int> integrate, zero;
  for (auto& [colLabel, rowLabel] : inner.pivot_sequence) {
    integrate.push_back(z.state.ctx->index(z.tag + "a:" + colLabel));
    integrate.push_back(z.state.ctx->index(z.tag + "b:" + rowLabel));
    zero.push_back(z.state.ctx->index(z.tag + "a:" + rowLabel));
    zero.push_back(z.state.ctx->index(z.tag + "b:" + colLabel));
  }
  State pushed = bv_pushforward(z.state, integrate, zero);
  Contraction composed = compose(z.contraction, inner);
  QuantumContext qc = build_quantum_context(z.complex, composed.reduced, z.tag);
  State out;
  out.ctx = qc.ctx;
  out.pref = pushed.pref;
  out.exponent = pushed.exponent.remap(qc.ctx);
  out.multiplier = pushed.multiplier.remap(qc.ctx);
  out.canonicalize();
  return BfState{z.complex, composed, std::move(out),
                 build_residual_pairing(qc, z.complex.dimension(), z.tag),
                 build_boundary_operator(z.complex, qc.ctx, z.tag), z.tag,
                 xi_coefficient(composed.betti(), z.complex.dimension()),
                 reidemeister_torsion(composed)};
}

std::optional<Poly> gauge_equivalence_witness(const BfState& z1, const BfState& z2,
                                              long long max_degree) {
  // Both states must share generators (same complex, same residual labels).
  for (auto& g : z1.state.ctx->all())
    if (!z2.state.ctx->has(g.name))
      throw Error(ErrorCode::NotComparable, "states do not share generator '" + g.name + "'");
  if (!(z1.state.pref == z2.state.pref))
    throw Error(ErrorCode::NotComparable, "states have different prefactors");
  Poly d1 = z1.state.truncated_expansion(max_degree);
  Poly d2 = z2.state.truncated_expansion(max_degree).remap(z1.state.ctx);
  Poly rhs = d1 - d2;
  if (rhs.is_zero()) return Poly(z1.state.ctx);
  return solve_witness(z1.state.ctx, z1.boundary_op, z1.residual_pairing, rhs, max_degree);
}

}  // namespace bfq
