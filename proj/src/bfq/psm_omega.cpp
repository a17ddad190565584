#include "bfq/psm_omega.hpp"

#include <algorithm>
#include <set>

namespace bfq {

namespace {

int word_sort_sign(const ContextPtr& ctx, std::vector<int>& word) {
  // Sort derivative word ascending; count inversions among odd-generator slots.
  int sign = 0;
  for (std::size_t i = 0; i < word.size(); ++i)
    for (std::size_t j = i + 1; j < word.size(); ++j)
      if (word[i] > word[j] && ctx->is_odd(word[i]) && ctx->is_odd(word[j])) ++sign;
  std::sort(word.begin(), word.end());
  return (sign % 2) ? -1 : 1;
}

}  // namespace

void OrderedOp::add(const std::vector<int>& word_in, const Poly& coeff) {
  if (coeff.is_zero()) return;
  std::vector<int> word = word_in;
  int sign = word_sort_sign(ctx, word);
  // Repeated odd derivative kills the term.
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    if (word[i] == word[i + 1] && ctx->is_odd(word[i])) return;
  Poly c = (sign < 0) ? -coeff : coeff;
  auto it = terms.find(word);
  if (it == terms.end()) terms.emplace(word, c);
  else {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

Poly OrderedOp::apply(const Poly& p) const {
  Poly out(ctx);
  for (auto& [word, coeff] : terms) {
    Poly q = p;
    for (std::size_t i = word.size(); i-- > 0;) q = q.left_derivative(word[i]);
    if (!q.is_zero()) out += coeff * q;
  }
  return out;
}

OrderedOp OrderedOp::operator+(const OrderedOp& o) const {
  OrderedOp r = *this;
  for (auto& [w, c] : o.terms) r.add(w, c);
  return r;
}

bool OrderedOp::same_terms(const OrderedOp& o) const {
  if (terms.size() != o.terms.size()) return false;
  for (auto& [w, c] : terms) {
    auto it = o.terms.find(w);
    if (it == o.terms.end() || !(it->second == c)) return false;
  }
  return true;
}

bool OrderedOp::is_zero() const { return terms.empty(); }

long long OrderedOp::max_word_length() const {
  long long q = 0;
  for (auto& [w, c] : terms) {
    (void)c;
    q = std::max<long long>(q, static_cast<long long>(w.size()));
  }
  return q;
}

OrderedOp OrderedOp::compose(const OrderedOp& other) const {
  // The composed action determines normal-ordered term data uniquely:
  // reconstruct triangularly in word length using the monomials mu_w.
  // Candidate words: merges of one word of each factor with any subset of the
  // outer word contracted away.
  OrderedOp out{ctx, {}};
  std::set<std::vector<int>> cand;
  for (auto& [w1, c1] : terms) {
    (void)c1;
    for (auto& [w2, c2] : other.terms) {
      (void)c2;
      std::size_t subsets = static_cast<std::size_t>(1) << w1.size();
      for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<int> w;
        for (std::size_t i = 0; i < w1.size(); ++i)
          if (!(mask & (static_cast<std::size_t>(1) << i))) w.push_back(w1[i]);
        for (int g : w2) w.push_back(g);
        std::sort(w.begin(), w.end());
        bool dead = false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
          if (w[i] == w[i + 1] && ctx->is_odd(w[i])) dead = true;
        if (!dead) cand.insert(w);
      }
    }
  }
  std::vector<std::vector<int>> words(cand.begin(), cand.end());
  std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  auto monomial_of = [&](const std::vector<int>& w) {
    Poly p = Poly::constant(ctx, Scalar(1));
    for (int g : w) p = p * Poly::generator(ctx, g);
    return p;
  };
  for (auto& w : words) {
    Poly mu = monomial_of(w);
    if (mu.is_zero()) continue;
    Poly act = apply(other.apply(mu));
    // Subtract the contributions of the shorter words already known.
    for (auto& [w2, c2] : out.terms) {
      if (w2.size() >= w.size()) continue;
      Poly q = mu;
      for (std::size_t i = w2.size(); i-- > 0;) q = q.left_derivative(w2[i]);
      if (!q.is_zero()) act -= c2 * q;
    }
    if (act.is_zero()) continue;
    // act = c_w * D_w(mu_w); D_w(mu_w) is a scalar.
    Poly dmu = mu;
    for (std::size_t i = w.size(); i-- > 0;) dmu = dmu.left_derivative(w[i]);
    Scalar norm = dmu.constant_term();
    if (norm.is_zero() || !dmu.is_constant())
      throw Error(ErrorCode::Internal, "operator reconstruction normalization failed");
    out.add(w, act * (Scalar(1) / norm));
  }
  return out;
}

OrderedOp OrderedOp::weight_component(long long w) const {
  OrderedOp out{ctx, {}};
  for (auto& [word, coeff] : terms) {
    Poly keep(ctx);
    for (auto& [m, c] : coeff.terms()) {
      Scalar filtered;
      for (auto& [k, v] : c.terms())
        if (k - static_cast<long long>(word.size()) == w) filtered += Scalar::hbar(k, v);
      if (!filtered.is_zero()) keep.add_term(m, filtered);
    }
    if (!keep.is_zero()) out.add(word, keep);
  }
  return out;
}

std::string PsmBoundary::gen_name(const std::string& cell, int alpha) const {
  return "B" + std::to_string(alpha + 1) + ":" + cell;
}

PsmBoundary psm_boundary_context(const CellComplex& circle, int target_dim) {
  if (circle.dimension() != 1) throw Error(ErrorCode::Invalid, "boundary data must be 1-dimensional");
  if (target_dim < 1) throw Error(ErrorCode::IndexMismatch, "target dimension must be positive");
  for (const auto& c : circle.cells())
    if (c.dim == 1 &&
        (c.boundary.size() != 2 || c.boundary[0].second + c.boundary[1].second != 0))
      throw Error(ErrorCode::Invalid, "every edge needs distinct start and end vertices");
  PsmBoundary b;
  b.circle = circle;
  b.target_dim = target_dim;
  std::vector<GenInfo> gens;
  for (const auto& c : circle.cells())
    for (int al = 0; al < target_dim; ++al)
      gens.push_back({b.gen_name(c.id, al), c.dim - 1, c.dim, Role::BoundaryB});
  b.ctx = std::make_shared<GenContext>(gens);
  return b;
}

OrderedOp omega_psm_abelian(const PsmBoundary& bnd) {
  // (-1)^n i hbar sum (d-dual B) d/dB with n = 2 and the dual transpose sign -1,
  // matching the abelian boundary operator of the BF module.
  OrderedOp op{bnd.ctx, {}};
  Scalar pref = Scalar::hbar(1, GaussianRational::i());
  for (const auto& c : bnd.circle.cells()) {
    for (int al = 0; al < bnd.target_dim; ++al) {
      Poly coeff(bnd.ctx);
      for (const auto& f : bnd.circle.cells()) {
        long long inc = bnd.circle.incidence(f.id, c.id);
        if (inc != 0)
          coeff += Poly::generator(bnd.ctx, bnd.ctx->index(bnd.gen_name(f.id, al))) *
                   Scalar(GaussianRational(Rat(-inc)));
      }
      if (!coeff.is_zero())
        op.add({bnd.ctx->index(bnd.gen_name(c.id, al))}, coeff * pref);
    }
  }
  return op;
}

OrderedOp omega_psm(const PsmBoundary& bnd, const PoissonStructure& pi, long long order) {
  if (pi.dim != bnd.target_dim)
    throw Error(ErrorCode::IndexMismatch, "bivector dimension does not match the boundary fields");
  OrderedOp op = omega_psm_abelian(bnd);
  // Pi to the requested order (exact for constant pi, order 0 otherwise).
  std::vector<std::vector<PolyU>> Pi(pi.dim, std::vector<PolyU>(pi.dim, PolyU(pi.dim)));
  bool any = false;
  for (int a = 0; a < pi.dim; ++a)
    for (int b = 0; b < pi.dim; ++b) {
      Pi[a][b] = star_commutator_bivector(pi, a, b, order);
      any = any || !Pi[a][b].is_zero();
    }
  if (!any) return op;

  const ContextPtr& ctx = bnd.ctx;
  auto gen = [&](const std::string& cell, int al) {
    return Poly::generator(ctx, ctx->index(bnd.gen_name(cell, al)));
  };
  Scalar ihbar = Scalar::hbar(1, GaussianRational::i());
  Scalar half = Scalar(GaussianRational(Rat(1, 2)));

  // Start/end vertices of each edge; predecessor edge of each vertex.
  std::map<std::string, std::pair<std::string, std::string>> ends;  // edge -> (start, end)
  std::map<std::string, std::string> edge_into;                     // vertex -> edge ending there
  for (const auto& c : bnd.circle.cells()) {
    if (c.dim != 1) continue;
    std::string start, end;
    for (auto& [v, cf] : c.boundary) (cf > 0 ? end : start) = v;
    ends[c.id] = {start, end};
    edge_into[end] = c.id;
  }

  // Pi(B) monomial evaluated on the 0-form components (midpoint values of an edge).
  auto eval_at_edge = [&](const PolyU& p, const std::string& edge) {
    Poly out(ctx);
    for (auto& [expo, c] : p.terms()) {
      Poly mono = Poly::constant(ctx, c);
      for (int g = 0; g < pi.dim; ++g)
        for (int t = 0; t < expo[g]; ++t) mono = mono * gen(edge, g);
      out += mono;
    }
    return out;
  };

  // Edge terms: (1/2)(i hbar)^2 Pi^{ab}(B(E)) [d_{a,start} d_{b,E} + d_{a,E} d_{b,start}].
  // Both 0-form substitution slots sit at the start vertex of the edge; this is
  // the choice for which the constant-structure operator squares to zero
  // exactly on every cellular circle.
  for (auto& [edge, se] : ends) {
    const std::string& start = se.first;
    for (int a = 0; a < pi.dim; ++a)
      for (int b = 0; b < pi.dim; ++b) {
        if (Pi[a][b].is_zero()) continue;
        Poly coeff = eval_at_edge(Pi[a][b], edge) * (half * ihbar * ihbar);
        if (coeff.is_zero()) continue;
        op.add({ctx->index(bnd.gen_name(start, a)), ctx->index(bnd.gen_name(edge, b))}, coeff);
        op.add({ctx->index(bnd.gen_name(edge, a)), ctx->index(bnd.gen_name(start, b))}, coeff);
      }
  }
  // Vertex terms: the 1-form slot inside Pi(B). For the monomial word of Pi each
  // position in turn carries the vertex 1-form component; 0-form factors before
  // the slot evaluate on the edge running into the vertex, after it on the edge
  // leaving it.
  for (const auto& c : bnd.circle.cells()) {
    if (c.dim != 0) continue;
    const std::string& v = c.id;
    std::string ein = edge_into.at(v);
    std::string eout;
    for (auto& [edge, se] : ends)
      if (se.first == v) eout = edge;
    for (int a = 0; a < pi.dim; ++a)
      for (int b = 0; b < pi.dim; ++b) {
        if (Pi[a][b].is_zero()) continue;
        Poly coeff(ctx);
        for (auto& [expo, cc] : Pi[a][b].terms()) {
          // word of the monomial in ascending index order
          std::vector<int> word;
          for (int g = 0; g < pi.dim; ++g)
            for (int t = 0; t < expo[g]; ++t) word.push_back(g);
          for (std::size_t slot = 0; slot < word.size(); ++slot) {
            Poly mono = Poly::constant(ctx, cc);
            for (std::size_t t = 0; t < word.size(); ++t) {
              if (t < slot) mono = mono * gen(ein, word[t]);
              else if (t == slot) mono = mono * gen(v, word[t]);
              else mono = mono * gen(eout, word[t]);
            }
            coeff += mono;
          }
        }
        coeff = coeff * (half * ihbar * ihbar);
        if (coeff.is_zero()) continue;
        op.add({ctx->index(bnd.gen_name(v, a)), ctx->index(bnd.gen_name(v, b))}, coeff);
      }
  }
  return op;
}

OrderedOp omega_psm_vertex_charge(const PsmBoundary& bnd, const PoissonStructure& pi,
                                  const std::string& vertex) {
  if (pi.dim != bnd.target_dim)
    throw Error(ErrorCode::IndexMismatch, "bivector dimension does not match the boundary fields");
  if (!pi.is_linear())
    throw Error(ErrorCode::OrderUnavailable, "the ultralocal charge is defined for linear structures");
  if (bnd.circle.cell(vertex).dim != 0) throw Error(ErrorCode::Invalid, "vertex cell expected");
  OrderedOp op{bnd.ctx, {}};
  Scalar ihbar = Scalar::hbar(1, GaussianRational::i());
  Scalar half = Scalar(GaussianRational(Rat(1, 2)));
  for (int a = 0; a < pi.dim; ++a)
    for (int b = 0; b < pi.dim; ++b)
      for (int g = 0; g < pi.dim; ++g) {
        Scalar c = pi.derivative_at_zero(a, b, {g});
        if (c.is_zero()) continue;
        Poly coeff = Poly::generator(bnd.ctx, bnd.ctx->index(bnd.gen_name(vertex, g))) *
                     (Scalar(c) * half * ihbar * ihbar);
        op.add({bnd.ctx->index(bnd.gen_name(vertex, a)), bnd.ctx->index(bnd.gen_name(vertex, b))},
               coeff);
      }
  return op;
}

Poly omega_square_residual(const OrderedOp& op, long long deg) {
  const ContextPtr& ctx = op.ctx;
  // Enumerate monomials of degree <= deg (normal form).
  std::vector<Monomial> monos = {Monomial{}};
  std::vector<Monomial> frontier = {Monomial{}};
  for (long long d = 0; d < deg; ++d) {
    std::vector<Monomial> next;
    for (auto& m : frontier) {
      int start = m.factors.empty() ? 0 : m.factors.back().first;
      for (int g = start; g < static_cast<int>(ctx->size()); ++g) {
        Monomial n = m;
        if (!n.factors.empty() && n.factors.back().first == g) {
          if (ctx->is_odd(g)) continue;
          n.factors.back().second += 1;
        } else {
          n.factors.emplace_back(g, 1);
        }
        next.push_back(n);
      }
    }
    frontier = next;
    for (auto& m : frontier) monos.push_back(m);
  }
  for (auto& m : monos) {
    Poly p(ctx);
    p.add_term(m, Scalar(1));
    Poly r = op.apply(op.apply(p));
    if (!r.is_zero()) return r;
  }
  return Poly(ctx);
}

}  // namespace bfq
