#include "bfq/bv.hpp"

#include <algorithm>

namespace bfq {

OddSymplectic::OddSymplectic(ContextPtr ctx, std::vector<std::tuple<int, int, Rat>> pairs)
    : ctx_(std::move(ctx)), pairs_(std::move(pairs)) {
  for (auto& [u, t, c] : pairs_) {
    if (c == 0) throw Error(ErrorCode::DegenerateOmega, "pairing coefficient is zero");
    if (ctx_->is_odd(u) || !ctx_->is_odd(t))
      throw Error(ErrorCode::DegenerateOmega, "pair (" + ctx_->info(u).name + "," + ctx_->info(t).name +
                                                  ") must couple an even and an odd generator");
    if (!partner_.emplace(u, t).second || !partner_.emplace(t, u).second)
      throw Error(ErrorCode::DegenerateOmega, "generator appears in two pairs");
  }
}

OddSymplectic OddSymplectic::restricted(const std::vector<int>& keep_gens) const {
  std::set<int> keep(keep_gens.begin(), keep_gens.end());
  std::vector<std::tuple<int, int, Rat>> sub;
  for (auto& [u, t, c] : pairs_) {
    bool ku = keep.count(u), kt = keep.count(t);
    if (ku != kt)
      throw Error(ErrorCode::DegenerateOmega, "restriction splits a conjugate pair");
    if (ku) sub.emplace_back(u, t, c);
  }
  return OddSymplectic(ctx_, std::move(sub));
}

Poly bv_laplacian(const Poly& f, const OddSymplectic& omega) {
  Poly r(f.ctx());
  for (auto& [u, t, c] : omega.pairs()) {
    Poly inner = f.left_derivative(t);
    if (inner.is_zero()) continue;
    r += inner.left_derivative(u) * Scalar(GaussianRational(Rat(1) / c));
  }
  return r;
}

Poly antibracket(const Poly& f, const Poly& g, const OddSymplectic& omega) {
  auto bracket_hom = [&](const Poly& fh, int pf) {
    // (-1)^{|F|} [ Delta(FG) - Delta(F)G - (-1)^{|F|} F Delta(G) ]
    Poly t1 = bv_laplacian(fh * g, omega);
    Poly t2 = bv_laplacian(fh, omega) * g;
    Poly t3 = fh * bv_laplacian(g, omega);
    Poly r = t1 - t2;
    if (pf % 2 == 0) r = r - t3;
    else r = r + t3;
    if (pf % 2 != 0) r = -r;
    return r;
  };
  auto [fe, fo] = f.parity_split();
  Poly r(f.ctx());
  if (!fe.is_zero()) r += bracket_hom(fe, 0);
  if (!fo.is_zero()) r += bracket_hom(fo, 1);
  return r;
}

State State::make(ContextPtr ctx, Prefactor pref, Poly exponent) {
  State z;
  z.ctx = ctx;
  z.pref = pref;
  z.exponent = std::move(exponent);
  z.multiplier = Poly::constant(ctx, Scalar(1));
  if (!z.exponent.is_zero() && z.exponent.parity() != 0)
    throw Error(ErrorCode::UnsupportedExponent, "state exponent must be even");
  if (!z.exponent.is_zero() && !z.exponent.truncate_degree(0).is_zero())
    throw Error(ErrorCode::UnsupportedExponent, "state exponent must have no constant term");
  return z;
}

void State::canonicalize() {
  // Scalar monomial multipliers fold into the prefactor.
  if (multiplier.is_constant()) {
    Scalar c = multiplier.constant_term();
    if (c.is_zero()) {
      pref = Prefactor::zero();
      multiplier = Poly::constant(ctx, Scalar(1));
      exponent = Poly(ctx);
      return;
    }
    if (c.is_monomial()) {
      auto [k, v] = *c.terms().begin();
      pref.coeff *= v;
      pref.hbar_exp += k;
      pref.normalize();
      multiplier = Poly::constant(ctx, Scalar(1));
    }
    return;
  }
  // multiplier = c0 (1 + P): if P is nilpotent, fold log(1+P)/lambda into the exponent.
  Scalar c0 = multiplier.constant_term();
  if (c0.is_zero() || !c0.is_monomial()) return;
  Poly rest = multiplier - Poly::constant(ctx, c0);
  Poly p = rest * (Scalar(1) / c0);
  // log(1 + P) = sum (-1)^{m+1} P^m / m, provided P is nilpotent.
  Poly logp(ctx);
  Poly power = p;
  long long cap = 2 * static_cast<long long>(ctx->size()) + 2;
  bool nilpotent = false;
  for (long long m = 1; m <= cap; ++m) {
    Scalar coef = Scalar(GaussianRational(Rat((m % 2) ? 1 : -1, m)));
    logp += power * coef;
    power = power * p;
    if (power.is_zero()) { nilpotent = true; break; }
  }
  if (!nilpotent) return;
  exponent += logp * (Scalar(1) / Scalar::i_over_hbar());
  multiplier = Poly::constant(ctx, c0);
  canonicalize();
}

bool State::equals(const State& o) const {
  State a = *this, b = o;
  a.canonicalize();
  b.canonicalize();
  return a.pref == b.pref && a.exponent == b.exponent && a.multiplier == b.multiplier;
}

bool State::equals_up_to_sign(const State& o) const {
  State b = o;
  if (equals(b)) return true;
  b.pref.coeff = -b.pref.coeff;
  return equals(b);
}

Poly State::truncated_expansion(long long max_degree) const {
  Poly acc = Poly::constant(ctx, Scalar(1));
  Poly term = Poly::constant(ctx, Scalar(1));
  Scalar lambda = Scalar::i_over_hbar();
  for (long long k = 1; k <= max_degree; ++k) {
    term = (term * exponent).truncate_degree(max_degree) * (lambda * Scalar(GaussianRational(Rat(1, k))));
    if (term.is_zero()) break;
    acc += term;
  }
  return (multiplier * acc).truncate_degree(max_degree);
}

std::string State::str() const {
  std::string s = pref.str();
  if (!multiplier.is_constant() || !(multiplier.constant_term() == Scalar(1)))
    s += " * [" + multiplier.str() + "]";
  s += " * exp((i/hbar)(" + exponent.str() + "))";
  return s;
}

State tensor(const State& a, const State& b) {
  std::vector<GenInfo> gens = a.ctx->all();
  for (auto& g : b.ctx->all()) gens.push_back(g);
  auto ctx = std::make_shared<GenContext>(std::move(gens));
  State z;
  z.ctx = ctx;
  z.pref = a.pref * b.pref;
  z.exponent = a.exponent.remap(ctx) + b.exponent.remap(ctx);
  z.multiplier = a.multiplier.remap(ctx) * b.multiplier.remap(ctx);
  return z;
}

void require_gaussian_exponent(const State& z) {
  // Auxiliary generators are external parameters and do not count towards the
  // Gaussian degree.
  long long d = 0;
  for (auto& [m, c] : z.exponent.terms()) {
    (void)c;
    long long md = 0;
    for (auto& [g, e] : m.factors)
      if (z.ctx->info(g).role != Role::Auxiliary) md += e;
    d = std::max(d, md);
  }
  if (d > 2)
    throw Error(ErrorCode::UnsupportedExponent,
                "exponent has polynomial degree > 2; handle it order by order instead");
}

State apply_laplacian(const State& z, const OddSymplectic& omega) {
  require_gaussian_exponent(z);
  Scalar lambda = Scalar::i_over_hbar();
  const Poly& f = z.exponent;
  const Poly& m = z.multiplier;
  // Delta(M e^{lF}) = [Delta M + (-1)^{|M|} l (M,F) + (-1)^{|M|} M (l Delta F + 1/2 l^2 (F,F))] e^{lF}
  Poly df = bv_laplacian(f, omega);
  Poly ff = antibracket(f, f, omega);
  Poly tail = df * lambda + ff * (lambda * lambda * Scalar(GaussianRational(Rat(1, 2))));
  auto [me, mo] = m.parity_split();
  Poly result = bv_laplacian(m, omega);
  if (!me.is_zero()) result += antibracket(me, f, omega) * lambda + me * tail;
  if (!mo.is_zero()) result += -(antibracket(mo, f, omega) * lambda) - mo * tail;
  State out = z;
  out.multiplier = result;
  return out;
}

State apply_derivation(const State& z, const Derivation& d, int dparity) {
  require_gaussian_exponent(z);
  Scalar lambda = Scalar::i_over_hbar();
  const Poly& m = z.multiplier;
  Poly df = d.apply(z.exponent) * lambda;
  auto [me, mo] = m.parity_split();
  Poly result = d.apply(m);
  if (!me.is_zero()) result += me * df;
  if (!mo.is_zero()) {
    if (dparity % 2 == 0) result += mo * df;
    else result -= mo * df;
  }
  State out = z;
  out.multiplier = result;
  return out;
}

namespace {

// Berezin integral over odd generators, ascending measure convention:
// integral of t_{o_1} ... t_{o_p} (indices ascending) is 1.
Poly berezin(Poly p, std::vector<int> odd_vars) {
  std::sort(odd_vars.begin(), odd_vars.end());
  for (int g : odd_vars) p = p.left_derivative(g);
  return p;
}

Scalar wick_moment(const std::vector<int>& slots, const std::vector<std::vector<Scalar>>& cov) {
  if (slots.empty()) return Scalar(1);
  if (slots.size() % 2) return Scalar();
  Scalar total;
  const int first = slots[0];
  for (std::size_t j = 1; j < slots.size(); ++j) {
    std::vector<int> rest;
    for (std::size_t k = 1; k < slots.size(); ++k)
      if (k != j) rest.push_back(slots[k]);
    total += cov[first][slots[j]] * wick_moment(rest, cov);
  }
  return total;
}

}  // namespace

State integrate_generators(const State& z, std::vector<int> odd_vars, std::vector<int> even_vars) {
  require_gaussian_exponent(z);
  State out = z;
  Scalar lambda = Scalar::i_over_hbar();

  // --- odd sector (finite expansion) ---
  if (!odd_vars.empty()) {
    std::set<int> vars(odd_vars.begin(), odd_vars.end());
    Poly g_odd(out.ctx), rest(out.ctx);
    for (auto& [m, c] : out.exponent.terms()) {
      bool has = false;
      for (auto& [gen, e] : m.factors) {
        (void)e;
        if (vars.count(gen)) { has = true; break; }
      }
      Poly term(out.ctx);
      term.add_term(m, c);
      if (has) g_odd += term;
      else rest += term;
    }
    Poly expseries = Poly::constant(out.ctx, Scalar(1));
    Poly power = Poly::constant(out.ctx, Scalar(1));
    for (std::size_t k = 1; k <= odd_vars.size(); ++k) {
      power = power * (g_odd * (lambda * Scalar(GaussianRational(Rat(1, static_cast<long long>(k))))));
      if (power.is_zero()) break;
      expseries += power;
    }
    Poly integrand = out.multiplier * expseries;
    out.multiplier = berezin(integrand, odd_vars);
    out.exponent = rest;
    for (int v : odd_vars)
      if (out.multiplier.depends_on(v) || out.exponent.depends_on(v))
        throw Error(ErrorCode::Internal, "odd integration variable survived");
  }

  // --- even sector (exact stationary phase) ---
  if (!even_vars.empty()) {
    std::sort(even_vars.begin(), even_vars.end());
    std::map<int, std::size_t> slot;
    for (std::size_t i = 0; i < even_vars.size(); ++i) slot[even_vars[i]] = i;
    std::size_t n = even_vars.size();
    Matrix Q(n, n);
    std::vector<Poly> J(n, Poly(out.ctx));
    Poly rest(out.ctx);
    for (auto& [m, c] : out.exponent.terms()) {
      std::vector<std::pair<int, int>> invars;
      Monomial external;
      for (auto& [gen, e] : m.factors) {
        if (slot.count(gen)) invars.emplace_back(gen, e);
        else external.factors.emplace_back(gen, e);
      }
      int t = 0;
      for (auto& [gen, e] : invars) t += e;
      if (t == 0) {
        rest.add_term(m, c);
      } else if (t == 1) {
        // Even variable: extracting it from the front picks up no sign.
        J[slot[invars[0].first]].add_term(external, c);
      } else if (t == 2) {
        if (!external.empty())
          throw Error(ErrorCode::UnsupportedExponent, "non-constant Hessian entry in even sector");
        GaussianRational cc = c.coeff(0);
        if (!(Scalar(cc) == c) || !cc.is_rational())
          throw Error(ErrorCode::UnsupportedExponent, "Hessian entries must be hbar-free rationals");
        if (invars.size() == 1) {
          Q.at(slot[invars[0].first], slot[invars[0].first]) += 2 * cc.re;
        } else {
          Q.at(slot[invars[0].first], slot[invars[1].first]) += cc.re;
          Q.at(slot[invars[1].first], slot[invars[0].first]) += cc.re;
        }
      } else {
        throw Error(ErrorCode::UnsupportedExponent, "cubic term in integration variables");
      }
    }
    Rat det = Q.det();
    if (det == 0) throw Error(ErrorCode::DegenerateHessian, "even fiber Hessian is degenerate");
    Matrix Qinv = Q.inverse();
    // Critical point x* = -Q^{-1} J and critical value rest - (1/2) J^T Q^{-1} J.
    std::vector<Poly> xstar(n, Poly(out.ctx));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (Qinv.at(i, j) != 0) xstar[i] -= J[j] * Scalar(GaussianRational(Qinv.at(i, j)));
    Poly crit = rest;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (Qinv.at(i, j) != 0)
          crit -= J[i] * J[j] * Scalar(GaussianRational(Qinv.at(i, j) / 2));
    // Prefactor: (2 pi hbar)^{n/2} |det Q|^{-1/2} exp(i pi sgn(Q)/4).
    out.pref.two_pi_hbar_exp += Rat(n, 2);
    Rat absdet = det < 0 ? Rat(-det) : det;
    out.pref.mul_sqrt(Rat(1) / absdet);
    out.pref.mul_phase16(2 * Q.signature());

    // Multiplier: shift x -> x* + xi and take Wick moments with C = i hbar Q^{-1}.
    std::vector<std::vector<Scalar>> cov(n, std::vector<Scalar>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        cov[i][j] = Scalar::hbar(1, GaussianRational::i() * GaussianRational(Qinv.at(i, j)));
    Poly newmult(out.ctx);
    for (auto& [m, c] : out.multiplier.terms()) {
      std::vector<std::pair<std::size_t, int>> invars;  // (slot, exponent)
      Monomial external;
      for (auto& [gen, e] : m.factors) {
        if (slot.count(gen)) invars.emplace_back(slot[gen], e);
        else external.factors.emplace_back(gen, e);
      }
      Poly extpoly(out.ctx);
      extpoly.add_term(external, c);
      if (invars.empty()) {
        newmult += extpoly;
        continue;
      }
      // Sum over how many xi's each slot contributes.
      std::vector<int> choice(invars.size(), 0);
      for (;;) {
        Scalar binom(1);
        std::vector<int> xi_slots;
        Poly shift = Poly::constant(out.ctx, Scalar(1));
        for (std::size_t idx = 0; idx < invars.size(); ++idx) {
          auto [sl, e] = invars[idx];
          int j = choice[idx];
          long long b = 1;
          for (int t = 0; t < j; ++t) b = b * (e - t) / (t + 1);
          binom *= Scalar(GaussianRational(Rat(b)));
          for (int t = 0; t < j; ++t) xi_slots.push_back(static_cast<int>(sl));
          for (int t = 0; t < e - j; ++t) shift = shift * xstar[sl];
        }
        Scalar moment = wick_moment(xi_slots, cov);
        if (!moment.is_zero() && !binom.is_zero()) newmult += extpoly * shift * (binom * moment);
        // next choice
        std::size_t pos = 0;
        while (pos < invars.size()) {
          if (choice[pos] < invars[pos].second) { ++choice[pos]; break; }
          choice[pos] = 0;
          ++pos;
        }
        if (pos == invars.size()) break;
      }
    }
    out.multiplier = newmult;
    out.exponent = crit;
    for (int v : even_vars)
      if (out.multiplier.depends_on(v) || out.exponent.depends_on(v))
        throw Error(ErrorCode::Internal, "even integration variable survived");
  }
  return out;
}

State pair_states(const State& a, const State& b,
                  const std::vector<std::pair<std::string, std::string>>& pairs) {
  // Merged context: paired generators first, pairwise adjacent (B-side then A-side),
  // so the kernel monomials and the Berezin top word are already in normal order.
  std::vector<GenInfo> gens;
  std::set<std::string> taken;
  for (auto& [na, nb] : pairs) {
    const GenInfo& ga = a.ctx->info(a.ctx->index(na));
    const GenInfo& gb = b.ctx->info(b.ctx->index(nb));
    if ((ga.ghost + gb.ghost) != 0)
      throw Error(ErrorCode::InterfaceMismatch,
                  "paired generators " + na + ", " + nb + " have incompatible ghost numbers");
    gens.push_back(gb);  // B side first
    gens.push_back(ga);
    taken.insert(na);
    taken.insert(nb);
  }
  for (auto& g : a.ctx->all())
    if (!taken.count(g.name)) gens.push_back(g);
  for (auto& g : b.ctx->all())
    if (!taken.count(g.name)) gens.push_back(g);
  auto ctx = std::make_shared<GenContext>(std::move(gens));

  State z;
  z.ctx = ctx;
  z.pref = a.pref * b.pref;
  z.exponent = a.exponent.remap(ctx) + b.exponent.remap(ctx);
  z.multiplier = a.multiplier.remap(ctx) * b.multiplier.remap(ctx);

  std::vector<int> odd_vars, even_vars;
  std::size_t odd_pairs = 0, even_pairs = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    int gb = static_cast<int>(2 * i);      // B side
    int ga = static_cast<int>(2 * i + 1);  // A side
    if (ctx->is_odd(ga) != ctx->is_odd(gb))
      throw Error(ErrorCode::InterfaceMismatch, "paired generators differ in parity");
    // Pairing kernel exp(-(i/hbar) B A); the sign and measure below are the
    // unique choice making composition of cobordisms come out with no stray
    // factors (see docs/conventions.md).
    Monomial m;
    m.factors = {{gb, 1}, {ga, 1}};
    z.exponent.add_term(m, Scalar(-1));
    if (ctx->is_odd(ga)) {
      odd_vars.push_back(gb);
      odd_vars.push_back(ga);
      ++odd_pairs;
    } else {
      even_vars.push_back(gb);
      even_vars.push_back(ga);
      ++even_pairs;
    }
  }
  State out = integrate_generators(z, odd_vars, even_vars);
  // Measure normalization: unit result on a pure cross kernel.
  // Odd pair: raw Berezin of exp(-(i/hbar) B A) gives -(i/hbar); divide by it.
  for (std::size_t i = 0; i < odd_pairs; ++i)
    out.multiplier = out.multiplier * Scalar::hbar(1, GaussianRational(Rat(0), Rat(1)));
  // Even pair: raw Gaussian gives (2 pi hbar); divide by it.
  out.pref.two_pi_hbar_exp -= Rat(static_cast<long long>(even_pairs));
  out.canonicalize();
  return out;
}

State bv_pushforward(const State& z, const std::vector<int>& integrate,
                     const std::vector<int>& set_to_zero) {
  std::map<int, Poly> zero;
  for (int g : set_to_zero) zero[g] = Poly(z.ctx);
  State cut = z;
  cut.exponent = cut.exponent.substitute(zero);
  cut.multiplier = cut.multiplier.substitute(zero);
  std::vector<int> odd_vars, even_vars;
  for (int g : integrate) {
    if (z.ctx->is_odd(g)) odd_vars.push_back(g);
    else even_vars.push_back(g);
  }
  State out = integrate_generators(cut, odd_vars, even_vars);
  // Odd sector of a BV fiber comes in conjugate pairs; the raw Berezin of a
  // nondegenerate kernel carries the (i/hbar)^{p} factors already, nothing to add.
  out.canonicalize();
  return out;
}

State substitute_linear(const State& z, const std::map<int, Poly>& replacements, const Rat& jacobian_abs) {
  if (jacobian_abs <= 0) throw Error(ErrorCode::Invalid, "Jacobian must have positive magnitude");
  State out = z;
  out.exponent = out.exponent.substitute(replacements);
  out.multiplier = out.multiplier.substitute(replacements);
  out.pref.mul_sqrt(jacobian_abs);
  return out;
}

std::optional<Poly> solve_witness(const ContextPtr& ctx, const Derivation& omega_op,
                                  const OddSymplectic& omega, const Poly& rhs, long long max_degree) {
  if (rhs.is_zero()) return Poly(ctx);
  // hbar window of the right-hand side.
  long long hmin = 0, hmax = 0;
  bool first = true;
  for (auto& [m, c] : rhs.terms()) {
    (void)m;
    for (auto& [k, v] : c.terms()) {
      (void)v;
      if (first) { hmin = hmax = k; first = false; }
      hmin = std::min(hmin, k);
      hmax = std::max(hmax, k);
    }
  }
  int target_parity = rhs.parity();
  int y_parity = 1 - target_parity;  // the operator is odd

  // Ansatz basis: monomials of degree <= max_degree with parity y_parity,
  // hbar powers in [hmin - 2, hmax].
  std::vector<Monomial> monos;
  {
    std::vector<Monomial> frontier = {Monomial{}};
    std::set<std::vector<std::pair<int, int>>> seen;
    seen.insert({});
    for (long long d = 0; d < max_degree; ++d) {
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
          if (seen.insert(n.factors).second) next.push_back(n);
        }
      }
      frontier = next;
      for (auto& m : frontier) monos.push_back(m);
    }
    monos.push_back(Monomial{});
  }
  std::vector<Monomial> basis;
  for (auto& m : monos) {
    int p = 0;
    for (auto& [g, e] : m.factors) p += ctx->parity(g) * e;
    if (p % 2 == y_parity) basis.push_back(m);
  }
  std::vector<long long> hpowers;
  for (long long k = hmin - 2; k <= hmax; ++k) hpowers.push_back(k);

  // Column images under L = Omega + hbar^2 Delta.
  struct Key {
    Monomial m;
    long long h;
    bool operator<(const Key& o) const { return m < o.m ? true : (o.m < m ? false : h < o.h); }
  };
  std::map<Key, std::size_t> rowindex;
  auto rows_of = [&](const Poly& p, std::vector<std::tuple<std::size_t, GaussianRational>>& outrows,
                     bool grow) {
    for (auto& [m, c] : p.terms())
      for (auto& [k, v] : c.terms()) {
        Key key{m, k};
        auto it = rowindex.find(key);
        if (it == rowindex.end()) {
          if (!grow) throw Error(ErrorCode::Internal, "witness row overflow");
          it = rowindex.emplace(key, rowindex.size()).first;
        }
        outrows.emplace_back(it->second, v);
      }
  };

  std::vector<std::vector<std::tuple<std::size_t, GaussianRational>>> cols;
  std::vector<std::pair<std::size_t, std::size_t>> colinfo;  // (basis idx, hpower idx)
  for (std::size_t bi = 0; bi < basis.size(); ++bi) {
    Poly y(ctx);
    y.add_term(basis[bi], Scalar(1));
    Poly image = omega_op.apply(y) + bv_laplacian(y, omega) * Scalar::hbar(2);
    if (image.is_zero()) continue;
    for (std::size_t hi = 0; hi < hpowers.size(); ++hi) {
      Poly shifted = image * Scalar::hbar(hpowers[hi]);
      std::vector<std::tuple<std::size_t, GaussianRational>> rows;
      rows_of(shifted, rows, true);
      cols.push_back(std::move(rows));
      colinfo.emplace_back(bi, hi);
    }
  }
  std::vector<std::tuple<std::size_t, GaussianRational>> rhsrows;
  rows_of(rhs, rhsrows, true);

  std::size_t nrows = rowindex.size(), ncols = cols.size();
  // Realified system: unknown z = x + i y.
  Matrix A(2 * nrows, 2 * ncols);
  for (std::size_t c = 0; c < ncols; ++c)
    for (auto& [r, v] : cols[c]) {
      A.at(r, c) += v.re;
      A.at(r + nrows, c) += v.im;
      A.at(r, c + ncols) -= v.im;
      A.at(r + nrows, c + ncols) += v.re;
    }
  std::vector<Rat> b(2 * nrows, Rat(0));
  for (auto& [r, v] : rhsrows) {
    b[r] += v.re;
    b[r + nrows] += v.im;
  }
  auto sol = A.solve(b);
  if (!sol) return std::nullopt;
  Poly y(ctx);
  for (std::size_t c = 0; c < ncols; ++c) {
    GaussianRational coef((*sol)[c], (*sol)[c + ncols]);
    if (coef.is_zero()) continue;
    auto [bi, hi] = colinfo[c];
    Poly t(ctx);
    t.add_term(basis[bi], Scalar::hbar(hpowers[hi], coef));
    y += t;
  }
  return y;
}

}  // namespace bfq
