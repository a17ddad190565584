#include "bfq/poly.hpp"

#include <algorithm>

namespace bfq {

GenContext::GenContext(std::vector<GenInfo> gens) : gens_(std::move(gens)) {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (!by_name_.emplace(gens_[i].name, static_cast<int>(i)).second)
      throw Error(ErrorCode::Invalid, "duplicate generator name '" + gens_[i].name + "'");
  }
}

int GenContext::index(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw Error(ErrorCode::Invalid, "unknown generator '" + name + "'");
  return it->second;
}

int Monomial::exponent_of(int g) const {
  for (auto& [gen, e] : factors)
    if (gen == g) return e;
  return 0;
}

long long Monomial::total_degree() const {
  long long d = 0;
  for (auto& [g, e] : factors) d += e;
  return d;
}

std::string Monomial::str(const GenContext& ctx) const {
  if (factors.empty()) return "1";
  std::string s;
  for (auto& [g, e] : factors) {
    if (!s.empty()) s += "*";
    s += ctx.info(g).name;
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

Poly Poly::constant(ContextPtr ctx, const Scalar& c) {
  Poly p(std::move(ctx));
  if (!c.is_zero()) p.terms_[Monomial{}] = c;
  return p;
}

Poly Poly::generator(ContextPtr ctx, int g) {
  Poly p(ctx);
  if (g < 0 || static_cast<std::size_t>(g) >= ctx->size())
    throw Error(ErrorCode::Invalid, "generator index out of range");
  p.terms_[Monomial{{{g, 1}}}] = Scalar(1);
  return p;
}

Scalar Poly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Scalar() : it->second;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  // Enforce normal form on input.
  for (std::size_t i = 0; i + 1 < m.factors.size(); ++i)
    if (m.factors[i].first >= m.factors[i + 1].first)
      throw Error(ErrorCode::Internal, "monomial not in normal form");
  for (auto& [g, e] : m.factors)
    if (ctx_->is_odd(g) && e > 1) return;  // odd square is zero
  auto& slot = terms_[m];
  slot += c;
  if (slot.is_zero()) terms_.erase(m);
}

Poly Poly::operator-() const {
  Poly r(ctx_);
  for (auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  if (!r.ctx_) r.ctx_ = o.ctx_;
  for (auto& [m, c] : o.terms_) {
    auto& slot = r.terms_[m];
    slot += c;
    if (slot.is_zero()) r.terms_.erase(m);
  }
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

int koszul_merge_sign(const GenContext& ctx, const Monomial& a, const Monomial& b) {
  // Sign from sorting the concatenation a.b into normal order: for each odd
  // generator g in b, count odd occurrences in a with index strictly greater.
  int sign = 0;
  for (auto& [gb, eb] : b.factors) {
    if (!ctx.is_odd(gb) || eb == 0) continue;
    for (auto& [ga, ea] : a.factors) {
      if (ga > gb && ctx.is_odd(ga)) sign += ea * eb;
    }
  }
  return (sign % 2 == 0) ? 1 : -1;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r(ctx_ ? ctx_ : o.ctx_);
  for (auto& [ma, ca] : terms_) {
    for (auto& [mb, cb] : o.terms_) {
      // Odd generator collision kills the product.
      bool dead = false;
      for (auto& [gb, eb] : mb.factors) {
        (void)eb;
        if (ctx_->is_odd(gb) && ma.exponent_of(gb) > 0) { dead = true; break; }
      }
      if (dead) continue;
      int sign = koszul_merge_sign(*ctx_, ma, mb);
      Monomial m;
      std::size_t i = 0, j = 0;
      while (i < ma.factors.size() || j < mb.factors.size()) {
        if (j >= mb.factors.size() || (i < ma.factors.size() && ma.factors[i].first < mb.factors[j].first)) {
          m.factors.push_back(ma.factors[i++]);
        } else if (i >= ma.factors.size() || mb.factors[j].first < ma.factors[i].first) {
          m.factors.push_back(mb.factors[j++]);
        } else {
          m.factors.emplace_back(ma.factors[i].first, ma.factors[i].second + mb.factors[j].second);
          ++i;
          ++j;
        }
      }
      Scalar c = ca * cb;
      if (sign < 0) c = -c;
      auto& slot = r.terms_[m];
      slot += c;
      if (slot.is_zero()) r.terms_.erase(m);
    }
  }
  return r;
}

Poly Poly::operator*(const Scalar& s) const {
  Poly r(ctx_);
  if (s.is_zero()) return r;
  for (auto& [m, c] : terms_) r.terms_[m] = c * s;
  return r;
}

int Poly::parity() const {
  int p = -1;
  for (auto& [m, c] : terms_) {
    (void)c;
    int mp = 0;
    for (auto& [g, e] : m.factors) mp += ctx_->parity(g) * e;
    mp %= 2;
    if (p < 0) p = mp;
    else if (p != mp) throw Error(ErrorCode::Invalid, "polynomial has mixed parity");
  }
  return p < 0 ? 0 : p;
}

bool Poly::is_homogeneous_parity() const {
  try {
    parity();
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::pair<Poly, Poly> Poly::parity_split() const {
  Poly even(ctx_), odd(ctx_);
  for (auto& [m, c] : terms_) {
    int mp = 0;
    for (auto& [g, e] : m.factors) mp += ctx_->parity(g) * e;
    if (mp % 2 == 0) even.terms_[m] = c;
    else odd.terms_[m] = c;
  }
  return {even, odd};
}

long long Poly::max_degree() const {
  long long d = 0;
  for (auto& [m, c] : terms_) {
    (void)c;
    d = std::max(d, m.total_degree());
  }
  return d;
}

Poly Poly::truncate_degree(long long d) const {
  Poly r(ctx_);
  for (auto& [m, c] : terms_)
    if (m.total_degree() <= d) r.terms_[m] = c;
  return r;
}

bool Poly::depends_on(int g) const {
  for (auto& [m, c] : terms_) {
    (void)c;
    if (m.exponent_of(g) > 0) return true;
  }
  return false;
}

Poly Poly::left_derivative(int g) const {
  Poly r(ctx_);
  bool g_odd = ctx_->is_odd(g);
  for (auto& [m, c] : terms_) {
    int e = m.exponent_of(g);
    if (e == 0) continue;
    // Sign: move d_L/dg past the factors before g (only odd ones matter, and
    // only when g itself is odd).
    int sign = 1;
    if (g_odd) {
      int cnt = 0;
      for (auto& [h, eh] : m.factors) {
        if (h >= g) break;
        if (ctx_->is_odd(h)) cnt += eh;
      }
      if (cnt % 2) sign = -1;
    }
    Monomial reduced;
    for (auto& [h, eh] : m.factors) {
      if (h == g) {
        if (eh > 1) reduced.factors.emplace_back(h, eh - 1);
      } else {
        reduced.factors.emplace_back(h, eh);
      }
    }
    Scalar add = c * Scalar(GaussianRational(Rat(e)));
    if (sign < 0) add = -add;
    auto& slot = r.terms_[reduced];
    slot += add;
    if (slot.is_zero()) r.terms_.erase(reduced);
  }
  return r;
}

Poly Poly::substitute(const std::map<int, Poly>& replacements) const {
  for (auto& [g, p] : replacements) {
    if (!p.is_zero() && p.is_homogeneous_parity() && p.parity() != ctx_->parity(g))
      throw Error(ErrorCode::Invalid,
                  "substitution changes parity of generator '" + ctx_->info(g).name + "'");
  }
  Poly r(ctx_);
  for (auto& [m, c] : terms_) {
    Poly prod = Poly::constant(ctx_, c);
    for (auto& [g, e] : m.factors) {
      auto it = replacements.find(g);
      Poly factor = (it != replacements.end()) ? it->second : Poly::generator(ctx_, g);
      for (int k = 0; k < e; ++k) prod = prod * factor;
      if (prod.is_zero()) break;
    }
    r += prod;
  }
  return r;
}

Poly Poly::remap(const ContextPtr& target) const {
  Poly r(target);
  for (auto& [m, c] : terms_) {
    // Build the word in target indices, then sort with Koszul bookkeeping.
    std::vector<std::pair<int, int>> word;
    for (auto& [g, e] : m.factors) word.emplace_back(target->index(ctx_->info(g).name), e);
    int sign = 0;
    for (std::size_t i = 0; i < word.size(); ++i)
      for (std::size_t j = i + 1; j < word.size(); ++j)
        if (word[i].first > word[j].first && target->is_odd(word[i].first) && target->is_odd(word[j].first))
          sign += word[i].second * word[j].second;
    std::sort(word.begin(), word.end());
    Monomial nm;
    for (auto& [g, e] : word) {
      if (!nm.factors.empty() && nm.factors.back().first == g) nm.factors.back().second += e;
      else nm.factors.emplace_back(g, e);
    }
    bool dead = false;
    for (auto& [g, e] : nm.factors)
      if (target->is_odd(g) && e > 1) { dead = true; break; }
    if (dead) continue;
    Scalar cc = (sign % 2) ? -c : c;
    auto& slot = r.terms_[nm];
    slot += cc;
    if (slot.is_zero()) r.terms_.erase(nm);
  }
  return r;
}

long long Poly::ghost_of(const Monomial& m) const {
  long long g = 0;
  for (auto& [gen, e] : m.factors) g += static_cast<long long>(ctx_->info(gen).ghost) * e;
  return g;
}

long long Poly::ghost() const {
  bool seen = false;
  long long g = 0;
  for (auto& [m, c] : terms_) {
    (void)c;
    long long mg = ghost_of(m);
    if (!seen) { g = mg; seen = true; }
    else if (g != mg) throw Error(ErrorCode::Invalid, "polynomial has mixed ghost number");
  }
  return g;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto& [m, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")";
    if (!m.empty()) s += "*" + m.str(*ctx_);
  }
  return s;
}

Poly Derivation::apply(const Poly& p) const {
  Poly r(ctx);
  for (auto& [g, cg] : coeff) {
    if (cg.is_zero()) continue;
    r += cg * p.left_derivative(g);
  }
  return r;
}

Poly Derivation::square_on_generator(int g) const {
  Poly once = apply(Poly::generator(ctx, g));
  return apply(once);
}

}  // namespace bfq
