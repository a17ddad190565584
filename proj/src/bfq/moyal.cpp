#include "bfq/moyal.hpp"

#include <nlohmann/json.hpp>

namespace bfq {

using nlohmann::json;

PolyU PolyU::constant(int dim, const Scalar& c) {
  PolyU p(dim);
  p.add_term(std::vector<int>(dim, 0), c);
  return p;
}

PolyU PolyU::coordinate(int dim, int alpha) {
  if (alpha < 0 || alpha >= dim) throw Error(ErrorCode::IndexMismatch, "coordinate index out of range");
  PolyU p(dim);
  std::vector<int> e(dim, 0);
  e[alpha] = 1;
  p.add_term(e, Scalar(1));
  return p;
}

void PolyU::add_term(const std::vector<int>& expo, const Scalar& c) {
  if (static_cast<int>(expo.size()) != dim_)
    throw Error(ErrorCode::IndexMismatch, "exponent vector has wrong length");
  if (c.is_zero()) return;
  auto& slot = terms_[expo];
  slot += c;
  if (slot.is_zero()) terms_.erase(expo);
}

PolyU PolyU::operator+(const PolyU& o) const {
  PolyU r = *this;
  for (auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

PolyU PolyU::operator-(const PolyU& o) const {
  PolyU r = *this;
  for (auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

PolyU PolyU::operator*(const PolyU& o) const {
  PolyU r(dim_);
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) {
      std::vector<int> e = e1;
      for (int i = 0; i < dim_; ++i) e[i] += e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

PolyU PolyU::operator*(const Scalar& s) const {
  PolyU r(dim_);
  for (auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

PolyU PolyU::derivative(int alpha) const {
  PolyU r(dim_);
  for (auto& [e, c] : terms_) {
    if (e[alpha] == 0) continue;
    std::vector<int> d = e;
    d[alpha] -= 1;
    r.add_term(d, c * Scalar(GaussianRational(Rat(e[alpha]))));
  }
  return r;
}

PolyU PolyU::truncate_hbar(long long order) const {
  PolyU r(dim_);
  for (auto& [e, c] : terms_) {
    Scalar t;
    for (auto& [k, v] : c.terms())
      if (k <= order) t += Scalar::hbar(k, v);
    r.add_term(e, t);
  }
  return r;
}

long long PolyU::total_degree() const {
  long long d = 0;
  for (auto& [e, c] : terms_) {
    (void)c;
    long long s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

std::string PolyU::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto& [e, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")";
    for (int i = 0; i < dim_; ++i)
      if (e[i] > 0) {
        s += "*u" + std::to_string(i + 1);
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
      }
  }
  return s;
}

PolyU PoissonStructure::component(int a, int b) const {
  if (a < 0 || b < 0 || a >= dim || b >= dim)
    throw Error(ErrorCode::IndexMismatch, "bivector index out of range");
  if (a == b) return PolyU(dim);
  auto it = entries.find({std::min(a, b), std::max(a, b)});
  if (it == entries.end()) return PolyU(dim);
  return (a < b) ? it->second : PolyU(dim) - it->second;
}

bool PoissonStructure::is_constant() const {
  for (auto& [k, p] : entries) {
    (void)k;
    if (p.total_degree() > 0) return false;
  }
  return true;
}

bool PoissonStructure::is_linear() const {
  for (auto& [k, p] : entries) {
    (void)k;
    if (p.total_degree() > 1) return false;
  }
  return true;
}

bool PoissonStructure::is_unimodular() const {
  for (int b = 0; b < dim; ++b) {
    PolyU div(dim);
    for (int a = 0; a < dim; ++a) div = div + component(a, b).derivative(a);
    if (!div.is_zero()) return false;
  }
  return true;
}

Scalar PoissonStructure::derivative_at_zero(int a, int b, const std::vector<int>& derivs) const {
  PolyU p = component(a, b);
  for (int g : derivs) p = p.derivative(g);
  auto it = p.terms().find(std::vector<int>(dim, 0));
  return it == p.terms().end() ? Scalar() : it->second;
}

bool PoissonStructure::jacobi_holds() const {
  // sum_d pi^{da} d_d pi^{bc} + cyclic in (a,b,c) = 0.
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b)
      for (int c = b + 1; c < dim; ++c) {
        PolyU total(dim);
        int idx[3] = {a, b, c};
        for (int t = 0; t < 3; ++t) {
          int aa = idx[t], bb = idx[(t + 1) % 3], cc = idx[(t + 2) % 3];
          for (int d = 0; d < dim; ++d)
            total = total + component(d, aa) * component(bb, cc).derivative(d);
        }
        if (!total.is_zero()) return false;
      }
  return true;
}

PoissonStructure PoissonStructure::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad JSON: ") + e.what());
  }
  try {
    PoissonStructure pi;
    pi.dim = j.at("dim").get<int>();
    for (auto& jt : j.at("terms")) {
      int a = jt.at("alpha").get<int>();
      int b = jt.at("beta").get<int>();
      if (a == b || a < 0 || b < 0 || a >= pi.dim || b >= pi.dim)
        throw Error(ErrorCode::IndexMismatch, "bad bivector indices");
      std::vector<int> expo(pi.dim, 0);
      if (jt.contains("monomial")) {
        auto mono = jt.at("monomial").get<std::vector<int>>();
        if (static_cast<int>(mono.size()) != pi.dim)
          throw Error(ErrorCode::IndexMismatch, "monomial length != dim");
        expo = mono;
      }
      Rat coeff = rat_from_string(jt.at("coeff").get<std::string>());
      int sign = (a < b) ? 1 : -1;
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = pi.entries.find(key);
      if (it == pi.entries.end()) it = pi.entries.emplace(key, PolyU(pi.dim)).first;
      it->second.add_term(expo, Scalar(GaussianRational(coeff * sign)));
    }
    return pi;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad Poisson JSON: ") + e.what());
  }
}

std::string PoissonStructure::to_json() const {
  json j;
  j["dim"] = dim;
  j["terms"] = json::array();
  for (auto& [key, p] : entries)
    for (auto& [e, c] : p.terms()) {
      json jt;
      jt["alpha"] = key.first;
      jt["beta"] = key.second;
      jt["monomial"] = e;
      GaussianRational c0 = c.coeff(0);
      jt["coeff"] = c0.re.str();
      j["terms"].push_back(jt);
    }
  return j.dump(2);
}

PolyU moyal_star(const PolyU& f, const PolyU& g, const PoissonStructure& pi, long long order) {
  if (!pi.is_constant())
    throw Error(ErrorCode::OrderUnavailable, "the Moyal product needs a constant bivector");
  if (f.dim() != pi.dim || g.dim() != pi.dim)
    throw Error(ErrorCode::IndexMismatch, "polynomial dimension != bivector dimension");
  int m = pi.dim;
  PolyU result = f * g;
  // Cache constant entries.
  std::vector<std::vector<Scalar>> c(m, std::vector<Scalar>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) c[a][b] = pi.derivative_at_zero(a, b, {});
  Scalar half_i_hbar = Scalar::hbar(1, GaussianRational(Rat(0), Rat(1, 2)));  // i hbar / 2
  long long maxr = std::min<long long>(order, f.total_degree() + g.total_degree());
  for (long long r = 1; r <= maxr; ++r) {
    // sum over (a_1 b_1 ... a_r b_r)
    std::vector<int> seq(2 * r, 0);
    PolyU term(m);
    for (;;) {
      Scalar coeff(1);
      bool dead = false;
      for (long long t = 0; t < r && !dead; ++t) {
        const Scalar& v = c[seq[2 * t]][seq[2 * t + 1]];
        if (v.is_zero()) dead = true;
        else coeff *= v;
      }
      if (!dead) {
        PolyU dfp = f, dgp = g;
        for (long long t = 0; t < r; ++t) dfp = dfp.derivative(seq[2 * t]);
        for (long long t = 0; t < r; ++t) dgp = dgp.derivative(seq[2 * t + 1]);
        if (!dfp.is_zero() && !dgp.is_zero()) term = term + (dfp * dgp) * coeff;
      }
      std::size_t pos = 0;
      while (pos < seq.size()) {
        if (seq[pos] < m - 1) { ++seq[pos]; break; }
        seq[pos] = 0;
        ++pos;
      }
      if (pos == seq.size()) break;
    }
    Scalar factor(1);
    for (long long t = 1; t <= r; ++t)
      factor = factor * half_i_hbar * Scalar(GaussianRational(Rat(1, t)));
    result = result + term * factor;
  }
  return result.truncate_hbar(order);
}

PolyU star_commutator_bivector(const PoissonStructure& pi, int a, int b, long long order) {
  if (pi.is_constant()) {
    PolyU ua = PolyU::coordinate(pi.dim, a), ub = PolyU::coordinate(pi.dim, b);
    PolyU comm = moyal_star(ua, ub, pi, order + 1) - moyal_star(ub, ua, pi, order + 1);
    // divide by i hbar
    PolyU r(pi.dim);
    for (auto& [e, c] : comm.terms())
      r.add_term(e, c / Scalar::hbar(1, GaussianRational::i()));
    return r.truncate_hbar(order);
  }
  if (order > 0)
    throw Error(ErrorCode::OrderUnavailable,
                "star-product bivector beyond order 0 needs a constant structure");
  return pi.component(a, b);
}

}  // namespace bfq
