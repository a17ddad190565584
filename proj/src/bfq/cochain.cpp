#include "bfq/cochain.hpp"

#include <algorithm>

#include "bfq/errors.hpp"

namespace bfq {

CochainComplex::CochainComplex(int top, std::vector<std::vector<std::string>> basis, std::vector<Matrix> d)
    : top_(top), basis_(std::move(basis)), d_(std::move(d)) {
  if (basis_.size() != static_cast<std::size_t>(top_) + 1 || d_.size() != basis_.size())
    throw Error(ErrorCode::Internal, "cochain complex: inconsistent sizes");
  for (int k = 0; k <= top_; ++k) {
    std::size_t next = (k < top_) ? basis_[k + 1].size() : 0;
    if (d_[k].cols() != basis_[k].size() || d_[k].rows() != next)
      throw Error(ErrorCode::Internal, "cochain complex: d shape mismatch at degree " + std::to_string(k));
  }
}

std::size_t CochainComplex::dim(int k) const {
  if (k < 0 || k > top_) return 0;
  return basis_[k].size();
}

const std::vector<std::string>& CochainComplex::basis(int k) const {
  static const std::vector<std::string> empty;
  if (k < 0 || k > top_) return empty;
  return basis_[k];
}

const Matrix& CochainComplex::d(int k) const {
  static const Matrix empty;
  if (k < 0 || k > top_) return empty;
  return d_[k];
}

std::size_t CochainComplex::index_of(int k, const std::string& label) const {
  const auto& b = basis(k);
  auto it = std::find(b.begin(), b.end(), label);
  if (it == b.end()) throw Error(ErrorCode::Internal, "no basis label '" + label + "' in degree " + std::to_string(k));
  return static_cast<std::size_t>(it - b.begin());
}

bool CochainComplex::has_label(int k, const std::string& label) const {
  const auto& b = basis(k);
  return std::find(b.begin(), b.end(), label) != b.end();
}

long long CochainComplex::euler_characteristic() const {
  long long chi = 0;
  for (int k = 0; k <= top_; ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(dim(k));
  return chi;
}

void CochainComplex::check_complex() const {
  for (int k = 0; k + 1 <= top_; ++k) {
    if (dim(k) == 0 || dim(k + 2) == 0) continue;
    if (!(d(k + 1) * d(k)).is_zero())
      throw Error(ErrorCode::NonSquareZero, "d d != 0 between degrees " + std::to_string(k) + " and " +
                                                std::to_string(k + 2));
  }
}

CochainComplex relative_cochains(const CellComplex& X, RelMode mode) {
  auto deleted = [&](const std::string& id) {
    switch (mode) {
      case RelMode::Absolute: return false;
      case RelMode::RelOut: return X.is_out(id);
      case RelMode::RelIn: return X.is_in(id);
    }
    return false;
  };
  int n = X.dimension();
  std::vector<std::vector<std::string>> basis(n + 1);
  for (int k = 0; k <= n; ++k)
    for (auto& id : X.cells_of_dim(k))
      if (!deleted(id)) basis[k].push_back(id);
  std::vector<Matrix> d(n + 1);
  for (int k = 0; k <= n; ++k) {
    std::size_t rows = (k < n) ? basis[k + 1].size() : 0;
    Matrix m(rows, basis[k].size());
    if (k < n)
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < basis[k].size(); ++c) {
          long long v = X.incidence(basis[k + 1][r], basis[k][c]);
          if (v != 0) m.at(r, c) = v;
        }
    d[k] = std::move(m);
  }
  CochainComplex result(n, std::move(basis), std::move(d));
  result.check_complex();
  return result;
}

void Contraction::verify() const {
  int n = ambient.top_degree();
  for (int k = 0; k <= n; ++k) {
    Matrix pi = proj[k] * incl[k];
    if (!(pi == Matrix::identity(reduced.dim(k))))
      throw Error(ErrorCode::Internal, "contraction: proj incl != id in degree " + std::to_string(k));
    // dK + Kd = id - incl proj
    Matrix lhs(ambient.dim(k), ambient.dim(k));
    if (k > 0 && ambient.dim(k - 1) > 0) lhs = lhs + ambient.d(k - 1) * hom[k];
    if (k < n && ambient.dim(k + 1) > 0) lhs = lhs + hom[k + 1] * ambient.d(k);
    Matrix rhs = Matrix::identity(ambient.dim(k)) - incl[k] * proj[k];
    if (!(lhs == rhs))
      throw Error(ErrorCode::Internal, "contraction: dK + Kd != id - incl proj in degree " + std::to_string(k));
    // side conditions
    if (k >= 2 && !(hom[k - 1] * hom[k]).is_zero())
      throw Error(ErrorCode::Internal, "contraction: K K != 0 at degree " + std::to_string(k));
    if (k > 0 && !(proj[k - 1] * hom[k]).is_zero())
      throw Error(ErrorCode::Internal, "contraction: proj K != 0 at degree " + std::to_string(k));
    if (k > 0 && !(hom[k] * incl[k]).is_zero())
      throw Error(ErrorCode::Internal, "contraction: K incl != 0 at degree " + std::to_string(k));
    // incl and proj are chain maps w.r.t. the reduced differential
    if (k < n) {
      if (!(ambient.d(k) * incl[k] == incl[k + 1] * reduced.d(k)))
        throw Error(ErrorCode::Internal, "contraction: incl not a chain map at degree " + std::to_string(k));
      if (!(proj[k + 1] * ambient.d(k) == reduced.d(k) * proj[k]))
        throw Error(ErrorCode::Internal, "contraction: proj not a chain map at degree " + std::to_string(k));
    }
  }
}

std::vector<std::size_t> Contraction::betti() const {
  std::vector<std::size_t> b;
  for (int k = 0; k <= reduced.top_degree(); ++k) b.push_back(reduced.dim(k));
  return b;
}

namespace {

struct ElimState {
  int n;
  std::vector<std::vector<std::string>> labels;  // current alive labels per degree
  std::vector<Matrix> D;                         // current differential
  std::vector<Matrix> I;                         // ambient^k x alive^k
  std::vector<Matrix> P;                         // alive^k x ambient^k
  std::vector<Matrix> K;                         // ambient^{k-1} x ambient^k (accumulated)
};

ElimState init_state(const CochainComplex& C) {
  ElimState s;
  s.n = C.top_degree();
  s.labels.resize(s.n + 1);
  s.D.resize(s.n + 1);
  s.I.resize(s.n + 1);
  s.P.resize(s.n + 1);
  s.K.resize(s.n + 1);
  for (int k = 0; k <= s.n; ++k) {
    s.labels[k] = C.basis(k);
    s.D[k] = C.d(k);
    s.I[k] = Matrix::identity(C.dim(k));
    s.P[k] = Matrix::identity(C.dim(k));
    s.K[k] = Matrix(k > 0 ? C.dim(k - 1) : 0, C.dim(k));
  }
  return s;
}

// Eliminate the pair (column e in degree k, row f in degree k+1); D[k](f,e) = c != 0.
void eliminate(ElimState& s, int k, std::size_t f, std::size_t e) {
  Rat c = s.D[k].at(f, e);
  std::size_t nk = s.labels[k].size(), nk1 = s.labels[k + 1].size();
  // Step maps between current space and the shrunken space, in current coordinates.
  // iota: new -> cur (degree k: y -> y - (D(f,y)/c) e), pi: cur -> new
  // (e -> 0, f -> -(1/c) sum_{g != f} D(g,e) g), K_step: f -> e/c.
  std::vector<std::size_t> keep_k, keep_k1;
  for (std::size_t i = 0; i < nk; ++i)
    if (i != e) keep_k.push_back(i);
  for (std::size_t i = 0; i < nk1; ++i)
    if (i != f) keep_k1.push_back(i);

  Matrix iota_k(nk, keep_k.size());
  for (std::size_t j = 0; j < keep_k.size(); ++j) {
    iota_k.at(keep_k[j], j) = 1;
    iota_k.at(e, j) = -s.D[k].at(f, keep_k[j]) / c;
  }
  Matrix iota_k1(nk1, keep_k1.size());
  for (std::size_t j = 0; j < keep_k1.size(); ++j) iota_k1.at(keep_k1[j], j) = 1;

  Matrix pi_k(keep_k.size(), nk);
  for (std::size_t j = 0; j < keep_k.size(); ++j) pi_k.at(j, keep_k[j]) = 1;  // e-column stays 0
  Matrix pi_k1(keep_k1.size(), nk1);
  for (std::size_t j = 0; j < keep_k1.size(); ++j) {
    pi_k1.at(j, keep_k1[j]) = 1;
    pi_k1.at(j, f) = -s.D[k].at(keep_k1[j], e) / c;
  }

  // Accumulated homotopy gains I_cur * K_step * P_cur in ambient coordinates.
  Matrix kstep(nk, nk1);
  kstep.at(e, f) = Rat(1) / c;
  s.K[k + 1] = s.K[k + 1] + s.I[k] * kstep * s.P[k + 1];

  // New differential blocks.
  Matrix Dk_new(keep_k1.size(), keep_k.size());
  for (std::size_t r = 0; r < keep_k1.size(); ++r)
    for (std::size_t q = 0; q < keep_k.size(); ++q)
      Dk_new.at(r, q) = s.D[k].at(keep_k1[r], keep_k[q]) -
                        s.D[k].at(keep_k1[r], e) * s.D[k].at(f, keep_k[q]) / c;
  Matrix Dkm1_new, Dkp1_new;
  if (k > 0) Dkm1_new = pi_k * s.D[k - 1];  // drop row e (pi_k kills e)
  if (k + 1 <= s.n - 1) Dkp1_new = s.D[k + 1] * iota_k1;  // drop column f
  else if (k + 1 == s.n) Dkp1_new = Matrix(0, keep_k1.size());

  // Update totals.
  s.I[k] = s.I[k] * iota_k;
  s.I[k + 1] = s.I[k + 1] * iota_k1;
  s.P[k] = pi_k * s.P[k];
  s.P[k + 1] = pi_k1 * s.P[k + 1];
  s.D[k] = Dk_new;
  if (k > 0) s.D[k - 1] = Dkm1_new;
  if (k + 1 <= s.n) s.D[k + 1] = Dkp1_new;

  auto drop = [](std::vector<std::string>& v, std::size_t idx) { v.erase(v.begin() + idx); };
  drop(s.labels[k], e);
  drop(s.labels[k + 1], f);
}

Contraction finish(const CochainComplex& C, ElimState& s,
                   std::vector<std::pair<std::string, std::string>> pivots) {
  std::vector<Matrix> D = s.D;
  CochainComplex reduced(s.n, s.labels, std::move(D));
  Contraction r{C, std::move(reduced), std::move(s.I), std::move(s.P), std::move(s.K), std::move(pivots)};
  r.verify();
  return r;
}

}  // namespace

Contraction contract(const CochainComplex& C, PivotStrategy strategy,
                     const std::function<bool(const std::string&)>& eliminable) {
  ElimState s = init_state(C);
  std::vector<std::pair<std::string, std::string>> pivots;
  bool reverse = (strategy == PivotStrategy::HighestIdFirst);
  for (;;) {
    // Pick the next pivot: degrees ascending, then column label, then row label.
    int bk = -1;
    std::size_t be = 0, bf = 0;
    for (int k = 0; k < s.n && bk < 0; ++k) {
      const auto& cols = s.labels[k];
      const auto& rows = s.labels[k + 1];
      std::vector<std::size_t> corder(cols.size()), rorder(rows.size());
      for (std::size_t i = 0; i < corder.size(); ++i) corder[i] = i;
      for (std::size_t i = 0; i < rorder.size(); ++i) rorder[i] = i;
      auto cmp = [&](const std::vector<std::string>& lab) {
        return [&lab, reverse](std::size_t a, std::size_t b) {
          return reverse ? lab[a] > lab[b] : lab[a] < lab[b];
        };
      };
      std::sort(corder.begin(), corder.end(), cmp(cols));
      std::sort(rorder.begin(), rorder.end(), cmp(rows));
      for (auto e : corder) {
        if (eliminable && !eliminable(cols[e])) continue;
        for (auto f : rorder) {
          if (eliminable && !eliminable(rows[f])) continue;
          if (s.D[k].at(f, e) != 0) {
            bk = k;
            be = e;
            bf = f;
            break;
          }
        }
        if (bk >= 0) break;
      }
    }
    if (bk < 0) break;
    pivots.emplace_back(s.labels[bk][be], s.labels[bk + 1][bf]);
    eliminate(s, bk, bf, be);
  }
  return finish(C, s, std::move(pivots));
}

Contraction contract_with_pivots(const CochainComplex& C,
                                 const std::vector<std::pair<std::string, std::string>>& pivot_list,
                                 bool finish_rest, PivotStrategy strategy) {
  ElimState s = init_state(C);
  std::vector<std::pair<std::string, std::string>> pivots;
  for (auto& [colLabel, rowLabel] : pivot_list) {
    int k = -1;
    std::size_t e = 0, f = 0;
    for (int kk = 0; kk < s.n && k < 0; ++kk) {
      auto& cols = s.labels[kk];
      auto& rows = s.labels[kk + 1];
      auto ci = std::find(cols.begin(), cols.end(), colLabel);
      auto ri = std::find(rows.begin(), rows.end(), rowLabel);
      if (ci != cols.end() && ri != rows.end()) {
        k = kk;
        e = static_cast<std::size_t>(ci - cols.begin());
        f = static_cast<std::size_t>(ri - rows.begin());
      }
    }
    if (k < 0) throw Error(ErrorCode::Internal, "pivot pair (" + colLabel + "," + rowLabel + ") not available");
    if (s.D[k].at(f, e) == 0)
      throw Error(ErrorCode::Internal, "pivot entry (" + colLabel + "," + rowLabel + ") is zero");
    pivots.emplace_back(colLabel, rowLabel);
    eliminate(s, k, f, e);
  }
  if (!finish_rest) return finish(C, s, std::move(pivots));
  // Finish with the strategy on whatever remains.
  bool reverse = (strategy == PivotStrategy::HighestIdFirst);
  for (;;) {
    int bk = -1;
    std::size_t be = 0, bf = 0;
    for (int k = 0; k < s.n && bk < 0; ++k) {
      const auto& cols = s.labels[k];
      const auto& rows = s.labels[k + 1];
      std::vector<std::size_t> corder(cols.size()), rorder(rows.size());
      for (std::size_t i = 0; i < corder.size(); ++i) corder[i] = i;
      for (std::size_t i = 0; i < rorder.size(); ++i) rorder[i] = i;
      auto cmp = [&](const std::vector<std::string>& lab) {
        return [&lab, reverse](std::size_t a, std::size_t b) {
          return reverse ? lab[a] > lab[b] : lab[a] < lab[b];
        };
      };
      std::sort(corder.begin(), corder.end(), cmp(cols));
      std::sort(rorder.begin(), rorder.end(), cmp(rows));
      for (auto e : corder) {
        for (auto f : rorder)
          if (s.D[k].at(f, e) != 0) { bk = k; be = e; bf = f; break; }
        if (bk >= 0) break;
      }
    }
    if (bk < 0) break;
    pivots.emplace_back(s.labels[bk][be], s.labels[bk + 1][bf]);
    eliminate(s, bk, bf, be);
  }
  return finish(C, s, std::move(pivots));
}

Contraction compose(const Contraction& outer, const Contraction& inner) {
  // outer: C -> R1, inner: R1 -> R2.
  int n = outer.ambient.top_degree();
  Contraction r;
  r.ambient = outer.ambient;
  r.reduced = inner.reduced;
  r.incl.resize(n + 1);
  r.proj.resize(n + 1);
  r.hom.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    r.incl[k] = outer.incl[k] * inner.incl[k];
    r.proj[k] = inner.proj[k] * outer.proj[k];
    r.hom[k] = outer.hom[k];
    if (k > 0) r.hom[k] = r.hom[k] + outer.incl[k - 1] * inner.hom[k] * outer.proj[k];
  }
  r.pivot_sequence = outer.pivot_sequence;
  for (auto& p : inner.pivot_sequence) r.pivot_sequence.push_back(p);
  r.verify();
  return r;
}

CohomologyResult cohomology(const CochainComplex& C, PivotStrategy strategy) {
  Contraction c = contract(C, strategy);
  CohomologyResult r{c.betti(), std::move(c)};
  return r;
}

}  // namespace bfq
