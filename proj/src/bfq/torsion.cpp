#include "bfq/torsion.hpp"

#include <algorithm>
#include <cmath>

#include "bfq/errors.hpp"

namespace bfq {

namespace {

Rat abs_rat(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Basis of the column space of m: the pivot columns, as column vectors.
std::vector<std::vector<Rat>> column_space_basis(const Matrix& m) {
  std::vector<std::vector<Rat>> out;
  for (auto c : m.pivot_columns()) {
    std::vector<Rat> col(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) col[r] = m.at(r, c);
    out.push_back(std::move(col));
  }
  return out;
}

}  // namespace

TorsionValue reidemeister_torsion_with_basis(const Contraction& con, const std::vector<Matrix>& hbasis) {
  const CochainComplex& C = con.ambient;
  int n = C.top_degree();
  for (int k = 0; k <= n; ++k) {
    if (k < static_cast<int>(hbasis.size())) {
      const Matrix& h = hbasis[k];
      if (h.rows() != con.reduced.dim(k) || h.cols() != con.reduced.dim(k))
        throw Error(ErrorCode::BasisMismatch, "H-basis block in degree " + std::to_string(k) +
                                                  " does not match Betti number " +
                                                  std::to_string(con.reduced.dim(k)));
      if (h.det() == 0)
        throw Error(ErrorCode::BasisMismatch, "H-basis block in degree " + std::to_string(k) + " is singular");
    }
  }
  // Coexact part per degree: column space of K d.
  std::vector<std::vector<std::vector<Rat>>> coexact(n + 1);
  for (int k = 0; k <= n; ++k) {
    if (C.dim(k) == 0) continue;
    if (k == n || C.dim(k + 1) == 0) continue;
    Matrix kd = con.hom[k + 1] * C.d(k);
    coexact[k] = column_space_basis(kd);
  }
  Rat tau(1);
  for (int k = 0; k <= n; ++k) {
    std::size_t dk = C.dim(k);
    if (dk == 0) continue;
    Matrix T(dk, dk);
    std::size_t col = 0;
    // d-images of the coexact part one degree down.
    if (k > 0)
      for (auto& v : coexact[k - 1]) {
        for (std::size_t r = 0; r < dk; ++r) {
          Rat s(0);
          for (std::size_t c = 0; c < C.dim(k - 1); ++c)
            if (v[c] != 0 && C.d(k - 1).at(r, c) != 0) s += C.d(k - 1).at(r, c) * v[c];
          T.at(r, col) = s;
        }
        ++col;
      }
    // Cohomology representatives.
    Matrix reps = con.incl[k];
    if (k < static_cast<int>(hbasis.size()) && con.reduced.dim(k) > 0) reps = reps * hbasis[k];
    for (std::size_t j = 0; j < con.reduced.dim(k); ++j) {
      for (std::size_t r = 0; r < dk; ++r) T.at(r, col) = reps.at(r, j);
      ++col;
    }
    // Coexact part of this degree.
    for (auto& v : coexact[k]) {
      for (std::size_t r = 0; r < dk; ++r) T.at(r, col) = v[r];
      ++col;
    }
    if (col != dk)
      throw Error(ErrorCode::BasisMismatch,
                  "splitting of degree " + std::to_string(k) + " has wrong dimension count");
    Rat det = T.det();
    if (det == 0) throw Error(ErrorCode::Internal, "singular transition matrix in torsion");
    if (k % 2 == 0) tau *= abs_rat(det);
    else tau /= abs_rat(det);
  }
  return {tau};
}

TorsionValue reidemeister_torsion(const Contraction& con) {
  std::vector<Matrix> id_basis;
  for (int k = 0; k <= con.reduced.top_degree(); ++k)
    id_basis.push_back(Matrix::identity(con.reduced.dim(k)));
  return reidemeister_torsion_with_basis(con, id_basis);
}

TorsionValue torsion_alternating_oracle(const CochainComplex& C) {
  int n = C.top_degree();
  for (int k = 0; k <= n; ++k) {
    // acyclicity: rank d_{k-1} + rank d_k = dim C^k
    std::size_t r_prev = (k > 0) ? C.d(k - 1).rank() : 0;
    std::size_t r_here = (k < n) ? C.d(k).rank() : 0;
    if (r_prev + r_here != C.dim(k))
      throw Error(ErrorCode::NotExact, "complex not acyclic in degree " + std::to_string(k));
  }
  Rat tau(1);
  // Choose column sets top-down so each minor is square and nonsingular.
  std::vector<std::size_t> S_next;  // chosen columns of d_{k+1} (inside C^{k+1})
  for (int k = n - 1; k >= 0; --k) {
    std::vector<std::size_t> rows;  // complement of S_next in C^{k+1}
    std::vector<bool> taken(C.dim(k + 1), false);
    for (auto c : S_next) taken[c] = true;
    for (std::size_t r = 0; r < C.dim(k + 1); ++r)
      if (!taken[r]) rows.push_back(r);
    std::vector<std::size_t> all_cols(C.dim(k));
    for (std::size_t c = 0; c < all_cols.size(); ++c) all_cols[c] = c;
    Matrix rowsub = C.d(k).submatrix(rows, all_cols);
    std::vector<std::size_t> S = rowsub.pivot_columns();
    if (S.size() != rows.size())
      throw Error(ErrorCode::NotExact, "cannot complete a square minor in degree " + std::to_string(k));
    Matrix minor = C.d(k).submatrix(rows, S);
    Rat det = minor.det();
    if (det == 0) throw Error(ErrorCode::Internal, "singular minor in torsion oracle");
    if ((k + 1) % 2 == 0) tau *= abs_rat(det);
    else tau /= abs_rat(det);
    S_next = S;
  }
  if (S_next.size() != C.dim(0))
    throw Error(ErrorCode::NotExact, "complex not acyclic in degree 0");
  return {tau};
}

CochainComplex les_complex(const ComplexSES& ses, const Contraction& hA, const Contraction& hC,
                           const Contraction& hB) {
  int n = ses.C.top_degree();
  // Degrees: 3k -> H^k(A), 3k+1 -> H^k(C), 3k+2 -> H^k(B).
  int top = 3 * n + 2;
  std::vector<std::vector<std::string>> basis(top + 1);
  std::vector<Matrix> d(top + 1);
  auto hdim = [&](const Contraction& h, int k) { return k <= h.reduced.top_degree() ? h.reduced.dim(k) : 0; };
  for (int k = 0; k <= n; ++k) {
    for (std::size_t j = 0; j < hdim(hA, k); ++j) basis[3 * k].push_back("HA" + std::to_string(k) + "_" + std::to_string(j));
    for (std::size_t j = 0; j < hdim(hC, k); ++j) basis[3 * k + 1].push_back("HC" + std::to_string(k) + "_" + std::to_string(j));
    for (std::size_t j = 0; j < hdim(hB, k); ++j) basis[3 * k + 2].push_back("HB" + std::to_string(k) + "_" + std::to_string(j));
  }
  for (int k = 0; k <= n; ++k) {
    // alpha*: H^k(A) -> H^k(C)
    d[3 * k] = hC.proj[k] * ses.alpha[k] * hA.incl[k];
    // beta*: H^k(C) -> H^k(B)
    d[3 * k + 1] = hB.proj[k] * ses.beta[k] * hC.incl[k];
    // connecting: H^k(B) -> H^{k+1}(A)
    if (k < n) {
      Matrix delta(hdim(hA, k + 1), hdim(hB, k));
      for (std::size_t j = 0; j < hdim(hB, k); ++j) {
        // x = iB(h_j), lift through beta, apply d, pull back through alpha.
        std::vector<Rat> x(ses.B.dim(k));
        for (std::size_t r = 0; r < x.size(); ++r) x[r] = hB.incl[k].at(r, j);
        auto y = ses.beta[k].solve(x);
        if (!y) throw Error(ErrorCode::NotExact, "beta is not surjective in degree " + std::to_string(k));
        std::vector<Rat> z(ses.C.dim(k + 1), Rat(0));
        for (std::size_t r = 0; r < z.size(); ++r)
          for (std::size_t c = 0; c < ses.C.dim(k); ++c)
            if ((*y)[c] != 0) z[r] += ses.C.d(k).at(r, c) * (*y)[c];
        auto w = ses.alpha[k + 1].solve(z);
        if (!w) throw Error(ErrorCode::NotExact, "connecting class does not lift through alpha");
        for (std::size_t r = 0; r < hdim(hA, k + 1); ++r) {
          Rat s(0);
          for (std::size_t c = 0; c < ses.A.dim(k + 1); ++c)
            if ((*w)[c] != 0) s += hA.proj[k + 1].at(r, c) * (*w)[c];
          delta.at(r, j) = s;
        }
      }
      d[3 * k + 2] = delta;
    } else {
      d[3 * k + 2] = Matrix(0, hdim(hB, k));
    }
  }
  CochainComplex les(top, std::move(basis), std::move(d));
  les.check_complex();
  return les;
}

TorsionValue torsion_of_gluing(const TorsionValue& tau_a, const TorsionValue& tau_b,
                               const CochainComplex& les) {
  TorsionValue tau_h = torsion_alternating_oracle(les);
  return tau_a * tau_b * tau_h;
}

ComplexSES gluing_ses(const CellComplex& a, const CellComplex& b, const CellComplex& glued,
                      const std::map<std::string, std::string>& identify) {
  ComplexSES ses;
  ses.A = relative_cochains(a, RelMode::RelOut);
  ses.C = relative_cochains(glued, RelMode::RelOut);
  ses.B = relative_cochains(b, RelMode::RelOut);
  int n = ses.C.top_degree();
  auto pad = [&](CochainComplex& X) {
    if (X.top_degree() == n) return;
    std::vector<std::vector<std::string>> basis(n + 1);
    std::vector<Matrix> d(n + 1);
    for (int k = 0; k <= n; ++k) {
      if (k <= X.top_degree()) basis[k] = X.basis(k);
      std::size_t next = (k < n) ? (k + 1 <= X.top_degree() ? X.dim(k + 1) : 0) : 0;
      d[k] = Matrix(next, basis[k].size());
      if (k < X.top_degree()) d[k] = X.d(k);
    }
    X = CochainComplex(n, std::move(basis), std::move(d));
  };
  pad(ses.A);
  pad(ses.B);
  std::map<std::string, std::string> rename;  // b-cell id -> glued id
  for (auto& [ca, cb] : identify) rename[cb] = ca;
  ses.alpha.resize(n + 1);
  ses.beta.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    Matrix al(ses.C.dim(k), ses.A.dim(k));
    for (std::size_t j = 0; j < ses.A.dim(k); ++j)
      al.at(ses.C.index_of(k, ses.A.basis(k)[j]), j) = 1;
    ses.alpha[k] = std::move(al);
    Matrix be(ses.B.dim(k), ses.C.dim(k));
    for (std::size_t j = 0; j < ses.B.dim(k); ++j) {
      const std::string& id = ses.B.basis(k)[j];
      std::string gid = rename.count(id) ? rename.at(id) : id;
      be.at(j, ses.C.index_of(k, gid)) = 1;
    }
    ses.beta[k] = std::move(be);
  }
  // Sanity: chain maps and exactness of the SES itself.
  for (int k = 0; k < n; ++k) {
    if (!(ses.C.d(k) * ses.alpha[k] == ses.alpha[k + 1] * ses.A.d(k)))
      throw Error(ErrorCode::NotExact, "alpha is not a chain map at degree " + std::to_string(k));
    if (!(ses.B.d(k) * ses.beta[k] == ses.beta[k + 1] * ses.C.d(k)))
      throw Error(ErrorCode::NotExact, "beta is not a chain map at degree " + std::to_string(k));
  }
  for (int k = 0; k <= n; ++k) {
    if (ses.A.dim(k) + ses.B.dim(k) != ses.C.dim(k))
      throw Error(ErrorCode::NotExact, "SES dimension mismatch at degree " + std::to_string(k));
    if (!(ses.beta[k] * ses.alpha[k]).is_zero())
      throw Error(ErrorCode::NotExact, "beta alpha != 0 at degree " + std::to_string(k));
  }
  return ses;
}

}  // namespace bfq
