#include "peh/smith.hpp"

#include "peh/errors.hpp"

namespace peh {

namespace {

// Position of the nonzero entry of least magnitude in D[t.., t..].
bool find_min_pivot(const IntMatrix& D, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < D.rows(); ++i)
    for (std::size_t j = t; j < D.cols(); ++j) {
      const Int& x = D(i, j);
      if (sgn(x) == 0) continue;
      Int a = abs(x);
      if (!found || a < best) {
        best = a;
        pi = i;
        pj = j;
        found = true;
        if (best == 1) return true;
      }
    }
  return found;
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  IntMatrix D = A;
  IntMatrix U = IntMatrix::identity(m);
  IntMatrix V = IntMatrix::identity(n);
  std::size_t t = 0;
  while (t < m && t < n) {
    std::size_t pi = 0, pj = 0;
    if (!find_min_pivot(D, t, pi, pj)) break;
    D.swap_rows(t, pi);
    U.swap_rows(t, pi);
    D.swap_cols(t, pj);
    V.swap_cols(t, pj);
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(D(i, t)) == 0) continue;
        Int q = floor_div(D(i, t), D(t, t));
        D.add_row(i, t, -q);
        U.add_row(i, t, -q);
        if (sgn(D(i, t)) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(D(t, j)) == 0) continue;
        Int q = floor_div(D(t, j), D(t, t));
        D.add_col(j, t, -q);
        V.add_col(j, t, -q);
        if (sgn(D(t, j)) != 0) dirty = true;
      }
      if (dirty) {
        // A smaller remainder appeared in row or column t; move it to the pivot.
        std::size_t bi = t, bj = t;
        Int best = abs(D(t, t));
        for (std::size_t i = t + 1; i < m; ++i)
          if (sgn(D(i, t)) != 0 && abs(D(i, t)) < best) { best = abs(D(i, t)); bi = i; bj = t; }
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(D(t, j)) != 0 && abs(D(t, j)) < best) { best = abs(D(t, j)); bi = t; bj = j; }
        D.swap_rows(t, bi);
        U.swap_rows(t, bi);
        D.swap_cols(t, bj);
        V.swap_cols(t, bj);
        continue;
      }
      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            D.add_row(t, i, 1);
            U.add_row(t, i, 1);
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
    if (sgn(D(t, t)) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
    ++t;
  }
  SmithDecomposition s;
  s.rank = t;
  for (std::size_t i = 0; i < t; ++i) s.invariant_factors.push_back(D(i, i));
  s.U = std::move(U);
  s.D = std::move(D);
  s.V = std::move(V);
  return s;
}

IntMatrix column_hermite(const IntMatrix& A) {
  IntMatrix H = A;
  const std::size_t m = H.rows(), n = H.cols();
  std::size_t c = 0;
  for (std::size_t i = 0; i < m && c < n; ++i) {
    for (std::size_t k = c + 1; k < n; ++k) {
      if (sgn(H(i, k)) == 0) continue;
      if (sgn(H(i, c)) == 0) {
        H.swap_cols(c, k);
        continue;
      }
      Int a = H(i, c), b = H(i, k), g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Int ag = a / g, bg = b / g;
      for (std::size_t r = 0; r < m; ++r) {
        Int x = H(r, c), y = H(r, k);
        H(r, c) = s * x + t * y;
        H(r, k) = ag * y - bg * x;
      }
    }
    if (sgn(H(i, c)) == 0) continue;
    if (sgn(H(i, c)) < 0) H.negate_col(c);
    for (std::size_t j = 0; j < c; ++j) {
      Int q = floor_div(H(i, j), H(i, c));
      H.add_col(j, c, -q);
    }
    ++c;
  }
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < c; ++j) keep.push_back(j);
  return H.columns(keep);
}

IntMatrix kernel_basis(const IntMatrix& A) {
  SmithDecomposition s = smith_normal_form(A);
  std::vector<std::size_t> idx;
  for (std::size_t j = s.rank; j < A.cols(); ++j) idx.push_back(j);
  return column_hermite(s.V.columns(idx));
}

IntMatrix saturated_column_space(const IntMatrix& A) {
  IntMatrix left = kernel_basis(A.transpose());
  return kernel_basis(left.transpose());
}

std::optional<IntMatrix> solve_integer(const IntMatrix& A, const IntMatrix& B) {
  if (A.rows() != B.rows()) throw Error(ErrorKind::DimensionMismatch, "solve_integer shape mismatch");
  SmithDecomposition s = smith_normal_form(A);
  IntMatrix UB = s.U * B;
  IntMatrix Y(A.cols(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) {
      if (i < s.rank) {
        if (!mpz_divisible_p(UB(i, j).get_mpz_t(), s.invariant_factors[i].get_mpz_t())) return std::nullopt;
        Y(i, j) = UB(i, j) / s.invariant_factors[i];
      } else if (sgn(UB(i, j)) != 0) {
        return std::nullopt;
      }
    }
  return s.V * Y;
}

std::optional<IntVector> solve_integer(const IntMatrix& A, const IntVector& b) {
  auto X = solve_integer(A, IntMatrix::from_columns({b}, b.size()));
  if (!X) return std::nullopt;
  return X->column(0);
}

bool is_unimodular(const IntMatrix& A) {
  if (!A.is_square()) return false;
  Int d = determinant(A);
  return d == 1 || d == -1;
}

IntMatrix unimodular_inverse(const IntMatrix& A) {
  if (!is_unimodular(A)) throw Error(ErrorKind::InvariantViolation, "matrix is not unimodular");
  SmithDecomposition s = smith_normal_form(A);
  return s.V * s.U;
}

IntMatrix left_inverse(const IntMatrix& A) {
  SmithDecomposition s = smith_normal_form(A);
  if (s.rank != A.cols()) throw Error(ErrorKind::InvariantViolation, "left_inverse: not full column rank");
  for (const auto& d : s.invariant_factors)
    if (d != 1) throw Error(ErrorKind::InvariantViolation, "left_inverse: lattice not saturated");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < A.cols(); ++i) idx.push_back(i);
  return s.V * s.U.rows_subset(idx);
}

bool in_column_lattice(const IntMatrix& A, const IntMatrix& B) {
  return solve_integer(A, B).has_value();
}

}  // namespace peh
