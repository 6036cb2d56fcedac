#include "peh/rational.hpp"

#include "peh/errors.hpp"

namespace peh {

RatMatrix::RatMatrix(const IntMatrix& m) : rows_(m.rows()), cols_(m.cols()), data_(m.rows() * m.cols()) {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = Rat(m(i, j));
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_columns(const std::vector<RatVector>& cols, std::size_t rows) {
  RatMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error(ErrorKind::DimensionMismatch, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

RatVector RatMatrix::column(std::size_t j) const {
  RatVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool RatMatrix::is_integral() const {
  for (const auto& x : data_)
    if (x.get_den() != 1) return false;
  return true;
}

IntMatrix RatMatrix::to_int() const {
  if (!is_integral()) throw Error(ErrorKind::InvariantViolation, "matrix is not integral");
  IntMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).get_num();
  return m;
}

Int RatMatrix::common_denominator() const {
  Int c = 1;
  for (const auto& x : data_) c = lcm(c, Int(x.get_den()));
  return c;
}

bool RatMatrix::is_zero() const {
  for (const auto& x : data_)
    if (sgn(x) != 0) return false;
  return true;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "rational product shape mismatch");
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

RatVector operator*(const RatMatrix& a, const RatVector& v) {
  if (a.cols() != v.size()) throw Error(ErrorKind::DimensionMismatch, "rational matrix-vector mismatch");
  RatVector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "rational sum shape mismatch");
  RatMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) { return a + scale(b, -1); }

RatMatrix scale(const RatMatrix& a, const Rat& k) {
  RatMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * k;
  return c;
}

RatMatrix rref(const RatMatrix& a, std::vector<std::size_t>* pivots) {
  RatMatrix m = a;
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(p, j));
    Rat inv = 1 / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rat f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  if (pivots) *pivots = std::move(piv);
  return m;
}

std::size_t rank(const RatMatrix& a) {
  std::vector<std::size_t> piv;
  rref(a, &piv);
  return piv.size();
}

RatMatrix kernel(const RatMatrix& a) {
  std::vector<std::size_t> piv;
  RatMatrix r = rref(a, &piv);
  std::vector<bool> is_piv(a.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_piv[f]) continue;
    RatVector v(a.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -r(k, f);
    basis.push_back(std::move(v));
  }
  return RatMatrix::from_columns(basis, a.cols());
}

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "solve shape mismatch");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  std::vector<std::size_t> piv;
  RatMatrix r = rref(aug, &piv);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  RatVector x(a.cols());
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = r(k, a.cols());
  return x;
}

std::optional<RatMatrix> inverse(const RatMatrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  const std::size_t n = a.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<std::size_t> piv;
  RatMatrix r = rref(aug, &piv);
  if (piv.size() < n || (n > 0 && piv[n - 1] != n - 1)) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
  return inv;
}

Rat determinant(const RatMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  RatMatrix m = a;
  const std::size_t n = m.rows();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(p, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rat f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

std::vector<Rat> characteristic_polynomial(const RatMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Rat> c(n + 1);
  c[n] = 1;
  RatMatrix M(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    RatMatrix AM = a * M;
    for (std::size_t i = 0; i < n; ++i) AM(i, i) += c[n - k + 1];
    M = AM;
    RatMatrix AMk = a * M;
    Rat tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += AMk(i, i);
    c[n - k] = -tr / Rat(static_cast<long>(k));
  }
  return c;
}

bool is_integral(const RatVector& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

IntVector to_int(const RatVector& v) {
  IntVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw Error(ErrorKind::InvariantViolation, "vector is not integral");
    r[i] = v[i].get_num();
  }
  return r;
}

RatVector to_rat(const IntVector& v) {
  RatVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

namespace {

RatMatrix rat_boundary(const std::vector<std::size_t>& dims, const std::vector<RatMatrix>& bd, std::size_t n) {
  if (n == 0) return RatMatrix(0, dims[0]);
  if (n >= dims.size()) return RatMatrix(dims[n - 1], 0);
  return bd[n - 1];
}

RatMatrix append_column(const RatMatrix& m, const RatVector& v) {
  RatMatrix r(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    r(i, m.cols()) = v[i];
  }
  return r;
}

}  // namespace

RatHomologyDegree rat_homology_degree(const std::vector<std::size_t>& dims,
                                      const std::vector<RatMatrix>& boundaries, std::size_t n) {
  RatHomologyDegree h;
  h.degree = n;
  h.boundary = rat_boundary(dims, boundaries, n);
  RatMatrix next = rat_boundary(dims, boundaries, n + 1);
  std::vector<std::size_t> piv;
  rref(next, &piv);
  RatMatrix basis(dims[n], 0);
  for (auto p : piv) basis = append_column(basis, next.column(p));
  h.boundary_rank = piv.size();
  RatMatrix Z = kernel(h.boundary);
  RatMatrix gens(dims[n], 0);
  for (std::size_t j = 0; j < Z.cols(); ++j) {
    RatMatrix trial = append_column(basis, Z.column(j));
    if (rank(trial) == trial.cols()) {
      basis = trial;
      gens = append_column(gens, Z.column(j));
    }
  }
  h.generators = gens;
  h.basis = basis;
  h.dimension = gens.cols();
  return h;
}

RatVector rat_homology_class(const RatHomologyDegree& h, const RatVector& cycle) {
  RatVector d = h.boundary * cycle;
  for (const auto& x : d)
    if (sgn(x) != 0) throw Error(ErrorKind::NotACycle, "vector is not a cycle in degree " + std::to_string(h.degree));
  auto y = solve(h.basis, cycle);
  if (!y) throw Error(ErrorKind::InvariantViolation, "cycle outside the computed cycle space");
  return RatVector(y->begin() + h.boundary_rank, y->end());
}

}  // namespace peh
