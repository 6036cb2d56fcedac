#include "peh/chain_complex.hpp"

#include "peh/errors.hpp"
#include "peh/smith.hpp"

namespace peh {

FinChainComplex FinChainComplex::from_boundaries(std::vector<std::size_t> dims, std::vector<IntMatrix> bd) {
  FinChainComplex c{std::move(dims), std::move(bd)};
  c.validate();
  return c;
}

IntMatrix FinChainComplex::boundary(std::size_t n) const {
  if (n == 0) return IntMatrix(0, dims.empty() ? 0 : dims[0]);
  if (n > top_degree()) return IntMatrix(n - 1 < dims.size() ? dims[n - 1] : 0, 0);
  return boundaries[n - 1];
}

void FinChainComplex::validate() const {
  if (dims.empty()) throw Error(ErrorKind::ComplexInvalid, "complex has no degrees");
  if (boundaries.size() + 1 != dims.size())
    throw Error(ErrorKind::ComplexInvalid, "expected one boundary matrix per positive degree");
  for (std::size_t n = 1; n <= top_degree(); ++n) {
    const IntMatrix& d = boundaries[n - 1];
    if (d.rows() != dims[n - 1] || d.cols() != dims[n])
      throw Error(ErrorKind::ComplexInvalid, "boundary " + std::to_string(n) + " has wrong shape");
  }
  for (std::size_t n = 2; n <= top_degree(); ++n) {
    IntMatrix p = boundaries[n - 2] * boundaries[n - 1];
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j)
        if (sgn(p(i, j)) != 0)
          throw Error(ErrorKind::ComplexInvalid, "boundary composition d" + std::to_string(n - 1) + "*d" +
                                                     std::to_string(n) + " nonzero at (" + std::to_string(i) +
                                                     "," + std::to_string(j) + ")");
  }
}

HomologyDegree homology_degree(const FinChainComplex& C, std::size_t n) {
  HomologyDegree h;
  h.degree = n;
  h.boundary = C.boundary(n);
  const std::size_t dim = C.dims[n];
  IntMatrix K = kernel_basis(h.boundary);
  const std::size_t k = K.cols();
  if (k == 0) {
    h.generators = IntMatrix(dim, 0);
    h.coordinates = IntMatrix(0, dim);
    return h;
  }
  IntMatrix L = left_inverse(K);
  IntMatrix next = C.boundary(n + 1);
  IntMatrix X = L * next;
  if (!(K * X == next)) throw Error(ErrorKind::ComplexInvalid, "image of boundary not inside cycles");
  SmithDecomposition s = smith_normal_form(X);
  std::vector<std::size_t> sel;
  for (std::size_t i = s.rank; i < k; ++i) sel.push_back(i);
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.invariant_factors[i] != 1) {
      sel.push_back(i);
      h.group.torsion.push_back(s.invariant_factors[i]);
    }
  h.group.free_rank = k - s.rank;
  IntMatrix Uinv = unimodular_inverse(s.U);
  h.generators = K * Uinv.columns(sel);
  h.coordinates = (s.U * L).rows_subset(sel);
  return h;
}

HomologyResult homology(const FinChainComplex& C) {
  C.validate();
  HomologyResult r;
  for (std::size_t n = 0; n <= C.top_degree(); ++n) r.degrees.push_back(homology_degree(C, n));
  return r;
}

IntVector homology_class(const HomologyDegree& H, const IntVector& cycle) {
  if (cycle.size() != H.boundary.cols())
    throw Error(ErrorKind::DimensionMismatch, "cycle has wrong length");
  if (!is_zero(H.boundary * cycle))
    throw Error(ErrorKind::NotACycle, "vector is not a cycle in degree " + std::to_string(H.degree));
  return H.group.reduce(H.coordinates * cycle);
}

IntVector homology_class(const HomologyResult& H, std::size_t degree, const IntVector& cycle) {
  return homology_class(H[degree], cycle);
}

std::optional<std::size_t> chain_map_failure(const ChainMap& f, std::size_t lo, std::size_t hi) {
  const std::size_t top = f.source.top_degree();
  if (f.target.top_degree() != top || f.maps.size() != top + 1)
    throw Error(ErrorKind::NotAChainMap, "chain map degree count mismatch");
  for (std::size_t n = 0; n <= top; ++n)
    if (f.maps[n].rows() != f.target.dims[n] || f.maps[n].cols() != f.source.dims[n])
      throw Error(ErrorKind::NotAChainMap, "chain map matrix " + std::to_string(n) + " has wrong shape");
  for (std::size_t n = std::max<std::size_t>(lo, 1); n <= std::min(hi, top); ++n)
    if (!(f.maps[n - 1] * f.source.boundary(n) == f.target.boundary(n) * f.maps[n])) return n;
  return std::nullopt;
}

void check_chain_map(const ChainMap& f) {
  if (auto n = chain_map_failure(f, 0, f.source.top_degree()))
    throw Error(ErrorKind::NotAChainMap, "chain map does not commute with boundary " + std::to_string(*n));
}

IntMatrix induced_map(const ChainMap& f, const HomologyResult& Hsrc, const HomologyResult& Htgt,
                      std::size_t degree) {
  if (auto n = chain_map_failure(f, degree, degree + 1))
    throw Error(ErrorKind::NotAChainMap, "chain map does not commute with boundary " + std::to_string(*n));
  const HomologyDegree& s = Hsrc[degree];
  const HomologyDegree& t = Htgt[degree];
  IntMatrix img = f.maps[degree] * s.generators;
  IntMatrix out(t.group.generator_count(), s.group.generator_count());
  for (std::size_t j = 0; j < img.cols(); ++j) {
    IntVector c = homology_class(t, img.column(j));
    for (std::size_t i = 0; i < c.size(); ++i) out(i, j) = c[i];
  }
  return out;
}

std::optional<IntVector> express_in_cycles(const FinChainComplex& C, std::size_t degree, const IntMatrix& cycles,
                                           const IntVector& cycle) {
  auto x = solve_integer(hstack(cycles, C.boundary(degree + 1)), cycle);
  if (!x) return std::nullopt;
  x->resize(cycles.cols());
  return x;
}

}  // namespace peh
