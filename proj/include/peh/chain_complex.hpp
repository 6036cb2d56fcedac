#pragma once

#include <optional>
#include <vector>

#include "peh/abelian_group.hpp"
#include "peh/int_matrix.hpp"

namespace peh {

// 0 <- C_0 <- C_1 <- ... <- C_top <- 0, with boundaries[n-1] = ∂_n.
struct FinChainComplex {
  std::vector<std::size_t> dims;
  std::vector<IntMatrix> boundaries;

  static FinChainComplex from_boundaries(std::vector<std::size_t> dims, std::vector<IntMatrix> bd);

  std::size_t top_degree() const { return dims.empty() ? 0 : dims.size() - 1; }
  // ∂_n for any n >= 0; zero maps outside 1..top.
  IntMatrix boundary(std::size_t n) const;
  // Throws ComplexInvalid on a shape mismatch or ∂∂ != 0.
  void validate() const;
};

struct HomologyDegree {
  std::size_t degree = 0;
  AbelianGroup group;
  IntMatrix generators;  // columns: cycles, free generators first then torsion
  IntMatrix boundary;    // ∂_degree, used to check cycles
  IntMatrix coordinates; // group.generator_count() x dims[degree]; cycle -> raw coords
};

struct HomologyResult {
  std::vector<HomologyDegree> degrees;
  const HomologyDegree& operator[](std::size_t n) const { return degrees.at(n); }
};

HomologyDegree homology_degree(const FinChainComplex& C, std::size_t n);
HomologyResult homology(const FinChainComplex& C);

// Coordinates of a cycle in the generator basis (torsion reduced).
IntVector homology_class(const HomologyResult& H, std::size_t degree, const IntVector& cycle);
IntVector homology_class(const HomologyDegree& H, const IntVector& cycle);
// Integer x with cycle - cycles * x a boundary, if any (x not unique when the
// given cycles satisfy relations).
std::optional<IntVector> express_in_cycles(const FinChainComplex& C, std::size_t degree, const IntMatrix& cycles,
                                           const IntVector& cycle);

struct ChainMap {
  FinChainComplex source;
  FinChainComplex target;
  std::vector<IntMatrix> maps;  // maps[n] : C_n(source) -> C_n(target)
};

// Degree n at which commutation f_{n-1} ∂_n = ∂_n f_n fails, if any.
// Only degrees in [lo, hi] are checked.
std::optional<std::size_t> chain_map_failure(const ChainMap& f, std::size_t lo, std::size_t hi);
void check_chain_map(const ChainMap& f);

IntMatrix induced_map(const ChainMap& f, const HomologyResult& Hsrc, const HomologyResult& Htgt,
                      std::size_t degree);

}  // namespace peh
