#pragma once

#include <string>

#include "peh/int_matrix.hpp"

namespace peh {

// Z^free_rank + Z/d_1 + ... + Z/d_k with d_i >= 2 and d_i | d_{i+1}.
// Coordinates are ordered free part first, then torsion.
struct AbelianGroup {
  std::size_t free_rank = 0;
  IntVector torsion;

  std::size_t generator_count() const { return free_rank + torsion.size(); }
  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const AbelianGroup& o) const = default;
  std::string to_string() const;

  // Diagonal relation matrix: 0 on free coordinates, d_i on torsion ones.
  IntMatrix relations() const;
  // Reduce torsion coordinates into [0, d_i).
  IntVector reduce(IntVector coords) const;
  IntMatrix reduce_columns(IntMatrix m) const;
};

// Normal form of an arbitrary list of cyclic orders (0 meaning Z, 1 dropped).
AbelianGroup abelian_group_from_orders(const IntVector& orders);

// Z^rows / column lattice of A.
AbelianGroup cokernel_group(const IntMatrix& A);

// Parses "0", "Z", "Z^2 + Z/5", "(Z/5)^2", "Z/2 + Z/4".
AbelianGroup parse_abelian_group(const std::string& s);

// Homomorphism between groups in normal-form coordinates.
struct GroupHom {
  AbelianGroup source;
  AbelianGroup target;
  IntMatrix matrix;  // target.generator_count() x source.generator_count()
};

bool hom_well_defined(const GroupHom& f);
AbelianGroup hom_kernel(const GroupHom& f);
AbelianGroup hom_image(const GroupHom& f);
AbelianGroup hom_cokernel(const GroupHom& f);
bool hom_is_iso(const GroupHom& f);
GroupHom compose(const GroupHom& g, const GroupHom& f);  // g after f

// Quotient L / S for a lattice basis L (full column rank) and vectors S in L.
AbelianGroup lattice_quotient(const IntMatrix& L, const IntMatrix& S);

}  // namespace peh
