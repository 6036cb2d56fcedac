#pragma once

#include <optional>

#include "peh/int_matrix.hpp"

namespace peh {

struct SmithDecomposition {
  IntMatrix U;  // rows x rows, unimodular
  IntMatrix D;  // rows x cols, diagonal
  IntMatrix V;  // cols x cols, unimodular
  std::size_t rank = 0;
  IntVector invariant_factors;  // nonzero diagonal of D, including 1s
};

// U * A * V = D with d_1 | d_2 | ... | d_rank, all positive.
SmithDecomposition smith_normal_form(const IntMatrix& A);

// Column Hermite normal form of the lattice spanned by the columns of A.
// Returns a basis (zero columns dropped): lower-echelon, positive pivots,
// entries left of each pivot reduced into [0, pivot).
IntMatrix column_hermite(const IntMatrix& A);

// Saturated basis of {x : A x = 0}, canonicalised by column_hermite.
IntMatrix kernel_basis(const IntMatrix& A);

// Basis of the saturation of the column lattice of A (= Q-span ∩ Z^rows).
IntMatrix saturated_column_space(const IntMatrix& A);

// Integer solution X of A X = B, if one exists.
std::optional<IntMatrix> solve_integer(const IntMatrix& A, const IntMatrix& B);
std::optional<IntVector> solve_integer(const IntMatrix& A, const IntVector& b);

// Inverse of a unimodular matrix; throws otherwise.
IntMatrix unimodular_inverse(const IntMatrix& A);
bool is_unimodular(const IntMatrix& A);

// Integer left inverse L (L A = I) of a matrix with saturated full column rank.
IntMatrix left_inverse(const IntMatrix& A);

// Is every column of B in the column lattice of A?
bool in_column_lattice(const IntMatrix& A, const IntMatrix& B);

}  // namespace peh
