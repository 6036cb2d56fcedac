#pragma once

#include <optional>
#include <vector>

#include "peh/int_matrix.hpp"

namespace peh {

using Rat = mpq_class;
using RatVector = std::vector<Rat>;

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit RatMatrix(const IntMatrix& m);

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_columns(const std::vector<RatVector>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RatVector column(std::size_t j) const;
  RatMatrix transpose() const;
  bool is_integral() const;
  // Throws unless every entry is an integer.
  IntMatrix to_int() const;
  // Smallest positive c with c * this integral.
  Int common_denominator() const;
  bool is_zero() const;
  bool operator==(const RatMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatVector operator*(const RatMatrix& a, const RatVector& v);
RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
RatMatrix scale(const RatMatrix& a, const Rat& k);

// Reduced row echelon form; pivot columns returned through `pivots`.
RatMatrix rref(const RatMatrix& a, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const RatMatrix& a);
RatMatrix kernel(const RatMatrix& a);  // columns form a basis
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b);
std::optional<RatMatrix> inverse(const RatMatrix& a);
Rat determinant(const RatMatrix& a);
// Characteristic polynomial det(xI - A), coefficients c_0..c_n (c_n = 1).
std::vector<Rat> characteristic_polynomial(const RatMatrix& a);

bool is_integral(const RatVector& v);
IntVector to_int(const RatVector& v);
RatVector to_rat(const IntVector& v);

// Homology over Q of a complex given by rational boundary matrices.
struct RatHomologyDegree {
  std::size_t degree = 0;
  std::size_t dimension = 0;
  RatMatrix generators;  // columns: cycles spanning a complement of the boundaries
  RatMatrix boundary;    // ∂_degree
  RatMatrix basis;       // [boundaries | generators], invertible on the cycle space
  std::size_t boundary_rank = 0;
};

RatHomologyDegree rat_homology_degree(const std::vector<std::size_t>& dims,
                                      const std::vector<RatMatrix>& boundaries, std::size_t n);
// Coordinates of a rational cycle in the generator basis.
RatVector rat_homology_class(const RatHomologyDegree& h, const RatVector& cycle);

}  // namespace peh
