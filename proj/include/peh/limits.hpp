#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peh/abelian_group.hpp"
#include "peh/int_matrix.hpp"
#include "peh/rational.hpp"

namespace peh::limits {

enum class Coefficients { Z, Q };

struct Localized {
  Int base;  // square-free, >= 2
  std::size_t mult = 0;
  bool operator==(const Localized& o) const = default;
};

// Sequence of free-part maps seen by the membership oracle: `prefix` once,
// then `cycle` repeated forever (or nothing further when `cycle` is empty).
struct MapSequence {
  std::vector<IntMatrix> prefix;
  std::vector<IntMatrix> cycle;
  const IntMatrix* at(std::size_t n) const;
};

// Generators backing a NormalForm claim, in the coordinates of `maps`.
struct Certificate {
  MapSequence maps;
  std::vector<IntVector> z_generators;
  std::vector<std::pair<IntVector, Int>> localized_generators;  // (g, base)
};

struct LimitGroup {
  enum class Kind { NormalForm, Presentation };
  Kind kind = Kind::NormalForm;
  Coefficients coefficients = Coefficients::Z;
  // NormalForm
  std::size_t free_rank = 0;
  std::vector<Localized> localized;
  IntVector torsion;
  // Presentation
  std::size_t rank = 0;
  IntMatrix matrix;
  bool torsion_unresolved = false;
  std::string note;

  std::size_t verified_depth = 0;
  std::optional<Certificate> certificate;

  bool is_normal_form() const { return kind == Kind::NormalForm; }
  std::string to_string() const;
};

// Sorts, reduces bases to their radical and merges equal bases.
LimitGroup make_normal_form(std::size_t free_rank, std::vector<Localized> localized, IntVector torsion,
                            Coefficients c = Coefficients::Z);
// Parses "Z^2 + Z/5", "Z + Z[1/6]", "Z[1/2]^2", "Q^2", "0".
LimitGroup parse_limit_group(const std::string& s);

struct EventualImage {
  std::size_t rank = 0;
  IntMatrix basis;    // k x r, saturated
  IntMatrix reduced;  // r x r, M * basis = basis * reduced
};

EventualImage eventual_image(const IntMatrix& M);

constexpr std::size_t kDefaultVerifiedDepth = 12;
constexpr std::size_t kDefaultHorizon = 64;

LimitGroup stationary_limit(const IntMatrix& M, std::size_t verified_depth = kDefaultVerifiedDepth);

struct DirectSystem {
  std::vector<AbelianGroup> stages;
  std::vector<IntMatrix> maps;  // maps[i] : stages[i] -> stages[i+1]
  std::optional<std::size_t> stationary_from;
  // Length of the repeating block of maps starting at stationary_from.
  std::size_t period = 1;
};

LimitGroup limit_of_system(const DirectSystem& sys, std::size_t horizon = kDefaultHorizon,
                           std::size_t verified_depth = kDefaultVerifiedDepth);

// Is v realised at a finite stage n <= depth, i.e. M^n v integral.
bool membership_test(const IntMatrix& M, const RatVector& v, std::size_t depth);
bool membership_test(const MapSequence& maps, const RatVector& v, std::size_t depth);

// Re-runs every generator check backing a NormalForm claim.
bool certificate_consistent(const LimitGroup& g, std::size_t depth);

bool iso_check(const LimitGroup& a, const LimitGroup& b);

// Limit over Q along rational matrices (all stages Q^k).
LimitGroup rational_stationary_limit(const RatMatrix& M);
LimitGroup rational_limit_of_system(const std::vector<std::size_t>& dims, const std::vector<RatMatrix>& maps,
                                    std::optional<std::size_t> stationary_from, std::size_t period,
                                    std::size_t horizon = kDefaultHorizon);

Int radical(Int n);
std::vector<Int> prime_factors(Int n);

}  // namespace peh::limits
