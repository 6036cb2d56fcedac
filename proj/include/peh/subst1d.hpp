#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peh/chain_complex.hpp"
#include "peh/limits.hpp"

namespace peh::subst {

using Word = std::vector<int>;

struct SubstitutionSystem1D {
  std::string name;
  std::vector<std::string> alphabet;
  // rule name -> image word of each letter (indexed like `alphabet`)
  std::map<std::string, std::vector<Word>> rules;
  // Direction sequence: `prefix` once, then `period` repeated forever.
  std::vector<std::string> prefix;
  std::vector<std::string> period;
  // Optional expected limit groups, by degree.
  std::map<std::size_t, std::string> expected;
  // Optional recorded H0 basis, as vertex classes "u.v".
  std::vector<std::string> h0_basis;

  void validate() const;
  const std::string& rule_name_at(std::size_t level) const;
  const std::vector<Word>& rule_at(std::size_t level) const;
  int letter_index(const std::string& letter) const;
  std::string word_string(const Word& w) const;
};

struct Pair {
  int left = 0;
  int right = 0;
  auto operator<=>(const Pair&) const = default;
};

constexpr std::size_t kDefaultHorizon = 32;

// Two-letter factors of ρ_{n_level} ∘ ... ∘ ρ_{n_{level+m-1}}(a) at the first m
// where consecutive sets agree. Lexicographic order.
std::vector<Pair> legal_pairs(const SubstitutionSystem1D& sys, std::size_t level,
                              std::size_t horizon = kDefaultHorizon);

struct LevelComplex {
  std::size_t level = 0;
  std::vector<Pair> vertex_classes;
  std::vector<int> edge_classes;
  IntMatrix d1;  // d1[u.v, l] = [u = l] - [v = l]
  FinChainComplex complex() const;
};

LevelComplex level_complex(const SubstitutionSystem1D& sys, std::size_t level,
                           std::size_t horizon = kDefaultHorizon);

// Push-right vertex map, rows: level+1 pairs, columns: level pairs.
IntMatrix connecting_map_deg0(const SubstitutionSystem1D& sys, std::size_t level,
                              std::size_t horizon = kDefaultHorizon);
// Edge map of the same cellular map: [a, l] = [first letter of ρ(a) = l].
IntMatrix connecting_map_deg1_chain(const SubstitutionSystem1D& sys, std::size_t level,
                                    std::size_t horizon = kDefaultHorizon);
// Cycle on level letters -> cycle on level+1 letters (common coefficient on ρ(a)).
IntVector connecting_map_deg1(const SubstitutionSystem1D& sys, std::size_t level, const IntVector& cycle,
                              std::size_t horizon = kDefaultHorizon);
ChainMap connecting_chain_map(const SubstitutionSystem1D& sys, std::size_t level,
                              std::size_t horizon = kDefaultHorizon);

struct PipelineOptions {
  std::size_t levels = 8;
  std::size_t horizon = kDefaultHorizon;
  std::size_t limit_horizon = limits::kDefaultHorizon;
  std::size_t verified_depth = limits::kDefaultVerifiedDepth;
};

struct LevelResult {
  LevelComplex complex;
  HomologyResult homology;
};

struct PipelineResult1D {
  std::vector<LevelResult> levels;
  std::vector<ChainMap> chain_maps;               // level i -> i+1
  std::vector<std::vector<IntMatrix>> induced;  // [degree][i]
  std::vector<limits::LimitGroup> limits;        // per degree
  std::vector<std::string> log;
};

// Homology coordinates of the indicator chains of `pairs` (one column each).
IntMatrix vertex_class_coordinates(const LevelResult& level, const std::vector<Pair>& pairs);
// Induced degree-0 map level i -> i+1 rewritten in the given vertex-class
// bases; throws InvariantViolation if the target basis does not span the image.
IntMatrix deg0_in_vertex_basis(const PipelineResult1D& r, std::size_t i, const std::vector<Pair>& from,
                               const std::vector<Pair>& to);
Pair parse_pair(const SubstitutionSystem1D& sys, const std::string& s);

PipelineResult1D pe_homology_1d(const SubstitutionSystem1D& sys, const PipelineOptions& opts = {});

// Loader for the TOML system description.
SubstitutionSystem1D parse_system(const std::string& text);
SubstitutionSystem1D load_system(const std::string& path);

SubstitutionSystem1D arnoux_rauzy(std::size_t k, std::vector<std::size_t> prefix, std::vector<std::size_t> period);

}  // namespace peh::subst
