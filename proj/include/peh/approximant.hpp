#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "peh/chain_complex.hpp"
#include "peh/limits.hpp"
#include "peh/rational.hpp"

namespace peh::approx {

struct CellClass {
  std::string name;
  Int isotropy = 1;
  bool rev_sym = false;
};

// Connecting maps given at homology level, in declared generator coordinates.
struct DeclaredMaps {
  std::map<std::size_t, IntMatrix> generators;  // degree -> cycles as columns
  std::map<std::size_t, IntMatrix> matrices;    // degree -> declared-coordinate matrix
};

struct Expectations {
  std::map<std::size_t, std::string> approximant;
  std::map<std::size_t, std::string> limit;
  std::map<std::size_t, std::string> dagger_approximant;
  std::map<std::size_t, std::string> dagger_limit;
  std::optional<IntVector> duality_gap;
  bool empty() const;
};

enum class ConnectingMode { Chain, Homology };

struct ApproximantDataset {
  std::string name;
  std::size_t dimension = 0;
  limits::Coefficients mode = limits::Coefficients::Z;
  std::vector<std::vector<CellClass>> classes;  // per degree 0..d
  std::vector<IntMatrix> boundaries;            // ∂_1..∂_d
  ConnectingMode connecting = ConnectingMode::Chain;
  std::vector<RatMatrix> chain_maps;            // per degree (integral unless mode Q)
  DeclaredMaps declared;
  DeclaredMaps dagger_declared;                 // degree 0 only, dagger-basis cycles
  bool stationary = true;
  bool orientable = true;
  bool dagger = false;  // set by dagger_transform
  Expectations expected;

  std::vector<std::size_t> dims() const;
  FinChainComplex complex() const;
  bool has_isotropy() const;
};

struct Violation {
  std::string check;  // shape, flags, boundary_composition, connecting, expected
  std::string message;
  std::optional<std::size_t> degree;
  std::optional<std::size_t> row;
  std::optional<std::size_t> col;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  std::string summary() const;
};

ApproximantDataset parse_dataset(const nlohmann::json& doc);
ApproximantDataset load_dataset(const std::string& path);
// Structural checks in layers; later layers are skipped once one fails.
ValidationReport validate(const ApproximantDataset& ds, bool check_expected = true);
// parse + validate; throws InvariantViolation carrying the report summary.
ApproximantDataset load_and_validate(const nlohmann::json& doc);

ApproximantDataset dagger_transform(const ApproximantDataset& ds);
ApproximantDataset forget_rev_sym(const ApproximantDataset& ds);

struct DegreeReport {
  std::size_t degree = 0;
  AbelianGroup group;                 // integer mode
  std::size_t rational_dimension = 0; // rational mode
  IntMatrix generators;
  RatMatrix rational_generators;
  IntMatrix map;                      // induced map in our generator basis (Z mode)
  RatMatrix rational_map;
  bool declared = false;
  limits::LimitGroup limit;
  std::string duality;
};

struct ComputeOptions {
  std::size_t limit_horizon = limits::kDefaultHorizon;
  std::size_t verified_depth = limits::kDefaultVerifiedDepth;
};

struct ComputeResult {
  std::string name;
  bool dagger = false;
  limits::Coefficients mode = limits::Coefficients::Z;
  std::vector<DegreeReport> degrees;
  std::vector<std::string> log;
};

ComputeResult compute(const ApproximantDataset& ds, const ComputeOptions& opts = {});

struct ShortExactSequenceReport {
  AbelianGroup dagger_h0;
  AbelianGroup h0;
  IntMatrix inclusion;  // H_0^† -> H_0 in generator coordinates
  AbelianGroup kernel;
  AbelianGroup image;
  AbelianGroup cokernel;
};

ShortExactSequenceReport duality_gap_report(const ApproximantDataset& ds);

// Checks an approximant or limit result against the dataset's expectations;
// returns mismatch descriptions.
std::vector<std::string> check_expectations(const ApproximantDataset& ds, const ComputeResult& plain,
                                            const std::optional<ComputeResult>& dagger,
                                            const std::optional<ShortExactSequenceReport>& gap);

IntMatrix int_matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols);
RatMatrix rat_matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols);

}  // namespace peh::approx
