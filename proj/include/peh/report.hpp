#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "peh/abelian_group.hpp"
#include "peh/limits.hpp"
#include "peh/rational.hpp"

namespace peh::cli {

struct RunConfig {
  std::string command;
  std::string input;
  std::size_t levels = 8;
  std::size_t horizon = 32;
  std::size_t limit_horizon = limits::kDefaultHorizon;
  std::size_t verified_depth = limits::kDefaultVerifiedDepth;
  std::string format = "text";
  bool dagger = false;
  std::optional<std::string> mode;  // "Z" or "Q"
  std::optional<std::string> output;
};

struct HomologyEntry {
  std::size_t degree = 0;
  bool rational = false;
  AbelianGroup group;
  std::size_t rational_dimension = 0;
  IntMatrix generators;
  RatMatrix rational_generators;
};

struct LevelEntry {
  std::size_t level = 0;
  std::vector<std::size_t> dims;
  std::vector<IntMatrix> boundaries;  // ∂_1..∂_d
  std::vector<std::string> vertex_classes;
  std::vector<std::string> edge_classes;
  std::vector<HomologyEntry> homology;
};

struct ConnectingEntry {
  std::size_t from = 0;
  std::size_t to = 1;
  std::size_t degree = 0;
  bool declared = false;
  bool rational = false;
  IntMatrix matrix;
  RatMatrix rational_matrix;
};

struct LimitEntry {
  std::size_t degree = 0;
  limits::LimitGroup group;
  std::string duality;
};

struct GapEntry {
  AbelianGroup dagger_h0, h0, kernel, image, cokernel;
  IntMatrix inclusion;
};

struct SnfEntry {
  IntMatrix input, U, D, V;
  IntVector invariant_factors;
  std::size_t rank = 0;
  AbelianGroup cokernel;
};

struct EventualImageEntry {
  std::size_t rank = 0;
  IntMatrix basis, reduced;
};

struct ViolationEntry {
  std::string check, message;
  std::optional<std::size_t> degree, row, col;
};

struct ExampleEntry {
  std::string name, kind, path;
  std::vector<std::pair<std::string, std::string>> expected;  // (label, group)
};

struct ErrorEntry {
  std::string kind, message;
};

struct PipelineReport {
  std::string command;
  std::string status = "ok";  // ok | expectation_mismatch | invalid | error
  std::string input_path, input_kind, name;
  RunConfig config;
  std::string mode = "Z";
  bool dagger = false;
  std::vector<LevelEntry> levels;
  std::vector<ConnectingEntry> connecting;
  std::vector<LimitEntry> limits;
  std::optional<GapEntry> duality_gap;
  std::optional<SnfEntry> snf;
  std::optional<EventualImageEntry> eventual_image;
  std::optional<std::vector<ViolationEntry>> validation;
  std::vector<ExampleEntry> examples;
  bool expectations_checked = false;
  std::vector<std::string> mismatches;
  std::vector<std::string> log;
  std::optional<ErrorEntry> error;
  double elapsed_ms = 0;
};

nlohmann::ordered_json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json rat_matrix_to_json(const RatMatrix& m);
RatMatrix rat_matrix_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json group_to_json(const AbelianGroup& g);
AbelianGroup group_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json limit_to_json(const limits::LimitGroup& g);
limits::LimitGroup limit_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const PipelineReport& r);
PipelineReport from_json(const nlohmann::ordered_json& j);
// Pretty JSON; `timing` is the last member so it can be dropped as one line.
std::string render_json(const PipelineReport& r, bool with_timing = true);
void render_text(const PipelineReport& r, std::ostream& os);

}  // namespace peh::cli
