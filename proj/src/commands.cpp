#include "peh/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "peh/approximant.hpp"
#include "peh/errors.hpp"
#include "peh/smith.hpp"
#include "peh/subst1d.hpp"

namespace peh::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using limits::Coefficients;

std::string fixtures_dir() {
  if (const char* env = std::getenv("PEH_FIXTURES"); env && *env) return env;
  return PEH_FIXTURES_DIR;
}

std::string resolve_input(const std::string& input) {
  if (input.empty()) throw Error(ErrorKind::ParseError, "no input given");
  if (fs::is_regular_file(input)) return input;
  const fs::path dir = fixtures_dir();
  for (const char* ext : {"", ".toml", ".json"}) {
    fs::path p = dir / (input + ext);
    if (fs::is_regular_file(p)) return p.string();
  }
  throw Error(ErrorKind::ParseError, "no such file or bundled fixture: " + input);
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::InvariantViolation:
    case ErrorKind::ComplexInvalid:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::DivisibilityError:
      return 1;
    default:
      return 2;
  }
}

namespace {

bool is_system_file(const std::string& path) { return fs::path(path).extension() == ".toml"; }

std::optional<Coefficients> mode_override(const RunConfig& cfg) {
  if (!cfg.mode) return std::nullopt;
  if (*cfg.mode == "Z") return Coefficients::Z;
  if (*cfg.mode == "Q") return Coefficients::Q;
  throw Error(ErrorKind::ParseError, "--mode must be Z or Q");
}

HomologyEntry homology_entry(const HomologyDegree& h) {
  HomologyEntry e;
  e.degree = h.degree;
  e.group = h.group;
  e.generators = h.generators;
  return e;
}

RatMatrix to_rat(const IntMatrix& m) { return RatMatrix(m); }

// --- 1-D systems ---

void compute_system(const RunConfig& cfg, PipelineReport& r) {
  subst::SubstitutionSystem1D sys = subst::load_system(r.input_path);
  r.input_kind = "system1d";
  r.name = sys.name;
  if (cfg.dagger) throw Error(ErrorKind::ParseError, "--dagger needs an approximant dataset");
  auto mode = mode_override(cfg).value_or(Coefficients::Z);
  r.mode = mode == Coefficients::Q ? "Q" : "Z";

  subst::PipelineOptions opts{cfg.levels, cfg.horizon, cfg.limit_horizon, cfg.verified_depth};
  subst::PipelineResult1D res = subst::pe_homology_1d(sys, opts);
  r.log = res.log;

  for (std::size_t i = 0; i < res.levels.size(); ++i) {
    const subst::LevelResult& lr = res.levels[i];
    LevelEntry l;
    l.level = i;
    l.dims = {lr.complex.vertex_classes.size(), lr.complex.edge_classes.size()};
    l.boundaries = {lr.complex.d1};
    for (const auto& p : lr.complex.vertex_classes) l.vertex_classes.push_back(sys.alphabet[p.left] + "." + sys.alphabet[p.right]);
    for (int a : lr.complex.edge_classes) l.edge_classes.push_back(sys.alphabet[a]);
    for (const auto& h : lr.homology.degrees) {
      HomologyEntry e = homology_entry(h);
      if (mode == Coefficients::Q) {
        e.rational = true;
        e.rational_dimension = h.group.free_rank;
        e.rational_generators = to_rat(h.generators);
      }
      l.homology.push_back(e);
    }
    r.levels.push_back(std::move(l));
  }
  for (std::size_t d = 0; d < res.induced.size(); ++d)
    for (std::size_t i = 0; i < res.induced[d].size(); ++i) {
      ConnectingEntry c;
      c.from = i;
      c.to = i + 1;
      c.degree = d;
      c.rational = mode == Coefficients::Q;
      if (c.rational) c.rational_matrix = to_rat(res.induced[d][i]);
      else c.matrix = res.induced[d][i];
      r.connecting.push_back(std::move(c));
    }

  for (std::size_t d = 0; d < res.limits.size(); ++d) {
    LimitEntry e;
    e.degree = d;
    if (mode == Coefficients::Q) {
      // level homology of a graph is free, so {induced} are the free blocks
      std::vector<std::size_t> dims;
      std::vector<RatMatrix> maps;
      for (const auto& lr : res.levels) dims.push_back(lr.homology[d].group.free_rank);
      for (const auto& m : res.induced[d]) maps.push_back(to_rat(m));
      e.group = limits::rational_limit_of_system(dims, maps, sys.prefix.size(), sys.period.size(), cfg.limit_horizon);
    } else {
      e.group = res.limits[d];
    }
    r.limits.push_back(std::move(e));
  }

  if (sys.expected.empty()) return;
  if (mode != Coefficients::Z) {
    r.log.push_back("expectations are integral; not checked under --mode Q");
    return;
  }
  r.expectations_checked = true;
  for (const auto& [n, text] : sys.expected) {
    if (n >= r.limits.size()) {
      r.mismatches.push_back("limit H" + std::to_string(n) + ": degree out of range");
      continue;
    }
    const limits::LimitGroup& g = r.limits[n].group;
    if (!g.is_normal_form() || !limits::iso_check(g, limits::parse_limit_group(text)))
      r.mismatches.push_back("limit H" + std::to_string(n) + " = " + g.to_string() + ", expected " + text);
  }
}

// --- approximant datasets ---

std::vector<ViolationEntry> violations_of(const approx::ValidationReport& vr) {
  std::vector<ViolationEntry> out;
  for (const auto& v : vr.violations) out.push_back({v.check, v.message, v.degree, v.row, v.col});
  return out;
}

LevelEntry dataset_level(const approx::ApproximantDataset& ds, const approx::ComputeResult& res) {
  LevelEntry l;
  l.level = 0;
  l.dims = ds.dims();
  l.boundaries = ds.boundaries;
  if (!ds.classes.empty())
    for (const auto& c : ds.classes[0]) l.vertex_classes.push_back(c.name);
  if (ds.classes.size() > 1)
    for (const auto& c : ds.classes[1]) l.edge_classes.push_back(c.name);
  for (const auto& d : res.degrees) {
    HomologyEntry e;
    e.degree = d.degree;
    e.rational = res.mode == Coefficients::Q;
    e.group = d.group;
    e.generators = d.generators;
    e.rational_dimension = d.rational_dimension;
    e.rational_generators = d.rational_generators;
    l.homology.push_back(e);
  }
  return l;
}

void compute_dataset(const RunConfig& cfg, PipelineReport& r) {
  approx::ApproximantDataset ds = approx::load_dataset(r.input_path);
  r.input_kind = "dataset";
  r.name = ds.name;
  approx::ValidationReport vr = approx::validate(ds);
  if (!vr.valid()) {
    r.validation = violations_of(vr);
    throw Error(ErrorKind::InvariantViolation, vr.summary());
  }
  const bool overridden = cfg.mode && mode_override(cfg) != ds.mode;
  if (overridden) ds.mode = *mode_override(cfg);
  r.mode = ds.mode == Coefficients::Q ? "Q" : "Z";
  r.dagger = cfg.dagger;

  approx::ComputeOptions opts{cfg.limit_horizon, cfg.verified_depth};
  approx::ComputeResult plain = approx::compute(ds, opts);
  std::optional<approx::ComputeResult> dag;
  std::optional<approx::ShortExactSequenceReport> gap;
  if (cfg.dagger) {
    dag = approx::compute(approx::dagger_transform(ds), opts);
    if (ds.mode == Coefficients::Z && ds.has_isotropy()) gap = approx::duality_gap_report(ds);
  }

  const approx::ComputeResult& shown = dag ? *dag : plain;
  const approx::ApproximantDataset shown_ds = dag ? approx::dagger_transform(ds) : ds;
  r.log = shown.log;
  r.levels.push_back(dataset_level(shown_ds, shown));
  for (const auto& d : shown.degrees) {
    ConnectingEntry c;
    c.from = 0;
    c.to = 1;
    c.degree = d.degree;
    c.declared = d.declared;
    c.rational = shown.mode == Coefficients::Q;
    c.matrix = d.map;
    c.rational_matrix = d.rational_map;
    r.connecting.push_back(std::move(c));
    r.limits.push_back({d.degree, d.limit, d.duality});
  }
  if (dag) {
    for (const auto& d : plain.degrees)
      r.log.push_back("plain limit H" + std::to_string(d.degree) + " = " + d.limit.to_string());
  }
  if (gap) r.duality_gap = GapEntry{gap->dagger_h0, gap->h0, gap->kernel, gap->image, gap->cokernel, gap->inclusion};

  if (ds.expected.empty()) return;
  if (overridden) {
    r.log.push_back("--mode differs from the dataset's mode; expectations not checked");
    return;
  }
  r.expectations_checked = true;
  r.mismatches = approx::check_expectations(ds, plain, dag, gap);
}

// --- matrices ---

IntMatrix matrix_from_value(const nlohmann::json& j) {
  const nlohmann::json& m = j.is_object() ? j.at("matrix") : j;
  if (!m.is_array()) throw Error(ErrorKind::ParseError, "matrix must be an array of rows");
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (const auto& row : m)
    if (!row.is_array()) throw Error(ErrorKind::ParseError, "matrix must be an array of rows");
  return approx::int_matrix_from_json(m, rows, cols);
}

IntMatrix load_matrix(const RunConfig& cfg, PipelineReport& r) {
  std::string text;
  const std::string& in = cfg.input;
  if (!in.empty() && in.find('[') != std::string::npos && !fs::exists(in)) {
    text = in;
    r.input_path = "";
    r.input_kind = "inline";
  } else {
    r.input_path = resolve_input(in);
    r.input_kind = "matrix";
    std::ifstream f(r.input_path);
    if (!f) throw Error(ErrorKind::ParseError, "cannot open " + r.input_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("matrix: ") + e.what());
  }
  try {
    return matrix_from_value(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("matrix: ") + e.what());
  }
}

Outcome finish(PipelineReport r, int code) {
  if (code == 0 && r.expectations_checked && !r.mismatches.empty()) {
    r.status = "expectation_mismatch";
    code = 2;
  }
  return {code, std::move(r)};
}

template <class F>
Outcome guarded(const RunConfig& cfg, F body) {
  PipelineReport r;
  r.command = cfg.command;
  r.config = cfg;
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    body(r);
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    r.status = r.validation && !r.validation->empty() ? "invalid" : "error";
    r.error = ErrorEntry{error_kind_name(e.kind()), e.what()};
  } catch (const std::exception& e) {
    code = 2;
    r.status = "error";
    r.error = ErrorEntry{"Internal", e.what()};
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish(std::move(r), code);
}

void check_config(const RunConfig& cfg) {
  if (cfg.levels == 0 || cfg.horizon == 0 || cfg.limit_horizon == 0)
    throw Error(ErrorKind::ParseError, "levels and horizons must be positive");
}

}  // namespace

Outcome cmd_compute(const RunConfig& cfg) {
  return guarded(cfg, [&](PipelineReport& r) {
    check_config(cfg);
    r.input_path = resolve_input(cfg.input);
    if (is_system_file(r.input_path)) compute_system(cfg, r);
    else compute_dataset(cfg, r);
  });
}

Outcome cmd_limit(const RunConfig& cfg) {
  return guarded(cfg, [&](PipelineReport& r) {
    check_config(cfg);
    IntMatrix M = load_matrix(cfg, r);
    if (!M.is_square()) throw Error(ErrorKind::DimensionMismatch, "limit needs a square matrix");
    auto mode = mode_override(cfg).value_or(Coefficients::Z);
    r.mode = mode == Coefficients::Q ? "Q" : "Z";
    if (mode == Coefficients::Q) {
      r.limits.push_back({0, limits::rational_stationary_limit(RatMatrix(M)), ""});
      return;
    }
    limits::EventualImage ev = limits::eventual_image(M);
    r.eventual_image = EventualImageEntry{ev.rank, ev.basis, ev.reduced};
    r.limits.push_back({0, limits::stationary_limit(M, cfg.verified_depth), ""});
  });
}

Outcome cmd_snf(const RunConfig& cfg) {
  return guarded(cfg, [&](PipelineReport& r) {
    IntMatrix A = load_matrix(cfg, r);
    SmithDecomposition s = smith_normal_form(A);
    r.snf = SnfEntry{A, s.U, s.D, s.V, s.invariant_factors, s.rank, cokernel_group(A)};
  });
}

Outcome cmd_validate(const RunConfig& cfg) {
  return guarded(cfg, [&](PipelineReport& r) {
    r.input_path = resolve_input(cfg.input);
    r.validation = std::vector<ViolationEntry>{};
    if (is_system_file(r.input_path)) {
      r.input_kind = "system1d";
      subst::SubstitutionSystem1D sys = subst::load_system(r.input_path);
      r.name = sys.name;
      return;
    }
    r.input_kind = "dataset";
    approx::ApproximantDataset ds = approx::load_dataset(r.input_path);
    r.name = ds.name;
    approx::ValidationReport vr = approx::validate(ds);
    r.validation = violations_of(vr);
    if (!vr.valid()) throw Error(ErrorKind::InvariantViolation, vr.summary());
  });
}

Outcome cmd_examples(const RunConfig& cfg) {
  return guarded(cfg, [&](PipelineReport& r) {
    const fs::path dir = fixtures_dir();
    r.input_path = dir.string();
    r.input_kind = "fixtures";
    if (!fs::is_directory(dir)) throw Error(ErrorKind::ParseError, "fixture directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      const auto ext = e.path().extension();
      if (e.is_regular_file() && (ext == ".toml" || ext == ".json")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      ExampleEntry x;
      x.name = p.stem().string();
      x.path = p.string();
      if (p.extension() == ".toml") {
        x.kind = "system1d";
        subst::SubstitutionSystem1D sys = subst::load_system(p.string());
        for (const auto& [n, g] : sys.expected) x.expected.emplace_back("H" + std::to_string(n), g);
      } else {
        x.kind = "dataset";
        approx::ApproximantDataset ds = approx::load_dataset(p.string());
        auto add = [&](const std::map<std::size_t, std::string>& m, const std::string& tag) {
          for (const auto& [n, g] : m) x.expected.emplace_back(tag + std::to_string(n), g);
        };
        add(ds.expected.limit, "H");
        add(ds.expected.dagger_limit, "H†");
      }
      r.examples.push_back(std::move(x));
    }
  });
}

Outcome run_command(const RunConfig& cfg) {
  if (cfg.command == "compute") return cmd_compute(cfg);
  if (cfg.command == "limit") return cmd_limit(cfg);
  if (cfg.command == "snf") return cmd_snf(cfg);
  if (cfg.command == "validate") return cmd_validate(cfg);
  if (cfg.command == "examples") return cmd_examples(cfg);
  return guarded(cfg, [&](PipelineReport&) { throw Error(ErrorKind::ParseError, "unknown command " + cfg.command); });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pattern-equivariant homology of hierarchical tilings"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string mode, output;

  auto common = [&](CLI::App* sub, bool takes_input) {
    if (takes_input) sub->add_option("input", cfg.input, "system (.toml), dataset (.json), fixture name or matrix")->required();
    sub->add_option("--levels", cfg.levels, "hierarchy levels to build")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", cfg.horizon, "legal-pair stabilization horizon")->check(CLI::PositiveNumber);
    sub->add_option("--limit-horizon", cfg.limit_horizon, "direct-system horizon")->check(CLI::PositiveNumber);
    sub->add_option("--verified-depth", cfg.verified_depth, "membership oracle depth");
    sub->add_flag("--dagger", cfg.dagger, "use the isotropy-weighted complex");
    sub->add_option("--mode", mode, "coefficients")->check(CLI::IsMember({"Z", "Q"}));
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--output", output, "write the report to a file");
  };
  common(app.add_subcommand("compute", "run the full pipeline"), true);
  common(app.add_subcommand("limit", "direct limit of a stationary system"), true);
  common(app.add_subcommand("snf", "Smith normal form"), true);
  common(app.add_subcommand("validate", "check a system or dataset"), true);
  common(app.add_subcommand("examples", "list bundled fixtures"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (!mode.empty()) cfg.mode = mode;
  if (!output.empty()) cfg.output = output;

  Outcome o = run_command(cfg);
  std::string text;
  if (cfg.format == "json") {
    text = render_json(o.report);
  } else {
    std::ostringstream os;
    render_text(o.report, os);
    text = os.str();
  }
  if (cfg.output) {
    std::ofstream f(*cfg.output);
    if (!f) {
      err << "peh: cannot write " << *cfg.output << "\n";
      return 1;
    }
    f << text;
  } else {
    out << text;
  }
  if (o.report.error) err << "peh: " << o.report.error->kind << ": " << o.report.error->message << "\n";
  else if (!o.report.mismatches.empty()) err << "peh: " << o.report.mismatches.size() << " expectation mismatch(es)\n";
  return o.exit_code;
}

}  // namespace peh::cli
