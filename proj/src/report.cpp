#include "peh/report.hpp"

#include <cstdint>
#include <iomanip>
#include <sstream>

#include "peh/errors.hpp"

namespace peh::cli {

using Json = nlohmann::ordered_json;

namespace {

Json opt_size(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<std::size_t> opt_size(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::size_t>();
}

// Numbers while they fit in 64 bits, decimal strings beyond.
Json int_to_json(const Int& x) {
  if (x.fits_slong_p()) return Json(static_cast<std::int64_t>(x.get_si()));
  return Json(x.get_str());
}

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw Error(ErrorKind::ParseError, "expected an integer, got " + j.dump());
}

Json int_list(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(int_to_json(x));
  return a;
}

IntVector int_list(const Json& j) {
  IntVector v;
  for (const auto& x : j) v.push_back(int_from_json(x));
  return v;
}

Json strings(const std::vector<std::string>& v) { return Json(v); }

std::vector<std::string> strings(const Json& j) { return j.get<std::vector<std::string>>(); }

Json config_to_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["input"] = c.input;
  j["levels"] = c.levels;
  j["horizon"] = c.horizon;
  j["limit_horizon"] = c.limit_horizon;
  j["verified_depth"] = c.verified_depth;
  j["format"] = c.format;
  j["dagger"] = c.dagger;
  j["mode"] = c.mode ? Json(*c.mode) : Json(nullptr);
  j["output"] = c.output ? Json(*c.output) : Json(nullptr);
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.input = j.at("input").get<std::string>();
  c.levels = j.at("levels").get<std::size_t>();
  c.horizon = j.at("horizon").get<std::size_t>();
  c.limit_horizon = j.at("limit_horizon").get<std::size_t>();
  c.verified_depth = j.at("verified_depth").get<std::size_t>();
  c.format = j.at("format").get<std::string>();
  c.dagger = j.at("dagger").get<bool>();
  if (!j.at("mode").is_null()) c.mode = j.at("mode").get<std::string>();
  if (!j.at("output").is_null()) c.output = j.at("output").get<std::string>();
  return c;
}

Json homology_to_json(const HomologyEntry& h) {
  Json j;
  j["degree"] = h.degree;
  j["rational"] = h.rational;
  if (h.rational) {
    j["dimension"] = h.rational_dimension;
    j["text"] = h.rational_dimension ? "Q^" + std::to_string(h.rational_dimension) : "0";
    j["generators"] = rat_matrix_to_json(h.rational_generators);
  } else {
    j["group"] = group_to_json(h.group);
    j["generators"] = matrix_to_json(h.generators);
  }
  return j;
}

HomologyEntry homology_from_json(const Json& j) {
  HomologyEntry h;
  h.degree = j.at("degree").get<std::size_t>();
  h.rational = j.at("rational").get<bool>();
  if (h.rational) {
    h.rational_dimension = j.at("dimension").get<std::size_t>();
    h.rational_generators = rat_matrix_from_json(j.at("generators"));
  } else {
    h.group = group_from_json(j.at("group"));
    h.generators = matrix_from_json(j.at("generators"));
  }
  return h;
}

Json level_to_json(const LevelEntry& l) {
  Json j;
  j["level"] = l.level;
  j["dims"] = l.dims;
  Json b = Json::array();
  for (const auto& m : l.boundaries) b.push_back(matrix_to_json(m));
  j["boundaries"] = b;
  j["vertex_classes"] = strings(l.vertex_classes);
  j["edge_classes"] = strings(l.edge_classes);
  Json h = Json::array();
  for (const auto& e : l.homology) h.push_back(homology_to_json(e));
  j["homology"] = h;
  return j;
}

LevelEntry level_from_json(const Json& j) {
  LevelEntry l;
  l.level = j.at("level").get<std::size_t>();
  l.dims = j.at("dims").get<std::vector<std::size_t>>();
  for (const auto& m : j.at("boundaries")) l.boundaries.push_back(matrix_from_json(m));
  l.vertex_classes = strings(j.at("vertex_classes"));
  l.edge_classes = strings(j.at("edge_classes"));
  for (const auto& h : j.at("homology")) l.homology.push_back(homology_from_json(h));
  return l;
}

Json connecting_to_json(const ConnectingEntry& c) {
  Json j;
  j["from"] = c.from;
  j["to"] = c.to;
  j["degree"] = c.degree;
  j["declared"] = c.declared;
  j["rational"] = c.rational;
  j["matrix"] = c.rational ? rat_matrix_to_json(c.rational_matrix) : matrix_to_json(c.matrix);
  return j;
}

ConnectingEntry connecting_from_json(const Json& j) {
  ConnectingEntry c;
  c.from = j.at("from").get<std::size_t>();
  c.to = j.at("to").get<std::size_t>();
  c.degree = j.at("degree").get<std::size_t>();
  c.declared = j.at("declared").get<bool>();
  c.rational = j.at("rational").get<bool>();
  if (c.rational) c.rational_matrix = rat_matrix_from_json(j.at("matrix"));
  else c.matrix = matrix_from_json(j.at("matrix"));
  return c;
}

std::string coefficients_name(limits::Coefficients c) { return c == limits::Coefficients::Q ? "Q" : "Z"; }

limits::Coefficients coefficients_from(const std::string& s) {
  if (s == "Q") return limits::Coefficients::Q;
  if (s == "Z") return limits::Coefficients::Z;
  throw Error(ErrorKind::ParseError, "unknown coefficients '" + s + "'");
}

}  // namespace

Json matrix_to_json(const IntMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json e = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) e.push_back(int_list(m.row(i)));
  j["entries"] = e;
  return j;
}

IntMatrix matrix_from_json(const Json& j) {
  IntMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const Json& e = j.at("entries");
  if (e.size() != m.rows()) throw Error(ErrorKind::ParseError, "matrix row count mismatch");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (e[i].size() != m.cols()) throw Error(ErrorKind::ParseError, "matrix column count mismatch");
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = int_from_json(e[i][k]);
  }
  return m;
}

Json rat_matrix_to_json(const RatMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json e = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).get_str());
    e.push_back(row);
  }
  j["entries"] = e;
  return j;
}

RatMatrix rat_matrix_from_json(const Json& j) {
  RatMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const Json& e = j.at("entries");
  if (e.size() != m.rows()) throw Error(ErrorKind::ParseError, "matrix row count mismatch");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (e[i].size() != m.cols()) throw Error(ErrorKind::ParseError, "matrix column count mismatch");
    for (std::size_t k = 0; k < m.cols(); ++k) {
      m(i, k) = Rat(e[i][k].get<std::string>());
      m(i, k).canonicalize();
    }
  }
  return m;
}

Json group_to_json(const AbelianGroup& g) {
  Json j;
  j["text"] = g.to_string();
  j["free_rank"] = g.free_rank;
  j["torsion"] = int_list(g.torsion);
  return j;
}

AbelianGroup group_from_json(const Json& j) {
  return AbelianGroup{j.at("free_rank").get<std::size_t>(), int_list(j.at("torsion"))};
}

Json limit_to_json(const limits::LimitGroup& g) {
  Json j;
  j["text"] = g.to_string();
  j["coefficients"] = coefficients_name(g.coefficients);
  if (g.is_normal_form()) {
    j["kind"] = "normal_form";
    j["free_rank"] = g.free_rank;
    Json loc = Json::array();
    for (const auto& l : g.localized) loc.push_back(Json{{"base", int_to_json(l.base)}, {"mult", l.mult}});
    j["localized"] = loc;
    j["torsion"] = int_list(g.torsion);
  } else {
    j["kind"] = "presentation";
    j["rank"] = g.rank;
    j["matrix"] = matrix_to_json(g.matrix);
    j["torsion"] = int_list(g.torsion);
    j["torsion_unresolved"] = g.torsion_unresolved;
  }
  j["verified_depth"] = g.verified_depth;
  j["note"] = g.note;
  return j;
}

limits::LimitGroup limit_from_json(const Json& j) {
  limits::LimitGroup g;
  g.coefficients = coefficients_from(j.at("coefficients").get<std::string>());
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "normal_form") {
    g.kind = limits::LimitGroup::Kind::NormalForm;
    g.free_rank = j.at("free_rank").get<std::size_t>();
    for (const auto& l : j.at("localized"))
      g.localized.push_back({int_from_json(l.at("base")), l.at("mult").get<std::size_t>()});
  } else if (kind == "presentation") {
    g.kind = limits::LimitGroup::Kind::Presentation;
    g.rank = j.at("rank").get<std::size_t>();
    g.matrix = matrix_from_json(j.at("matrix"));
    g.torsion_unresolved = j.at("torsion_unresolved").get<bool>();
  } else {
    throw Error(ErrorKind::ParseError, "unknown limit kind '" + kind + "'");
  }
  g.torsion = int_list(j.at("torsion"));
  g.verified_depth = j.at("verified_depth").get<std::size_t>();
  g.note = j.at("note").get<std::string>();
  return g;
}

Json to_json(const PipelineReport& r) {
  Json j;
  j["tool"] = "peh";
  j["command"] = r.command;
  j["status"] = r.status;
  j["input"] = Json{{"path", r.input_path}, {"kind", r.input_kind}, {"name", r.name}};
  j["config"] = config_to_json(r.config);
  j["mode"] = r.mode;
  j["dagger"] = r.dagger;

  Json levels = Json::array();
  for (const auto& l : r.levels) levels.push_back(level_to_json(l));
  j["levels"] = levels;
  Json con = Json::array();
  for (const auto& c : r.connecting) con.push_back(connecting_to_json(c));
  j["connecting"] = con;
  Json lim = Json::array();
  for (const auto& l : r.limits) lim.push_back(Json{{"degree", l.degree}, {"group", limit_to_json(l.group)}, {"duality", l.duality}});
  j["limits"] = lim;

  if (r.duality_gap) {
    const GapEntry& g = *r.duality_gap;
    j["duality_gap"] = Json{{"dagger_h0", group_to_json(g.dagger_h0)}, {"h0", group_to_json(g.h0)},
                            {"inclusion", matrix_to_json(g.inclusion)}, {"kernel", group_to_json(g.kernel)},
                            {"image", group_to_json(g.image)},          {"cokernel", group_to_json(g.cokernel)}};
  } else {
    j["duality_gap"] = nullptr;
  }
  if (r.snf) {
    const SnfEntry& s = *r.snf;
    j["snf"] = Json{{"input", matrix_to_json(s.input)},
                    {"U", matrix_to_json(s.U)},
                    {"D", matrix_to_json(s.D)},
                    {"V", matrix_to_json(s.V)},
                    {"invariant_factors", int_list(s.invariant_factors)},
                    {"rank", s.rank},
                    {"cokernel", group_to_json(s.cokernel)}};
  } else {
    j["snf"] = nullptr;
  }
  if (r.eventual_image) {
    const EventualImageEntry& e = *r.eventual_image;
    j["eventual_image"] = Json{{"rank", e.rank}, {"basis", matrix_to_json(e.basis)}, {"reduced", matrix_to_json(e.reduced)}};
  } else {
    j["eventual_image"] = nullptr;
  }
  if (r.validation) {
    Json v = Json::array();
    for (const auto& x : *r.validation)
      v.push_back(Json{{"check", x.check}, {"message", x.message}, {"degree", opt_size(x.degree)},
                       {"row", opt_size(x.row)}, {"col", opt_size(x.col)}});
    j["validation"] = Json{{"valid", r.validation->empty()}, {"violations", v}};
  } else {
    j["validation"] = nullptr;
  }
  Json ex = Json::array();
  for (const auto& e : r.examples) {
    Json exp = Json::object();
    for (const auto& [k, v] : e.expected) exp[k] = v;
    ex.push_back(Json{{"name", e.name}, {"kind", e.kind}, {"path", e.path}, {"expected", exp}});
  }
  j["examples"] = ex;
  j["expectations"] = Json{{"checked", r.expectations_checked}, {"mismatches", strings(r.mismatches)}};
  j["log"] = strings(r.log);
  j["error"] = r.error ? Json{{"kind", r.error->kind}, {"message", r.error->message}} : Json(nullptr);
  j["timing"] = Json{{"elapsed_ms", r.elapsed_ms}};
  return j;
}

PipelineReport from_json(const Json& j) {
  try {
    PipelineReport r;
    r.command = j.at("command").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.input_path = j.at("input").at("path").get<std::string>();
    r.input_kind = j.at("input").at("kind").get<std::string>();
    r.name = j.at("input").at("name").get<std::string>();
    r.config = config_from_json(j.at("config"));
    r.mode = j.at("mode").get<std::string>();
    r.dagger = j.at("dagger").get<bool>();
    for (const auto& l : j.at("levels")) r.levels.push_back(level_from_json(l));
    for (const auto& c : j.at("connecting")) r.connecting.push_back(connecting_from_json(c));
    for (const auto& l : j.at("limits"))
      r.limits.push_back({l.at("degree").get<std::size_t>(), limit_from_json(l.at("group")), l.at("duality").get<std::string>()});
    if (!j.at("duality_gap").is_null()) {
      const Json& g = j.at("duality_gap");
      r.duality_gap = GapEntry{group_from_json(g.at("dagger_h0")), group_from_json(g.at("h0")),
                               group_from_json(g.at("kernel")),    group_from_json(g.at("image")),
                               group_from_json(g.at("cokernel")),  matrix_from_json(g.at("inclusion"))};
    }
    if (!j.at("snf").is_null()) {
      const Json& s = j.at("snf");
      r.snf = SnfEntry{matrix_from_json(s.at("input")), matrix_from_json(s.at("U")),
                       matrix_from_json(s.at("D")),     matrix_from_json(s.at("V")),
                       int_list(s.at("invariant_factors")), s.at("rank").get<std::size_t>(),
                       group_from_json(s.at("cokernel"))};
    }
    if (!j.at("eventual_image").is_null()) {
      const Json& e = j.at("eventual_image");
      r.eventual_image = EventualImageEntry{e.at("rank").get<std::size_t>(), matrix_from_json(e.at("basis")),
                                            matrix_from_json(e.at("reduced"))};
    }
    if (!j.at("validation").is_null()) {
      std::vector<ViolationEntry> v;
      for (const auto& x : j.at("validation").at("violations"))
        v.push_back({x.at("check").get<std::string>(), x.at("message").get<std::string>(), opt_size(x.at("degree")),
                     opt_size(x.at("row")), opt_size(x.at("col"))});
      r.validation = v;
    }
    for (const auto& e : j.at("examples")) {
      ExampleEntry x{e.at("name").get<std::string>(), e.at("kind").get<std::string>(), e.at("path").get<std::string>(), {}};
      for (const auto& [k, v] : e.at("expected").items()) x.expected.emplace_back(k, v.get<std::string>());
      r.examples.push_back(x);
    }
    r.expectations_checked = j.at("expectations").at("checked").get<bool>();
    r.mismatches = strings(j.at("expectations").at("mismatches"));
    r.log = strings(j.at("log"));
    if (!j.at("error").is_null())
      r.error = ErrorEntry{j.at("error").at("kind").get<std::string>(), j.at("error").at("message").get<std::string>()};
    r.elapsed_ms = j.at("timing").at("elapsed_ms").get<double>();
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("report: ") + e.what());
  }
}

std::string render_json(const PipelineReport& r, bool with_timing) {
  Json j = to_json(r);
  if (!with_timing) j.erase("timing");
  return j.dump(2) + "\n";
}

namespace {

std::string matrix_text(const IntMatrix& m, const std::string& indent) {
  if (m.rows() == 0 || m.cols() == 0) return indent + "(" + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")\n";
  std::vector<std::size_t> width(m.cols(), 1);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) width[k] = std::max(width[k], m(i, k).get_str().size());
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (std::size_t k = 0; k < m.cols(); ++k) os << (k ? " " : "") << std::setw(static_cast<int>(width[k])) << m(i, k).get_str();
    os << "]\n";
  }
  return os.str();
}

std::string rat_matrix_text(const RatMatrix& m, const std::string& indent) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (std::size_t k = 0; k < m.cols(); ++k) os << (k ? " " : "") << m(i, k).get_str();
    os << "]\n";
  }
  if (m.rows() == 0 || m.cols() == 0) os << indent << "(" << m.rows() << "x" << m.cols() << ")\n";
  return os.str();
}

}  // namespace

void render_text(const PipelineReport& r, std::ostream& os) {
  os << "peh " << r.command;
  if (!r.input_path.empty()) os << " " << r.input_path;
  os << "\n";
  if (!r.name.empty()) os << "input: " << r.name << " (" << r.input_kind << ")\n";
  if (r.command == "compute" && !r.name.empty()) os << "coefficients: " << r.mode << (r.dagger ? ", dagger complex" : "") << "\n";
  for (const auto& l : r.levels) {
    os << "\nlevel " << l.level << ": dims";
    for (auto d : l.dims) os << " " << d;
    os << "\n";
    if (!l.vertex_classes.empty()) {
      os << "  vertex classes:";
      for (const auto& v : l.vertex_classes) os << " " << v;
      os << "\n  edge classes:";
      for (const auto& e : l.edge_classes) os << " " << e;
      os << "\n";
    }
    for (std::size_t n = 0; n < l.boundaries.size(); ++n) os << "  d" << n + 1 << ":\n" << matrix_text(l.boundaries[n], "    ");
    for (const auto& h : l.homology) {
      if (h.rational) {
        os << "  H" << h.degree << " = " << (h.rational_dimension ? "Q^" + std::to_string(h.rational_dimension) : "0") << "\n";
      } else {
        os << "  H" << h.degree << " = " << h.group.to_string() << "\n";
        if (h.generators.cols()) os << "    generators (columns):\n" << matrix_text(h.generators, "      ");
      }
    }
  }
  if (!r.connecting.empty()) os << "\nconnecting maps on homology:\n";
  for (const auto& c : r.connecting) {
    os << "  H" << c.degree << " " << c.from << " -> " << c.to << (c.declared ? " (declared)" : "") << ":\n";
    os << (c.rational ? rat_matrix_text(c.rational_matrix, "    ") : matrix_text(c.matrix, "    "));
  }
  if (!r.limits.empty()) os << "\nlimits:\n";
  for (const auto& l : r.limits) {
    os << "  H" << l.degree << " = " << l.group.to_string();
    if (l.group.is_normal_form() && l.group.coefficients == limits::Coefficients::Z && l.group.verified_depth)
      os << "  [verified to depth " << l.group.verified_depth << "]";
    if (!l.group.note.empty()) os << "  (" << l.group.note << ")";
    os << "\n";
    if (!l.duality.empty()) os << "    " << l.duality << "\n";
  }
  if (r.duality_gap) {
    const GapEntry& g = *r.duality_gap;
    os << "\nduality gap: 0 -> " << g.kernel.to_string() << " -> " << g.dagger_h0.to_string() << " -> " << g.h0.to_string()
       << " -> " << g.cokernel.to_string() << " -> 0\n";
    os << "  image " << g.image.to_string() << "; inclusion:\n" << matrix_text(g.inclusion, "    ");
  }
  if (r.snf) {
    const SnfEntry& s = *r.snf;
    os << "U:\n" << matrix_text(s.U, "  ") << "D:\n" << matrix_text(s.D, "  ") << "V:\n" << matrix_text(s.V, "  ");
    os << "invariant factors:";
    for (const auto& d : s.invariant_factors) os << " " << d.get_str();
    os << "\nrank: " << s.rank << "\ncokernel: " << s.cokernel.to_string() << "\n";
  }
  if (r.eventual_image) {
    os << "eventual rank: " << r.eventual_image->rank << "\nreduced matrix:\n" << matrix_text(r.eventual_image->reduced, "  ");
  }
  if (r.validation) {
    if (r.validation->empty()) os << "valid\n";
    for (const auto& v : *r.validation) {
      os << "invalid [" << v.check << "] " << v.message;
      if (v.degree) os << " (degree " << *v.degree;
      if (v.row) os << ", row " << *v.row;
      if (v.col) os << ", col " << *v.col;
      if (v.degree) os << ")";
      os << "\n";
    }
  }
  for (const auto& e : r.examples) {
    os << std::left << std::setw(30) << e.name << std::setw(12) << e.kind;
    for (const auto& [k, v] : e.expected) os << " " << k << " = " << v << ";";
    os << "\n";
  }
  if (r.expectations_checked) {
    if (r.mismatches.empty()) os << "\nexpectations: all match\n";
    else {
      os << "\nexpectations: " << r.mismatches.size() << " mismatch(es)\n";
      for (const auto& m : r.mismatches) os << "  " << m << "\n";
    }
  }
  for (const auto& l : r.log) os << "note: " << l << "\n";
  if (r.error) os << "error [" << r.error->kind << "]: " << r.error->message << "\n";
}

}  // namespace peh::cli
