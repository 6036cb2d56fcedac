#include "peh/approximant.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "peh/errors.hpp"
#include "peh/smith.hpp"

namespace peh::approx {

using nlohmann::json;
using limits::Coefficients;
using limits::LimitGroup;

namespace {

Rat rat_from_json(const json& v) {
  if (v.is_number_integer()) return Rat(Int(std::to_string(v.get<long long>())));
  if (v.is_string()) {
    Rat r;
    if (r.set_str(v.get<std::string>(), 10) != 0) throw Error(ErrorKind::ParseError, "bad number '" + v.get<std::string>() + "'");
    r.canonicalize();
    return r;
  }
  throw Error(ErrorKind::ParseError, "matrix entries must be integers or decimal strings");
}

std::size_t degree_key(const std::string& k) {
  try {
    std::size_t pos = 0;
    std::size_t d = std::stoul(k, &pos);
    if (pos == k.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::ParseError, "degree keys must be integers, got '" + k + "'");
}

IntMatrix generators_from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "generators must be a list of cycles");
  IntMatrix g(dim, j.size());
  for (std::size_t c = 0; c < j.size(); ++c) {
    if (!j[c].is_array() || j[c].size() != dim)
      throw Error(ErrorKind::ParseError, "generator cycle has wrong length");
    for (std::size_t i = 0; i < dim; ++i) {
      Rat x = rat_from_json(j[c][i]);
      if (x.get_den() != 1) throw Error(ErrorKind::ParseError, "generator entries must be integers");
      g(i, c) = x.get_num();
    }
  }
  return g;
}

DeclaredMaps declared_from_json(const json& j, const std::vector<std::size_t>& dims) {
  DeclaredMaps d;
  if (j.contains("generators"))
    for (auto& [k, v] : j.at("generators").items()) {
      std::size_t n = degree_key(k);
      if (n >= dims.size()) throw Error(ErrorKind::ParseError, "generator degree out of range");
      d.generators[n] = generators_from_json(v, dims[n]);
    }
  if (j.contains("matrices"))
    for (auto& [k, v] : j.at("matrices").items()) {
      std::size_t n = degree_key(k);
      std::size_t g = d.generators.count(n) ? d.generators[n].cols() : 0;
      d.matrices[n] = int_matrix_from_json(v, v.size(), v.empty() ? g : v[0].size());
    }
  return d;
}

std::map<std::size_t, std::string> group_map(const json& j) {
  std::map<std::size_t, std::string> m;
  for (auto& [k, v] : j.items()) m[degree_key(k)] = v.get<std::string>();
  return m;
}

void add(ValidationReport& r, const std::string& check, const std::string& msg, std::optional<std::size_t> deg = {},
         std::optional<std::size_t> row = {}, std::optional<std::size_t> col = {}) {
  r.violations.push_back({check, msg, deg, row, col});
}

IntMatrix relations_of(const AbelianGroup& g) { return g.relations(); }

// Declared-basis data transported into our generator basis.
struct Transport {
  IntMatrix coords;     // our coords of declared generators
  IntMatrix preimages;  // declared coords of our generators
  IntMatrix relations;  // declared-coordinate relations (columns)
};

std::optional<Transport> transport(const HomologyDegree& H, const IntMatrix& gens) {
  Transport t;
  const std::size_t k = gens.cols();
  t.coords = IntMatrix(H.group.generator_count(), k);
  for (std::size_t j = 0; j < k; ++j) {
    IntVector c = homology_class(H, gens.column(j));
    for (std::size_t i = 0; i < c.size(); ++i) t.coords(i, j) = c[i];
  }
  IntMatrix R = relations_of(H.group);
  IntMatrix aug = hstack(t.coords, R);
  std::vector<std::size_t> head;
  for (std::size_t i = 0; i < k; ++i) head.push_back(i);
  auto sol = solve_integer(aug, IntMatrix::identity(H.group.generator_count()));
  if (!sol) return std::nullopt;
  t.preimages = sol->rows_subset(head);
  IntMatrix K = kernel_basis(aug);
  t.relations = column_hermite(K.rows_subset(head));
  return t;
}

// Our-basis matrix of a declared homology-level map, or nullopt when the
// declared map does not descend to homology.
std::optional<IntMatrix> transported_map(const HomologyDegree& H, const Transport& t, const IntMatrix& S) {
  IntMatrix R = relations_of(H.group);
  if (!in_column_lattice(R, t.coords * S * t.relations)) return std::nullopt;
  return H.group.reduce_columns(t.coords * S * t.preimages);
}

std::string duality_note(const ApproximantDataset& ds, std::size_t k, bool dagger) {
  if (!ds.orientable) return "";
  std::string target = "isomorphic to PE cohomology and Cech cohomology in degree " + std::to_string(ds.dimension - k);
  if (dagger) return target + " (modified complex, PE Poincare duality)";
  if (!ds.has_isotropy()) return target + " (PE Poincare duality)";
  return "";
}

RatMatrix drop(const RatMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  RatMatrix r(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) r(i, j) = m(rows[i], cols[j]);
  return r;
}

}  // namespace

IntMatrix int_matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
  RatMatrix r = rat_matrix_from_json(j, rows, cols);
  if (!r.is_integral()) throw Error(ErrorKind::ParseError, "expected an integer matrix");
  return r.to_int();
}

RatMatrix rat_matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows)
    throw Error(ErrorKind::ParseError, "matrix must have " + std::to_string(rows) + " rows");
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw Error(ErrorKind::ParseError, "matrix row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rat_from_json(j[i][c]);
  }
  return m;
}

bool Expectations::empty() const {
  return approximant.empty() && limit.empty() && dagger_approximant.empty() && dagger_limit.empty() && !duality_gap;
}

std::vector<std::size_t> ApproximantDataset::dims() const {
  std::vector<std::size_t> d;
  for (const auto& c : classes) d.push_back(c.size());
  return d;
}

FinChainComplex ApproximantDataset::complex() const { return {dims(), boundaries}; }

bool ApproximantDataset::has_isotropy() const {
  if (classes.empty()) return false;
  for (const auto& c : classes[0])
    if (c.isotropy != 1) return true;
  return false;
}

std::string ValidationReport::summary() const {
  if (valid()) return "valid";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const Violation& v = violations[i];
    os << (i ? "; " : "") << v.check << ": " << v.message;
    if (v.degree) os << " [degree " << *v.degree;
    if (v.row) os << ", row " << *v.row;
    if (v.col) os << ", col " << *v.col;
    if (v.degree) os << "]";
  }
  return os.str();
}

ApproximantDataset parse_dataset(const json& doc) {
  try {
    ApproximantDataset ds;
    ds.name = doc.value("name", std::string("unnamed"));
    ds.dimension = doc.at("dimension").get<std::size_t>();
    std::string mode = doc.value("mode", std::string("Z"));
    if (mode == "Z") ds.mode = Coefficients::Z;
    else if (mode == "Q") ds.mode = Coefficients::Q;
    else throw Error(ErrorKind::ParseError, "mode must be Z or Q");
    ds.stationary = doc.value("stationary", true);
    ds.orientable = doc.value("orientable", true);
    ds.classes.resize(ds.dimension + 1);
    const json& cls = doc.at("classes");
    for (std::size_t n = 0; n <= ds.dimension; ++n) {
      const json& list = cls.at(std::to_string(n));
      for (const auto& c : list) {
        CellClass cc;
        cc.name = c.at("name").get<std::string>();
        if (c.contains("isotropy")) cc.isotropy = Int(std::to_string(c.at("isotropy").get<long long>()));
        cc.rev_sym = c.value("rev_sym", false);
        ds.classes[n].push_back(cc);
      }
    }
    std::vector<std::size_t> dims = ds.dims();
    const json& bd = doc.at("boundaries");
    for (std::size_t n = 1; n <= ds.dimension; ++n) {
      const json& m = bd.at(std::to_string(n));
      std::size_t cols = m.empty() ? dims[n] : (m[0].is_array() ? m[0].size() : 0);
      ds.boundaries.push_back(int_matrix_from_json(m, m.size(), cols));
    }
    const json& con = doc.at("connecting");
    std::string cm = con.at("mode").get<std::string>();
    if (cm == "chain") {
      ds.connecting = ConnectingMode::Chain;
      const json& mats = con.at("matrices");
      for (std::size_t n = 0; n <= ds.dimension; ++n) {
        const json& m = mats.at(std::to_string(n));
        std::size_t cols = m.empty() ? dims[n] : (m[0].is_array() ? m[0].size() : 0);
        ds.chain_maps.push_back(rat_matrix_from_json(m, m.size(), cols));
      }
    } else if (cm == "homology") {
      ds.connecting = ConnectingMode::Homology;
      ds.declared = declared_from_json(con, dims);
      if (doc.contains("dagger_connecting")) ds.dagger_declared = declared_from_json(doc.at("dagger_connecting"), dims);
    } else {
      throw Error(ErrorKind::ParseError, "connecting.mode must be chain or homology");
    }
    if (doc.contains("expected")) {
      const json& e = doc.at("expected");
      if (e.contains("approximant")) ds.expected.approximant = group_map(e.at("approximant"));
      if (e.contains("limit")) ds.expected.limit = group_map(e.at("limit"));
      if (e.contains("dagger_approximant")) ds.expected.dagger_approximant = group_map(e.at("dagger_approximant"));
      if (e.contains("dagger_limit")) ds.expected.dagger_limit = group_map(e.at("dagger_limit"));
      if (e.contains("duality_gap")) {
        IntVector g;
        for (const auto& x : e.at("duality_gap")) g.push_back(Int(std::to_string(x.get<long long>())));
        ds.expected.duality_gap = g;
      }
    }
    return ds;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("dataset: ") + e.what());
  }
}

ApproximantDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(path) + ": " + e.what());
  }
  return parse_dataset(doc);
}

ValidationReport validate(const ApproximantDataset& ds, bool check_expected) {
  ValidationReport r;
  const std::vector<std::size_t> dims = ds.dims();

  // shape
  if (ds.classes.size() != ds.dimension + 1) add(r, "shape", "class lists must cover degrees 0..dimension");
  if (ds.boundaries.size() != ds.dimension) add(r, "shape", "one boundary matrix per positive degree required");
  for (std::size_t n = 1; n <= ds.boundaries.size() && n < dims.size(); ++n) {
    const IntMatrix& d = ds.boundaries[n - 1];
    if (d.rows() != dims[n - 1] || d.cols() != dims[n])
      add(r, "shape", "boundary has shape " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()), n);
  }
  if (ds.connecting == ConnectingMode::Chain) {
    if (ds.chain_maps.size() != dims.size()) add(r, "shape", "one connecting matrix per degree required");
    for (std::size_t n = 0; n < ds.chain_maps.size() && n < dims.size(); ++n)
      if (ds.chain_maps[n].rows() != dims[n] || ds.chain_maps[n].cols() != dims[n])
        add(r, "shape", "connecting matrix has wrong shape", n);
  } else {
    for (const auto* dm : {&ds.declared, &ds.dagger_declared})
      for (const auto& [n, S] : dm->matrices) {
        auto g = dm->generators.find(n);
        std::size_t k = g == dm->generators.end() ? 0 : g->second.cols();
        if (S.rows() != k || S.cols() != k) add(r, "shape", "declared matrix does not match generator count", n);
      }
  }
  if (!r.valid()) return r;

  // flags
  for (std::size_t n = 0; n < ds.classes.size(); ++n)
    for (std::size_t i = 0; i < ds.classes[n].size(); ++i) {
      const CellClass& c = ds.classes[n][i];
      if (c.isotropy < 1) add(r, "flags", "isotropy order of '" + c.name + "' must be >= 1", n, i);
      if (c.rev_sym && ds.mode != Coefficients::Q)
        add(r, "flags", "orientation-reversing class '" + c.name + "' needs rational mode", n, i);
      if (n > 0 && c.isotropy != 1) add(r, "flags", "isotropy is supported on vertex classes only", n, i);
    }
  if (ds.mode == Coefficients::Z)
    for (std::size_t n = 0; n < ds.chain_maps.size(); ++n)
      if (!ds.chain_maps[n].is_integral()) add(r, "flags", "integer mode needs integral connecting matrices", n);
  if (!r.valid()) return r;

  // boundary composition
  for (std::size_t n = 2; n <= ds.dimension; ++n) {
    IntMatrix p = ds.boundaries[n - 2] * ds.boundaries[n - 1];
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j)
        if (sgn(p(i, j)) != 0) add(r, "boundary_composition", "d" + std::to_string(n - 1) + "*d" + std::to_string(n) + " nonzero", n, i, j);
  }
  if (!r.valid()) return r;

  // connecting maps
  if (ds.connecting == ConnectingMode::Chain) {
    for (std::size_t n = 1; n <= ds.dimension; ++n) {
      RatMatrix lhs = ds.chain_maps[n - 1] * RatMatrix(ds.boundaries[n - 1]);
      RatMatrix rhs = RatMatrix(ds.boundaries[n - 1]) * ds.chain_maps[n];
      for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < lhs.cols(); ++j)
          if (lhs(i, j) != rhs(i, j)) add(r, "connecting", "connecting maps do not commute with the boundary", n, i, j);
    }
  } else if (ds.mode == Coefficients::Z) {
    FinChainComplex C = ds.complex();
    for (const auto& [n, g] : ds.declared.generators) {
      IntMatrix d = C.boundary(n) * g;
      bool cycles = true;
      for (std::size_t j = 0; j < d.cols(); ++j)
        if (!is_zero(d.column(j))) {
          add(r, "connecting", "declared generator is not a cycle", n, std::nullopt, j);
          cycles = false;
        }
      if (!cycles) continue;
      HomologyDegree H = homology_degree(C, n);
      auto t = transport(H, g);
      if (!t) {
        add(r, "connecting", "declared generators do not generate homology", n);
        continue;
      }
      auto S = ds.declared.matrices.find(n);
      if (S == ds.declared.matrices.end()) add(r, "connecting", "declared matrix missing", n);
      else if (!transported_map(H, *t, S->second)) add(r, "connecting", "declared map is not well defined on homology", n);
    }
    for (std::size_t n = 0; n <= ds.dimension; ++n)
      if (!ds.declared.generators.count(n) && homology_degree(C, n).group.generator_count() > 0)
        add(r, "connecting", "declared generators missing", n);
  }
  if (!r.valid()) return r;

  // expected approximant groups
  if (check_expected) {
    if (ds.mode == Coefficients::Z) {
      FinChainComplex C = ds.complex();
      for (const auto& [n, text] : ds.expected.approximant) {
        if (n > ds.dimension) { add(r, "expected", "expectation degree out of range", n); continue; }
        AbelianGroup got = homology_degree(C, n).group;
        if (!(got == parse_abelian_group(text)))
          add(r, "expected", "approximant homology is " + got.to_string() + ", expected " + text, n);
      }
    } else {
      ApproximantDataset q = forget_rev_sym(ds);
      std::vector<RatMatrix> bd;
      for (const auto& b : q.boundaries) bd.push_back(RatMatrix(b));
      for (const auto& [n, text] : ds.expected.approximant) {
        if (n > ds.dimension) { add(r, "expected", "expectation degree out of range", n); continue; }
        std::size_t got = rat_homology_degree(q.dims(), bd, n).dimension;
        LimitGroup want = limits::parse_limit_group(text);
        if (want.free_rank != got || !want.localized.empty() || !want.torsion.empty())
          add(r, "expected", "approximant homology has dimension " + std::to_string(got) + ", expected " + text, n);
      }
    }
  }
  return r;
}

ApproximantDataset load_and_validate(const json& doc) {
  ApproximantDataset ds = parse_dataset(doc);
  ValidationReport r = validate(ds);
  if (!r.valid()) throw Error(ErrorKind::InvariantViolation, r.summary());
  return ds;
}

ApproximantDataset forget_rev_sym(const ApproximantDataset& ds) {
  ApproximantDataset q = ds;
  std::vector<std::vector<std::size_t>> keep(ds.classes.size());
  for (std::size_t n = 0; n < ds.classes.size(); ++n) {
    q.classes[n].clear();
    for (std::size_t i = 0; i < ds.classes[n].size(); ++i)
      if (!ds.classes[n][i].rev_sym) {
        keep[n].push_back(i);
        q.classes[n].push_back(ds.classes[n][i]);
      }
  }
  for (std::size_t n = 1; n <= ds.dimension; ++n)
    q.boundaries[n - 1] = drop(RatMatrix(ds.boundaries[n - 1]), keep[n - 1], keep[n]).to_int();
  for (std::size_t n = 0; n < ds.chain_maps.size(); ++n) q.chain_maps[n] = drop(ds.chain_maps[n], keep[n], keep[n]);
  return q;
}

ApproximantDataset dagger_transform(const ApproximantDataset& ds) {
  ApproximantDataset out = ds;
  out.dagger = true;
  out.expected.approximant = ds.expected.dagger_approximant;
  out.expected.limit = ds.expected.dagger_limit;
  if (!ds.has_isotropy()) return out;
  const auto& v = ds.classes.at(0);
  if (ds.dimension >= 1) {
    IntMatrix& d1 = out.boundaries[0];
    for (std::size_t i = 0; i < d1.rows(); ++i)
      for (std::size_t j = 0; j < d1.cols(); ++j) {
        if (!mpz_divisible_p(d1(i, j).get_mpz_t(), v[i].isotropy.get_mpz_t()))
          throw Error(ErrorKind::DivisibilityError, "boundary entry at class '" + v[i].name + "', column " +
                                                        std::to_string(j) + " is not divisible by its isotropy order " +
                                                        v[i].isotropy.get_str());
        d1(i, j) /= v[i].isotropy;
      }
  }
  if (ds.connecting == ConnectingMode::Chain) {
    RatMatrix& f0 = out.chain_maps.at(0);
    for (std::size_t i = 0; i < f0.rows(); ++i)
      for (std::size_t j = 0; j < f0.cols(); ++j) {
        f0(i, j) = f0(i, j) * Rat(v[j].isotropy) / Rat(v[i].isotropy);
        if (ds.mode == Coefficients::Z && f0(i, j).get_den() != 1)
          throw Error(ErrorKind::DivisibilityError, "rescaled connecting entry at class '" + v[i].name + "', column " +
                                                        std::to_string(j) + " is not integral");
      }
  } else {
    if (!ds.dagger_declared.generators.count(0) || !ds.dagger_declared.matrices.count(0))
      throw Error(ErrorKind::DivisibilityError, "homology-level dataset needs dagger_connecting data in degree 0");
    out.declared.generators[0] = ds.dagger_declared.generators.at(0);
    out.declared.matrices[0] = ds.dagger_declared.matrices.at(0);
  }
  return out;
}

ComputeResult compute(const ApproximantDataset& input, const ComputeOptions& opts) {
  ValidationReport vr = validate(input, false);
  if (!vr.valid()) throw Error(ErrorKind::InvariantViolation, vr.summary());
  ComputeResult res;
  res.name = input.name;
  res.dagger = input.dagger;
  res.mode = input.mode;
  std::optional<std::size_t> stat;
  if (input.stationary) stat = 0;

  if (input.mode == Coefficients::Q) {
    ApproximantDataset ds = forget_rev_sym(input);
    std::vector<std::size_t> dims = ds.dims();
    std::vector<RatMatrix> bd;
    for (const auto& b : ds.boundaries) bd.push_back(RatMatrix(b));
    if (ds.connecting != ConnectingMode::Chain)
      throw Error(ErrorKind::InvariantViolation, "rational mode needs chain-level connecting maps");
    for (std::size_t n = 0; n <= ds.dimension; ++n) {
      DegreeReport d;
      d.degree = n;
      RatHomologyDegree h = rat_homology_degree(dims, bd, n);
      d.rational_dimension = h.dimension;
      d.rational_generators = h.generators;
      d.rational_map = RatMatrix(h.dimension, h.dimension);
      for (std::size_t j = 0; j < h.dimension; ++j) {
        RatVector c = rat_homology_class(h, ds.chain_maps[n] * h.generators.column(j));
        for (std::size_t i = 0; i < c.size(); ++i) d.rational_map(i, j) = c[i];
      }
      d.limit = limits::rational_limit_of_system({h.dimension, h.dimension}, {d.rational_map}, stat, 1,
                                                 opts.limit_horizon);
      d.duality = duality_note(ds, n, ds.dagger);
      res.degrees.push_back(std::move(d));
    }
    if (input.has_isotropy()) res.log.push_back("isotropy orders are not used in rational mode");
    return res;
  }

  const ApproximantDataset& ds = input;
  FinChainComplex C = ds.complex();
  HomologyResult H = homology(C);
  ChainMap f;
  if (ds.connecting == ConnectingMode::Chain) {
    f.source = C;
    f.target = C;
    for (const auto& m : ds.chain_maps) f.maps.push_back(m.to_int());
  }
  for (std::size_t n = 0; n <= ds.dimension; ++n) {
    DegreeReport d;
    d.degree = n;
    d.group = H[n].group;
    d.generators = H[n].generators;
    if (ds.connecting == ConnectingMode::Chain) {
      d.map = induced_map(f, H, H, n);
    } else {
      d.declared = true;
      if (d.group.generator_count() == 0) {
        d.map = IntMatrix(0, 0);
      } else {
        auto t = transport(H[n], ds.declared.generators.at(n));
        if (!t) throw Error(ErrorKind::InvariantViolation, "declared generators do not generate degree " + std::to_string(n));
        auto m = transported_map(H[n], *t, ds.declared.matrices.at(n));
        if (!m) throw Error(ErrorKind::InvariantViolation, "declared map not well defined in degree " + std::to_string(n));
        d.map = *m;
      }
    }
    limits::DirectSystem sys;
    sys.stages = {d.group, d.group};
    sys.maps = {d.map};
    sys.stationary_from = stat;
    d.limit = limits::limit_of_system(sys, opts.limit_horizon, opts.verified_depth);
    d.duality = duality_note(ds, n, ds.dagger);
    res.degrees.push_back(std::move(d));
  }
  if (ds.connecting == ConnectingMode::Homology) res.log.push_back("connecting maps declared at homology level");
  return res;
}

ShortExactSequenceReport duality_gap_report(const ApproximantDataset& ds) {
  if (ds.mode != Coefficients::Z) throw Error(ErrorKind::InvariantViolation, "duality gap needs integer mode");
  ApproximantDataset dg = dagger_transform(ds);
  HomologyDegree plain = homology_degree(ds.complex(), 0);
  HomologyDegree dag = homology_degree(dg.complex(), 0);
  IntVector orders;
  for (const auto& c : ds.classes[0]) orders.push_back(c.isotropy);
  IntMatrix D = IntMatrix::diagonal(orders);
  ShortExactSequenceReport r;
  r.h0 = plain.group;
  r.dagger_h0 = dag.group;
  r.inclusion = IntMatrix(plain.group.generator_count(), dag.group.generator_count());
  for (std::size_t j = 0; j < dag.generators.cols(); ++j) {
    IntVector c = homology_class(plain, D * dag.generators.column(j));
    for (std::size_t i = 0; i < c.size(); ++i) r.inclusion(i, j) = c[i];
  }
  GroupHom h{r.dagger_h0, r.h0, r.inclusion};
  r.kernel = hom_kernel(h);
  r.image = hom_image(h);
  r.cokernel = hom_cokernel(h);
  return r;
}

std::vector<std::string> check_expectations(const ApproximantDataset& ds, const ComputeResult& plain,
                                            const std::optional<ComputeResult>& dagger,
                                            const std::optional<ShortExactSequenceReport>& gap) {
  std::vector<std::string> out;
  auto check = [&](const ComputeResult& res, const std::map<std::size_t, std::string>& approx,
                   const std::map<std::size_t, std::string>& lim, const std::string& tag) {
    for (const auto& [n, text] : approx) {
      if (n >= res.degrees.size()) { out.push_back(tag + "H" + std::to_string(n) + ": degree out of range"); continue; }
      const DegreeReport& d = res.degrees[n];
      bool ok;
      std::string got;
      if (res.mode == Coefficients::Q) {
        LimitGroup want = limits::parse_limit_group(text);
        ok = want.coefficients == Coefficients::Q ? want.free_rank == d.rational_dimension
                                                  : want.is_normal_form() && want.free_rank == d.rational_dimension &&
                                                        want.free_rank == 0;
        got = d.rational_dimension ? "Q^" + std::to_string(d.rational_dimension) : "0";
      } else {
        ok = d.group == parse_abelian_group(text);
        got = d.group.to_string();
      }
      if (!ok) out.push_back(tag + "approximant H" + std::to_string(n) + " = " + got + ", expected " + text);
    }
    for (const auto& [n, text] : lim) {
      if (n >= res.degrees.size()) { out.push_back(tag + "limit H" + std::to_string(n) + ": degree out of range"); continue; }
      const LimitGroup& g = res.degrees[n].limit;
      LimitGroup want = limits::parse_limit_group(text);
      if (!g.is_normal_form() || !limits::iso_check(g, want))
        out.push_back(tag + "limit H" + std::to_string(n) + " = " + g.to_string() + ", expected " + text);
    }
  };
  check(plain, ds.expected.approximant, ds.expected.limit, "");
  if (dagger) check(*dagger, ds.expected.dagger_approximant, ds.expected.dagger_limit, "dagger ");
  if (gap && ds.expected.duality_gap) {
    AbelianGroup want = abelian_group_from_orders(*ds.expected.duality_gap);
    if (!(gap->cokernel == want) || !gap->kernel.is_trivial())
      out.push_back("duality gap cokernel = " + gap->cokernel.to_string() + ", expected " + want.to_string());
  }
  return out;
}

}  // namespace peh::approx
