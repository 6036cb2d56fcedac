#include "peh/subst1d.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "peh/errors.hpp"
#include "peh/smith.hpp"

#include <toml.hpp>

namespace peh::subst {

namespace {

struct FactorSet {
  std::set<int> letters;
  std::set<Pair> pairs;
  bool operator==(const FactorSet&) const = default;
};

FactorSet apply_rule(const std::vector<Word>& rho, const FactorSet& in) {
  FactorSet out;
  for (int x : in.letters) {
    const Word& w = rho[x];
    for (std::size_t k = 0; k < w.size(); ++k) {
      out.letters.insert(w[k]);
      if (k + 1 < w.size()) out.pairs.insert({w[k], w[k + 1]});
    }
  }
  for (const Pair& p : in.pairs) out.pairs.insert({rho[p.left].back(), rho[p.right].front()});
  return out;
}

FactorSet factors(const SubstitutionSystem1D& sys, std::size_t level, std::size_t m) {
  FactorSet st;
  for (int a = 0; a < static_cast<int>(sys.alphabet.size()); ++a) st.letters.insert(a);
  for (std::size_t j = m; j-- > 0;) st = apply_rule(sys.rule_at(level + j), st);
  return st;
}

// Inside the periodic part the set is stable once it is unchanged across a whole
// period; a shorter run of equal sets can come from one rule repeated inside the
// period. Prefix levels are the images of the first periodic level's stable set.
FactorSet stable_factors(const SubstitutionSystem1D& sys, std::size_t level, std::size_t horizon) {
  if (horizon < 1) throw Error(ErrorKind::InvariantViolation, "horizon must be positive");
  if (level < sys.prefix.size()) {
    FactorSet st = stable_factors(sys, sys.prefix.size(), horizon);
    for (std::size_t j = sys.prefix.size(); j-- > level;) st = apply_rule(sys.rule_at(j), st);
    return st;
  }
  const std::size_t window = sys.period.size();
  std::vector<FactorSet> seen;
  for (std::size_t m = 1; m <= horizon; ++m) {
    seen.push_back(factors(sys, level, m));
    if (m <= window) continue;
    bool stable = true;
    for (std::size_t j = 1; j <= window && stable; ++j) stable = seen[m - 1] == seen[m - 1 - j];
    if (stable) return seen.back();
  }
  throw Error(ErrorKind::NotStabilized, "legal pairs at level " + std::to_string(level) +
                                            " still changing at horizon " + std::to_string(horizon));
}

template <class T>
std::size_t index_of(const std::vector<T>& v, const T& x, const char* what) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || !(*it == x)) throw Error(ErrorKind::InvariantViolation, std::string("missing ") + what);
  return static_cast<std::size_t>(it - v.begin());
}

}  // namespace

void SubstitutionSystem1D::validate() const {
  if (alphabet.empty()) throw Error(ErrorKind::InvariantViolation, "empty alphabet");
  std::set<std::string> seen;
  for (const auto& a : alphabet)
    if (!seen.insert(a).second) throw Error(ErrorKind::InvariantViolation, "duplicate letter '" + a + "'");
  if (rules.empty()) throw Error(ErrorKind::InvariantViolation, "no substitution rules");
  for (const auto& [name, images] : rules) {
    if (images.size() != alphabet.size())
      throw Error(ErrorKind::InvariantViolation, "rule '" + name + "' does not cover the alphabet");
    for (std::size_t a = 0; a < images.size(); ++a) {
      if (images[a].empty())
        throw Error(ErrorKind::InvariantViolation, "rule '" + name + "' has empty image for '" + alphabet[a] + "'");
      for (int x : images[a])
        if (x < 0 || x >= static_cast<int>(alphabet.size()))
          throw Error(ErrorKind::InvariantViolation, "rule '" + name + "' uses an unknown letter");
    }
  }
  if (period.empty()) throw Error(ErrorKind::InvariantViolation, "direction sequence needs a periodic block");
  for (const auto* seq : {&prefix, &period})
    for (const auto& r : *seq)
      if (!rules.count(r)) throw Error(ErrorKind::InvariantViolation, "direction references undefined rule '" + r + "'");
}

const std::string& SubstitutionSystem1D::rule_name_at(std::size_t level) const {
  if (level < prefix.size()) return prefix[level];
  return period[(level - prefix.size()) % period.size()];
}

const std::vector<Word>& SubstitutionSystem1D::rule_at(std::size_t level) const {
  return rules.at(rule_name_at(level));
}

int SubstitutionSystem1D::letter_index(const std::string& letter) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == letter) return static_cast<int>(i);
  throw Error(ErrorKind::ParseError, "unknown letter '" + letter + "'");
}

std::string SubstitutionSystem1D::word_string(const Word& w) const {
  std::string s;
  for (int x : w) s += alphabet[x];
  return s;
}

std::vector<Pair> legal_pairs(const SubstitutionSystem1D& sys, std::size_t level, std::size_t horizon) {
  FactorSet f = stable_factors(sys, level, horizon);
  return {f.pairs.begin(), f.pairs.end()};
}

FinChainComplex LevelComplex::complex() const {
  return FinChainComplex::from_boundaries({vertex_classes.size(), edge_classes.size()}, {d1});
}

LevelComplex level_complex(const SubstitutionSystem1D& sys, std::size_t level, std::size_t horizon) {
  FactorSet f = stable_factors(sys, level, horizon);
  LevelComplex lc;
  lc.level = level;
  lc.vertex_classes.assign(f.pairs.begin(), f.pairs.end());
  lc.edge_classes.assign(f.letters.begin(), f.letters.end());
  lc.d1 = IntMatrix(lc.vertex_classes.size(), lc.edge_classes.size());
  for (std::size_t i = 0; i < lc.vertex_classes.size(); ++i)
    for (std::size_t j = 0; j < lc.edge_classes.size(); ++j) {
      int l = lc.edge_classes[j];
      lc.d1(i, j) = (lc.vertex_classes[i].left == l ? 1 : 0) - (lc.vertex_classes[i].right == l ? 1 : 0);
    }
  return lc;
}

IntMatrix connecting_map_deg0(const SubstitutionSystem1D& sys, std::size_t level, std::size_t horizon) {
  std::vector<Pair> lo = legal_pairs(sys, level, horizon);
  std::vector<Pair> hi = legal_pairs(sys, level + 1, horizon);
  const std::vector<Word>& rho = sys.rule_at(level);
  IntMatrix m(hi.size(), lo.size());
  for (std::size_t r = 0; r < hi.size(); ++r) {
    const Word& wa = rho[hi[r].left];
    for (std::size_t k = 0; k + 1 < wa.size(); ++k) m(r, index_of(lo, Pair{wa[k], wa[k + 1]}, "interior pair")) += 1;
    m(r, index_of(lo, Pair{wa.back(), rho[hi[r].right].front()}, "junction pair")) += 1;
  }
  return m;
}

IntMatrix connecting_map_deg1_chain(const SubstitutionSystem1D& sys, std::size_t level, std::size_t horizon) {
  FactorSet lo = stable_factors(sys, level, horizon);
  FactorSet hi = stable_factors(sys, level + 1, horizon);
  std::vector<int> lo_letters(lo.letters.begin(), lo.letters.end());
  std::vector<int> hi_letters(hi.letters.begin(), hi.letters.end());
  const std::vector<Word>& rho = sys.rule_at(level);
  IntMatrix m(hi_letters.size(), lo_letters.size());
  for (std::size_t r = 0; r < hi_letters.size(); ++r)
    m(r, index_of(lo_letters, rho[hi_letters[r]].front(), "edge class")) = 1;
  return m;
}

IntVector connecting_map_deg1(const SubstitutionSystem1D& sys, std::size_t level, const IntVector& cycle,
                              std::size_t horizon) {
  LevelComplex lo = level_complex(sys, level, horizon);
  FactorSet hi = stable_factors(sys, level + 1, horizon);
  if (cycle.size() != lo.edge_classes.size()) throw Error(ErrorKind::DimensionMismatch, "cycle has wrong length");
  const std::vector<Word>& rho = sys.rule_at(level);
  IntVector out;
  for (int a : hi.letters) {
    const Word& w = rho[a];
    const Int& c = cycle[index_of(lo.edge_classes, w.front(), "edge class")];
    for (int x : w)
      if (cycle[index_of(lo.edge_classes, x, "edge class")] != c)
        throw Error(ErrorKind::InconsistentCycle,
                    "letters of the supertile '" + sys.alphabet[a] + "' carry unequal coefficients");
    out.push_back(c);
  }
  if (!is_zero(lo.d1 * cycle)) throw Error(ErrorKind::NotACycle, "input is not a 1-cycle");
  return out;
}

ChainMap connecting_chain_map(const SubstitutionSystem1D& sys, std::size_t level, std::size_t horizon) {
  ChainMap f;
  f.source = level_complex(sys, level, horizon).complex();
  f.target = level_complex(sys, level + 1, horizon).complex();
  f.maps = {connecting_map_deg0(sys, level, horizon), connecting_map_deg1_chain(sys, level, horizon)};
  return f;
}

PipelineResult1D pe_homology_1d(const SubstitutionSystem1D& sys, const PipelineOptions& opts) {
  sys.validate();
  PipelineResult1D res;
  const std::size_t s = sys.prefix.size(), p = sys.period.size();
  const std::size_t count = std::max(opts.levels, s + p + 1);
  for (std::size_t i = 0; i < count; ++i) {
    LevelResult lr;
    lr.complex = level_complex(sys, i, opts.horizon);
    lr.homology = homology(lr.complex.complex());
    res.levels.push_back(std::move(lr));
  }
  res.induced.assign(2, {});
  for (std::size_t i = 0; i + 1 < count; ++i) {
    ChainMap f = connecting_chain_map(sys, i, opts.horizon);
    const HomologyResult& Hs = res.levels[i].homology;
    const HomologyResult& Ht = res.levels[i + 1].homology;
    for (std::size_t d = 0; d < 2; ++d) res.induced[d].push_back(induced_map(f, Hs, Ht, d));
    // cycle-level degree-one map must agree with the cellular one
    const IntMatrix& g = Hs[1].generators;
    for (std::size_t j = 0; j < g.cols(); ++j) {
      IntVector img = connecting_map_deg1(sys, i, g.column(j), opts.horizon);
      IntVector c = homology_class(Ht, 1, img);
      if (!(c == res.induced[1].back().column(j)))
        throw Error(ErrorKind::InvariantViolation, "degree-one connecting maps disagree at level " + std::to_string(i));
    }
    res.chain_maps.push_back(std::move(f));
  }
  for (std::size_t d = 0; d < 2; ++d) {
    limits::DirectSystem ds;
    for (const auto& lr : res.levels) ds.stages.push_back(lr.homology[d].group);
    ds.maps = res.induced[d];
    ds.stationary_from = s;
    ds.period = p;
    res.limits.push_back(limits::limit_of_system(ds, opts.limit_horizon, opts.verified_depth));
  }
  return res;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

std::string as_string(const toml::node& n, const std::string& where) {
  auto v = n.value<std::string>();
  if (!v) bad(where + " must be a string");
  return *v;
}

Word parse_word(const SubstitutionSystem1D& sys, const toml::node& v, const std::string& where) {
  Word w;
  if (const toml::array* arr = v.as_array()) {
    for (const auto& x : *arr) w.push_back(sys.letter_index(as_string(x, where)));
    return w;
  }
  const std::string s = as_string(v, where);
  if (s.find(' ') != std::string::npos) {
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) w.push_back(sys.letter_index(tok));
  } else {
    for (char c : s) w.push_back(sys.letter_index(std::string(1, c)));
  }
  return w;
}

std::vector<std::string> string_list(const toml::table& t, const std::string& key) {
  std::vector<std::string> out;
  const toml::node* n = t.get(key);
  if (!n) return out;
  const toml::array* arr = n->as_array();
  if (!arr) bad("'" + key + "' must be an array");
  for (const auto& x : *arr) out.push_back(as_string(x, "'" + key + "' entries"));
  return out;
}

const toml::table* subtable(const toml::table& t, const std::string& key) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) bad("'" + key + "' must be a table");
  return n->as_table();
}

}  // namespace

Pair parse_pair(const SubstitutionSystem1D& sys, const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) throw Error(ErrorKind::ParseError, "vertex class '" + s + "' is not of the form u.v");
  return {sys.letter_index(s.substr(0, dot)), sys.letter_index(s.substr(dot + 1))};
}

IntMatrix vertex_class_coordinates(const LevelResult& level, const std::vector<Pair>& pairs) {
  const auto& vc = level.complex.vertex_classes;
  std::vector<IntVector> cols;
  for (const auto& p : pairs) {
    auto it = std::find(vc.begin(), vc.end(), p);
    if (it == vc.end()) throw Error(ErrorKind::InvariantViolation, "vertex class is not legal at this level");
    IntVector ind(vc.size());
    ind[it - vc.begin()] = 1;
    cols.push_back(homology_class(level.homology, 0, ind));
  }
  return IntMatrix::from_columns(cols, level.homology[0].group.generator_count());
}

IntMatrix deg0_in_vertex_basis(const PipelineResult1D& r, std::size_t i, const std::vector<Pair>& from,
                               const std::vector<Pair>& to) {
  IntMatrix P = vertex_class_coordinates(r.levels.at(i), from);
  IntMatrix Q = vertex_class_coordinates(r.levels.at(i + 1), to);
  auto m = solve_integer(Q, r.induced.at(0).at(i) * P);
  if (!m) throw Error(ErrorKind::InvariantViolation, "target vertex classes do not span the image");
  return *m;
}

SubstitutionSystem1D parse_system(const std::string& text) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML line " << e.source().begin.line << ": " << e.description();
    bad(os.str());
  }
  SubstitutionSystem1D sys;
  if (const toml::node* n = doc.get("name")) sys.name = as_string(*n, "'name'");
  if (!doc.contains("alphabet")) bad("missing 'alphabet'");
  sys.alphabet = string_list(doc, "alphabet");
  if (const toml::table* rules = subtable(doc, "rules"))
    for (const auto& [name, node] : *rules) {
      const toml::table* t = node.as_table();
      if (!t) bad("rules." + std::string(name.str()) + " must be a table");
      std::vector<Word> images(sys.alphabet.size());
      for (const auto& [letter, v] : *t)
        images[sys.letter_index(std::string(letter.str()))] = parse_word(sys, v, "image of '" + std::string(letter.str()) + "'");
      sys.rules[std::string(name.str())] = images;
    }
  const toml::table* dir = subtable(doc, "direction");
  if (!dir) bad("missing [direction] table");
  sys.prefix = string_list(*dir, "prefix");
  sys.period = string_list(*dir, "period");
  if (const toml::table* e = subtable(doc, "expected"))
    for (const auto& [key, v] : *e) {
      std::string k(key.str());
      if (k.size() < 2 || k[0] != 'H' || k.find_first_not_of("0123456789", 1) != std::string::npos)
        bad("expected keys look like H0, H1");
      sys.expected[std::stoul(k.substr(1))] = as_string(v, "expected." + k);
    }
  if (const toml::table* b = subtable(doc, "basis")) sys.h0_basis = string_list(*b, "H0");
  sys.validate();
  for (const auto& p : sys.h0_basis) parse_pair(sys, p);
  return sys;
}

SubstitutionSystem1D load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

SubstitutionSystem1D arnoux_rauzy(std::size_t k, std::vector<std::size_t> prefix, std::vector<std::size_t> period) {
  SubstitutionSystem1D sys;
  sys.name = "arnoux-rauzy-" + std::to_string(k);
  for (std::size_t a = 1; a <= k; ++a) sys.alphabet.push_back(std::to_string(a));
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Word> images(k);
    for (std::size_t j = 0; j < k; ++j) {
      images[j] = {static_cast<int>(j)};
      if (j != i) images[j].push_back(static_cast<int>(i));
    }
    sys.rules["r" + std::to_string(i + 1)] = images;
  }
  for (auto x : prefix) sys.prefix.push_back("r" + std::to_string(x));
  for (auto x : period) sys.period.push_back("r" + std::to_string(x));
  sys.validate();
  return sys;
}

}  // namespace peh::subst
