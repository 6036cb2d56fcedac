#include "peh/limits.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "peh/errors.hpp"
#include "peh/smith.hpp"

namespace peh::limits {

namespace {

constexpr unsigned long kRootSearchBound = 1000000;
const long kSmallPrimes[] = {2, 3, 5, 7};

LimitGroup presentation(const IntMatrix& reduced, std::string note) {
  LimitGroup g;
  g.kind = LimitGroup::Kind::Presentation;
  g.rank = reduced.rows();
  g.matrix = reduced;
  g.note = std::move(note);
  return g;
}

IntMatrix free_block(const IntMatrix& m, std::size_t rows, std::size_t cols) {
  IntMatrix f(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) f(i, j) = m(i, j);
  return f;
}

IntMatrix torsion_block(const IntMatrix& m, std::size_t r0, std::size_t c0) {
  IntMatrix t(m.rows() - r0, m.cols() - c0);
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) = m(r0 + i, c0 + j);
  return t;
}

RatVector divide(const IntVector& v, long p) {
  RatVector r = to_rat(v);
  for (auto& x : r) x /= p;
  return r;
}

// Z^k ∩ image(P) for a rational projector P.
IntMatrix integer_points_of_image(const RatMatrix& P) {
  RatMatrix comp = RatMatrix::identity(P.rows()) - P;
  return kernel_basis(scale(comp, Rat(comp.common_denominator())).to_int());
}

Rat eval_poly(const std::vector<Rat>& c, const Rat& x) {
  Rat acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

}  // namespace

const IntMatrix* MapSequence::at(std::size_t n) const {
  if (n < prefix.size()) return &prefix[n];
  if (cycle.empty()) return nullptr;
  return &cycle[(n - prefix.size()) % cycle.size()];
}

std::vector<Int> prime_factors(Int n) {
  n = abs(n);
  std::vector<Int> ps;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    ps.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

Int radical(Int n) {
  Int r = 1;
  for (const auto& p : prime_factors(n)) r *= p;
  return r;
}

std::string LimitGroup::to_string() const {
  std::vector<std::string> parts;
  const char* ring = coefficients == Coefficients::Q ? "Q" : "Z";
  auto power = [](std::string base, std::size_t k) {
    return k == 1 ? base : base + "^" + std::to_string(k);
  };
  if (kind == Kind::Presentation) {
    std::ostringstream os;
    os << "colim(" << ring << "^" << rank << ", " << matrix.to_string() << ")";
    parts.push_back(os.str());
  } else {
    if (free_rank > 0) parts.push_back(power(ring, free_rank));
    for (const auto& l : localized) parts.push_back(power("Z[1/" + l.base.get_str() + "]", l.mult));
  }
  for (const auto& d : torsion) parts.push_back("Z/" + d.get_str());
  if (torsion_unresolved) parts.push_back("(torsion unresolved)");
  if (parts.empty()) return "0";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
  return s;
}

LimitGroup make_normal_form(std::size_t free_rank, std::vector<Localized> localized, IntVector torsion,
                            Coefficients c) {
  std::map<Int, std::size_t> merged;
  for (const auto& l : localized) {
    if (l.mult == 0) continue;
    Int b = radical(l.base);
    if (b < 2) {
      free_rank += l.mult;
      continue;
    }
    merged[b] += l.mult;
  }
  LimitGroup g;
  g.coefficients = c;
  g.free_rank = free_rank;
  for (const auto& [b, k] : merged) g.localized.push_back({b, k});
  g.torsion = abelian_group_from_orders(torsion).torsion;
  return g;
}

LimitGroup parse_limit_group(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  auto fail = [&]() -> LimitGroup { throw Error(ErrorKind::ParseError, "cannot parse group '" + text + "'"); };
  if (s == "0") return {};
  std::size_t free = 0, qfree = 0;
  std::vector<Localized> loc;
  IntVector tors;
  std::size_t i = 0;
  auto number = [&]() {
    std::size_t b = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (b == i) fail();
    return Int(s.substr(b, i - b));
  };
  while (i < s.size()) {
    bool paren = false;
    if (s[i] == '(') { paren = true; ++i; }
    if (i >= s.size()) fail();
    char ring = s[i++];
    if (ring != 'Z' && ring != 'Q') fail();
    int kind = 0;  // 0 free, 1 localized, 2 torsion
    Int val;
    if (ring == 'Z' && i < s.size() && s[i] == '/') {
      ++i;
      val = number();
      if (val < 2) fail();
      kind = 2;
    } else if (ring == 'Z' && s.compare(i, 3, "[1/") == 0) {
      i += 3;
      val = number();
      if (val < 2 || i >= s.size() || s[i] != ']') fail();
      ++i;
      kind = 1;
    }
    if (paren) {
      if (i >= s.size() || s[i] != ')') fail();
      ++i;
    }
    std::size_t mult = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      mult = number().get_ui();
    }
    if (ring == 'Q') qfree += mult;
    else if (kind == 0) free += mult;
    else if (kind == 1) loc.push_back({val, mult});
    else for (std::size_t k = 0; k < mult; ++k) tors.push_back(val);
    if (i < s.size()) {
      if (s[i] != '+') fail();
      ++i;
    }
  }
  if (qfree > 0) {
    if (free || !loc.empty() || !tors.empty()) fail();
    return make_normal_form(qfree, {}, {}, Coefficients::Q);
  }
  return make_normal_form(free, loc, tors);
}

EventualImage eventual_image(const IntMatrix& M) {
  if (!M.is_square()) throw Error(ErrorKind::DimensionMismatch, "eventual_image needs a square matrix");
  EventualImage e;
  const std::size_t k = M.rows();
  IntMatrix P = power(M, static_cast<unsigned>(k));
  e.basis = saturated_column_space(P);
  e.rank = e.basis.cols();
  if (e.rank == 0) {
    e.reduced = IntMatrix(0, 0);
    return e;
  }
  auto red = solve_integer(e.basis, M * e.basis);
  if (!red) throw Error(ErrorKind::InvariantViolation, "eventual image is not invariant");
  e.reduced = *red;
  return e;
}

bool membership_test(const MapSequence& maps, const RatVector& v0, std::size_t depth) {
  RatVector v = v0;
  for (std::size_t n = 0;; ++n) {
    if (is_integral(v)) return true;
    if (n >= depth) return false;
    const IntMatrix* M = maps.at(n);
    if (!M) return false;
    v = RatMatrix(*M) * v;
  }
}

bool membership_test(const IntMatrix& M, const RatVector& v, std::size_t depth) {
  MapSequence s;
  s.cycle.push_back(M);
  return membership_test(s, v, depth);
}

bool certificate_consistent(const LimitGroup& g, std::size_t depth) {
  if (!g.is_normal_form() || g.coefficients == Coefficients::Q) return true;
  if (!g.certificate) return false;
  const Certificate& c = *g.certificate;
  std::size_t localized_total = 0;
  for (const auto& l : g.localized) localized_total += l.mult;
  if (c.z_generators.size() != g.free_rank || c.localized_generators.size() != localized_total) return false;
  for (const auto& [gen, base] : c.localized_generators)
    for (const auto& p : prime_factors(base))
      if (!membership_test(c.maps, divide(gen, p.get_si()), depth)) return false;
  for (const auto& gen : c.z_generators)
    for (long p : kSmallPrimes)
      if (membership_test(c.maps, divide(gen, p), depth)) return false;
  return true;
}

LimitGroup stationary_limit(const IntMatrix& M, std::size_t verified_depth) {
  EventualImage e = eventual_image(M);
  const std::size_t r = e.rank;
  const IntMatrix& R = e.reduced;
  MapSequence seq;
  seq.cycle.push_back(R);
  Certificate cert;
  cert.maps = seq;

  if (r == 0) {
    LimitGroup g = make_normal_form(0, {}, {});
    g.verified_depth = verified_depth;
    g.certificate = cert;
    return g;
  }

  if (is_unimodular(R)) {
    for (std::size_t i = 0; i < r; ++i) cert.z_generators.push_back(IntMatrix::identity(r).column(i));
    LimitGroup g = make_normal_form(r, {}, {});
    g.verified_depth = verified_depth;
    g.certificate = cert;
    if (!certificate_consistent(g, verified_depth)) return presentation(R, "membership oracle rejected Z^r");
    return g;
  }

  RatMatrix Rq(R);
  std::vector<Rat> cp = characteristic_polynomial(Rq);
  Int c0 = abs(Int(cp[0].get_num()));
  Int bound = 0;
  for (std::size_t i = 0; i < r; ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < r; ++j) s += abs(R(i, j));
    bound = std::max(bound, s);
  }
  if (bound > kRootSearchBound) return presentation(R, "eigenvalue search bound exceeded");

  std::vector<Int> eig;
  std::size_t geometric_total = 0;
  std::vector<std::size_t> geometric;
  for (unsigned long a = 1; a <= bound.get_ui(); ++a) {
    if (c0 % a != 0) continue;
    for (long sign : {1L, -1L}) {
      Int lam = Int(static_cast<long>(a)) * sign;
      if (sgn(eval_poly(cp, Rat(lam))) != 0) continue;
      std::size_t gm = r - rank(Rq - scale(RatMatrix::identity(r), Rat(lam)));
      eig.push_back(lam);
      geometric.push_back(gm);
      geometric_total += gm;
    }
  }
  if (geometric_total != r) return presentation(R, "not diagonalizable over Q with integer eigenvalues");

  // Spectral projectors, grouped by the radical of |λ|.
  std::map<Int, RatMatrix> type_projector;
  std::map<Int, std::size_t> type_dim;
  for (std::size_t a = 0; a < eig.size(); ++a) {
    RatMatrix P = RatMatrix::identity(r);
    for (std::size_t b = 0; b < eig.size(); ++b) {
      if (a == b) continue;
      P = P * scale(Rq - scale(RatMatrix::identity(r), Rat(eig[b])), Rat(1) / Rat(eig[a] - eig[b]));
    }
    Int t = radical(eig[a]);
    auto it = type_projector.find(t);
    if (it == type_projector.end()) type_projector.emplace(t, P);
    else it->second = it->second + P;
    type_dim[t] += geometric[a];
  }

  RatMatrix P1 = type_projector.count(1) ? type_projector.at(1) : RatMatrix(r, r);
  std::vector<Int> nonunit;
  for (const auto& [t, P] : type_projector)
    if (t != 1) nonunit.push_back(t);

  if (nonunit.size() >= 2) {
    IntMatrix LW = kernel_basis(scale(P1, Rat(P1.common_denominator())).to_int());
    for (std::size_t j = 0; j < LW.cols(); ++j) {
      RatVector w = to_rat(LW.column(j));
      for (const auto& t : nonunit)
        if (!membership_test(R, type_projector.at(t) * w, verified_depth))
          return presentation(R, "eigen-summands do not split within verified depth");
    }
  }

  // Z summands: integer preimages of a basis of π_1(Z^r).
  if (type_dim.count(1)) {
    Int den = P1.common_denominator();
    IntMatrix scaled = scale(P1, Rat(den)).to_int();
    IntMatrix lattice = column_hermite(scaled);
    for (std::size_t j = 0; j < lattice.cols(); ++j) {
      auto pre = solve_integer(scaled, lattice.column(j));
      if (!pre) throw Error(ErrorKind::InvariantViolation, "projection lattice preimage missing");
      cert.z_generators.push_back(*pre);
    }
  }
  std::vector<Localized> loc;
  for (const auto& t : nonunit) {
    IntMatrix Lm = integer_points_of_image(type_projector.at(t));
    for (std::size_t j = 0; j < Lm.cols(); ++j) cert.localized_generators.push_back({Lm.column(j), t});
    loc.push_back({t, type_dim.at(t)});
  }
  LimitGroup g = make_normal_form(type_dim.count(1) ? type_dim.at(1) : 0, loc, {});
  g.verified_depth = verified_depth;
  g.certificate = cert;
  if (!certificate_consistent(g, verified_depth)) return presentation(R, "membership oracle rejected the candidate");
  return g;
}

LimitGroup limit_of_system(const DirectSystem& sys, std::size_t horizon, std::size_t verified_depth) {
  if (sys.stages.empty()) throw Error(ErrorKind::InvariantViolation, "direct system has no stages");
  if (sys.maps.size() + 1 != sys.stages.size())
    throw Error(ErrorKind::InvariantViolation, "direct system needs one map per consecutive stage pair");
  std::vector<GroupHom> homs;
  for (std::size_t i = 0; i < sys.maps.size(); ++i) {
    GroupHom h{sys.stages[i], sys.stages[i + 1], sys.maps[i]};
    if (!hom_well_defined(h))
      throw Error(ErrorKind::InvariantViolation, "stage map " + std::to_string(i) + " is not a homomorphism");
    homs.push_back(h);
  }
  const std::size_t L = sys.maps.size();
  if (sys.stationary_from && (sys.period == 0 || *sys.stationary_from + sys.period > L))
    throw Error(ErrorKind::InvariantViolation, "stationary block extends past the supplied maps");

  // All maps from stage N on are isomorphisms.
  std::size_t N = L;
  while (N > 0 && hom_is_iso(homs[N - 1])) --N;
  const bool all_iso = sys.stationary_from ? N <= *sys.stationary_from : (N < L || L == 0);
  if (all_iso && N <= horizon) {
    const AbelianGroup& G = sys.stages[N];
    Certificate cert;
    const std::size_t prefix_end = sys.stationary_from ? *sys.stationary_from : L;
    for (std::size_t i = N; i < prefix_end; ++i)
      cert.maps.prefix.push_back(free_block(sys.maps[i], sys.stages[i + 1].free_rank, sys.stages[i].free_rank));
    if (sys.stationary_from)
      for (std::size_t i = *sys.stationary_from; i < *sys.stationary_from + sys.period; ++i)
        cert.maps.cycle.push_back(free_block(sys.maps[i], sys.stages[i + 1].free_rank, sys.stages[i].free_rank));
    for (std::size_t i = 0; i < G.free_rank; ++i)
      cert.z_generators.push_back(IntMatrix::identity(G.free_rank).column(i));
    LimitGroup g = make_normal_form(G.free_rank, {}, G.torsion);
    g.verified_depth = verified_depth;
    g.certificate = cert;
    return g;
  }

  if (sys.stationary_from && *sys.stationary_from <= horizon) {
    const std::size_t s = *sys.stationary_from;
    if (!(sys.stages[s] == sys.stages[s + sys.period]))
      throw Error(ErrorKind::InvariantViolation, "declared stationary stages carry different groups");
    GroupHom phi = homs[s];
    for (std::size_t k = 1; k < sys.period; ++k) phi = compose(homs[s + k], phi);
    const AbelianGroup& G = sys.stages[s];
    const std::size_t f = G.free_rank;
    IntMatrix F = free_block(phi.matrix, f, f);
    AbelianGroup T{0, G.torsion};
    GroupHom tors{T, T, torsion_block(phi.matrix, f, f)};
    LimitGroup g = stationary_limit(F, verified_depth);
    if (hom_is_iso(tors)) {
      g.torsion = G.torsion;
    } else {
      g.torsion_unresolved = true;
      if (g.is_normal_form()) {
        EventualImage e = eventual_image(F);
        LimitGroup p = presentation(e.reduced, "torsion maps not eventually bijective");
        p.torsion_unresolved = true;
        return p;
      }
    }
    return g;
  }
  throw Error(ErrorKind::HorizonExceeded,
              "no isomorphism run or stationary block detected within horizon " + std::to_string(horizon));
}

bool iso_check(const LimitGroup& a, const LimitGroup& b) {
  if (!a.is_normal_form() || !b.is_normal_form())
    throw Error(ErrorKind::NotClassified, "iso_check needs two normal forms");
  auto trivial = [](const LimitGroup& g) { return g.free_rank == 0 && g.localized.empty() && g.torsion.empty(); };
  if (trivial(a) && trivial(b)) return true;
  if (a.coefficients != b.coefficients) return false;
  LimitGroup na = make_normal_form(a.free_rank, a.localized, a.torsion, a.coefficients);
  LimitGroup nb = make_normal_form(b.free_rank, b.localized, b.torsion, b.coefficients);
  return na.free_rank == nb.free_rank && na.localized == nb.localized && na.torsion == nb.torsion;
}

LimitGroup rational_stationary_limit(const RatMatrix& M) {
  RatMatrix P = RatMatrix::identity(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) P = P * M;
  return make_normal_form(rank(P), {}, {}, Coefficients::Q);
}

LimitGroup rational_limit_of_system(const std::vector<std::size_t>& dims, const std::vector<RatMatrix>& maps,
                                    std::optional<std::size_t> stationary_from, std::size_t period,
                                    std::size_t horizon) {
  if (dims.size() != maps.size() + 1) throw Error(ErrorKind::InvariantViolation, "rational system shape mismatch");
  std::size_t N = maps.size();
  auto invertible = [](const RatMatrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); };
  while (N > 0 && invertible(maps[N - 1])) --N;
  if (N <= horizon && (N < maps.size() || maps.empty() || !stationary_from))
    return make_normal_form(dims[N], {}, {}, Coefficients::Q);
  if (stationary_from && *stationary_from <= horizon && *stationary_from + period <= maps.size()) {
    RatMatrix phi = maps[*stationary_from];
    for (std::size_t k = 1; k < period; ++k) phi = maps[*stationary_from + k] * phi;
    return rational_stationary_limit(phi);
  }
  throw Error(ErrorKind::HorizonExceeded, "rational system not resolved within horizon");
}

}  // namespace peh::limits
