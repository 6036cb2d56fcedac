#include "peh/abelian_group.hpp"

#include <cctype>
#include <sstream>

#include "peh/errors.hpp"
#include "peh/smith.hpp"

namespace peh {

std::string AbelianGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (const auto& d : torsion) {
    os << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  return os.str();
}

IntMatrix AbelianGroup::relations() const {
  IntVector diag(free_rank);
  for (const auto& d : torsion) diag.push_back(d);
  return IntMatrix::diagonal(diag);
}

IntVector AbelianGroup::reduce(IntVector c) const {
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    Int& x = c[free_rank + i];
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), torsion[i].get_mpz_t());
  }
  return c;
}

IntMatrix AbelianGroup::reduce_columns(IntMatrix m) const {
  for (std::size_t i = 0; i < torsion.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Int& x = m(free_rank + i, j);
      mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), torsion[i].get_mpz_t());
    }
  return m;
}

AbelianGroup abelian_group_from_orders(const IntVector& orders) {
  return cokernel_group(IntMatrix::diagonal(orders));
}

AbelianGroup cokernel_group(const IntMatrix& A) {
  SmithDecomposition s = smith_normal_form(A);
  AbelianGroup g;
  g.free_rank = A.rows() - s.rank;
  for (const auto& d : s.invariant_factors)
    if (d != 1) g.torsion.push_back(d);
  return g;
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) { ++i; return true; }
    return false;
  }
  Int number() {
    skip();
    std::size_t b = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (b == i) throw Error(ErrorKind::ParseError, "expected number in group '" + s + "'");
    return Int(s.substr(b, i - b));
  }
  [[noreturn]] void fail() { throw Error(ErrorKind::ParseError, "cannot parse group '" + s + "'"); }
};

}  // namespace

AbelianGroup parse_abelian_group(const std::string& text) {
  Cursor c{text};
  IntVector orders;
  c.skip();
  if (c.eat('0')) {
    c.skip();
    if (c.i != text.size()) c.fail();
    return {};
  }
  do {
    bool paren = c.eat('(');
    if (!c.eat('Z')) c.fail();
    Int order = 0;
    if (c.eat('/')) order = c.number();
    if (paren && !c.eat(')')) c.fail();
    Int mult = 1;
    if (c.eat('^')) mult = c.number();
    for (Int k = 0; k < mult; ++k) orders.push_back(order);
  } while (c.eat('+'));
  c.skip();
  if (c.i != text.size()) c.fail();
  return abelian_group_from_orders(orders);
}

bool hom_well_defined(const GroupHom& f) {
  if (f.matrix.rows() != f.target.generator_count() || f.matrix.cols() != f.source.generator_count())
    return false;
  return in_column_lattice(f.target.relations(), f.matrix * f.source.relations());
}

AbelianGroup lattice_quotient(const IntMatrix& L, const IntMatrix& S) {
  auto X = solve_integer(L, S);
  if (!X) throw Error(ErrorKind::InvariantViolation, "lattice_quotient: sublattice not contained");
  return cokernel_group(*X);
}

AbelianGroup hom_cokernel(const GroupHom& f) {
  return cokernel_group(hstack(f.matrix, f.target.relations()));
}

AbelianGroup hom_image(const GroupHom& f) {
  IntMatrix R = f.target.relations();
  IntMatrix L = column_hermite(hstack(f.matrix, R));
  return lattice_quotient(L, R);
}

AbelianGroup hom_kernel(const GroupHom& f) {
  std::size_t n = f.source.generator_count();
  IntMatrix K = kernel_basis(hstack(f.matrix, f.target.relations()));
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
  IntMatrix K1 = column_hermite(K.rows_subset(idx));
  return lattice_quotient(K1, f.source.relations());
}

bool hom_is_iso(const GroupHom& f) {
  return hom_well_defined(f) && hom_kernel(f).is_trivial() && hom_cokernel(f).is_trivial();
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
  return {f.source, g.target, g.target.reduce_columns(g.matrix * f.matrix)};
}

}  // namespace peh
