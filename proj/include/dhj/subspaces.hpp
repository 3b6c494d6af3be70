#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dhj/words.hpp"

namespace dhj {

// A word over {1..k+d} with every wildcard letter k+1..k+d present at least
// once. Canonical form: wildcard letters first appear in increasing order,
// which quotients away the d! relabelings of the same subspace.
struct SubspaceTemplate {
  int k = 0;
  int d = 0;
  std::vector<int> letters;

  SubspaceTemplate() = default;
  SubspaceTemplate(int k, int d, std::vector<int> letters);

  int n() const { return static_cast<int>(letters.size()); }
  bool is_canonical() const;
  SubspaceTemplate canonical() const;

  bool operator==(const SubspaceTemplate& o) const {
    return k == o.k && d == o.d && letters == o.letters;
  }
  bool operator<(const SubspaceTemplate& o) const { return letters < o.letters; }
};

// x(y): wildcard k+i replaced by y_i throughout. y ranges over [k]^d.
Word instantiate(const SubspaceTemplate& t, const Word& y);

// Same substitution with an inner template in place of y: the e-dimensional
// subspace of [k]^d given by `inner` maps to an e-dimensional subspace of
// [k]^n inside `outer`. Result is canonicalized.
SubspaceTemplate compose_template(const SubspaceTemplate& outer, const SubspaceTemplate& inner);

// The k^d points {x(y) | y in [k]^d} as an explicit set.
WordSet subspace_points(const SubspaceTemplate& t);

// Number of d-dimensional subspaces of [k]^n:
// (1/d!) sum_j (-1)^j C(d,j) (k+d-j)^n.
BigInt subspace_count(int n, int k, int d);

// All canonical templates, in increasing lexicographic letter order.
std::vector<SubspaceTemplate> enumerate_subspaces(int n, int k, int d);
// Visitor form; return false from the callback to stop early.
void for_each_subspace(int n, int k, int d,
                       const std::function<bool(const SubspaceTemplate&)>& fn);

// Composition y*z: x_i = z_{y_i}. y lies in [d]^n, z supplies a letter (from
// any alphabet) for each of the d symbols.
Word compose(const Word& y, const Word& z);

// True when every letter of {1..alphabet} occurs in y.
bool covers_alphabet(const Word& y, int alphabet);

// Template over [k+d]^n obtained from a non-degenerate y in [d]^n by lifting
// letter j to k+j; its points are {y*z | z in [k]^d}.
SubspaceTemplate lift_composition_template(const Word& y, int k, int d);

// Template + coordinate view of the same subspace. free_coords[i] lists the
// 1-based positions of wildcard k+1+i; fixed positions carry their letter in
// fixed_letters (0 on free positions).
struct Subspace {
  SubspaceTemplate tmpl;
  std::vector<std::vector<int>> free_coords;
  std::vector<int> fixed_letters;

  static Subspace from_template(const SubspaceTemplate& t);
  // S_{J,y}: free coordinates the singletons of J (1-based, increasing),
  // fixed part given by rest, a word over [k]^{n-|J|} read in position order.
  static Subspace axis(int n, int k, const std::vector<int>& J, const Word& rest);

  int n() const { return tmpl.n(); }
  int k() const { return tmpl.k; }
  int d() const { return tmpl.d; }
};

// Points of s with letter k forbidden on the free coordinates: (k-1)^d words.
WordSet truncation(const Subspace& s);

// {y in [k]^d : instantiate(s, y) in A}; the image of A ∩ S under the
// bijection between S and [k]^d.
WordSet pullback(const Subspace& s, const WordSet& A);

// All axis subspaces S_{J,y} with |J| = m, J in increasing combination order
// and the fixed word y in rank order.
void for_each_axis_subspace(int n, int k, int m,
                            const std::function<void(const Subspace&)>& fn);

std::string template_to_string(const SubspaceTemplate& t);
SubspaceTemplate template_from_string(int k, int d, const std::string& text);

}  // namespace dhj
