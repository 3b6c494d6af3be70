#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "dhj/subspaces.hpp"

using namespace dhj;

TEST_CASE("template validation and canonical form") {
  CHECK_THROWS_AS(SubspaceTemplate(2, 2, {3, 3}), std::invalid_argument);  // missing wildcard 4
  CHECK_THROWS_AS(SubspaceTemplate(2, 1, {1, 5}), std::invalid_argument);  // letter out of range
  SubspaceTemplate t(2, 2, {4, 3, 4});
  CHECK_FALSE(t.is_canonical());
  CHECK(t.canonical() == SubspaceTemplate(2, 2, {3, 4, 3}));
  CHECK(t.canonical().is_canonical());
}

TEST_CASE("instantiation substitutes wildcards") {
  SubspaceTemplate line(2, 1, {3, 1});
  CHECK(instantiate(line, Word(2, {1})) == Word(2, {1, 1}));
  CHECK(instantiate(line, Word(2, {2})) == Word(2, {2, 1}));
  SubspaceTemplate plane(2, 2, {3, 4, 3});
  CHECK(instantiate(plane, Word(2, {2, 1})) == Word(2, {2, 1, 2}));
  SubspaceTemplate diag(3, 1, {4, 4});
  CHECK(instantiate(diag, Word(3, {3})) == Word(3, {3, 3}));
  CHECK_THROWS_AS(instantiate(line, Word(2, {1, 1})), std::invalid_argument);
}

TEST_CASE("subspace points") {
  CHECK(subspace_points(SubspaceTemplate(2, 1, {3, 3})) ==
        WordSet::from_words(2, 2, {Word(2, {1, 1}), Word(2, {2, 2})}));
  CHECK(subspace_points(SubspaceTemplate(2, 1, {3, 1})) ==
        WordSet::from_words(2, 2, {Word(2, {1, 1}), Word(2, {2, 1})}));
  CHECK(subspace_points(SubspaceTemplate(2, 2, {3, 4})) == WordSet::full_set(2, 2));
}

TEST_CASE("points count k^d and instantiation is injective (exhaustive small)") {
  for (int k = 2; k <= 3; ++k)
    for (int n = 1; n <= 4; ++n)
      for (int d = 1; d <= n; ++d)
        for_each_subspace(n, k, d, [&](const SubspaceTemplate& t) {
          std::set<std::vector<int>> seen;
          for (Rank yr = 0; yr < universe_size(d, k); ++yr)
            seen.insert(instantiate(t, decode_rank(d, k, yr)).letters);
          CHECK(seen.size() == universe_size(d, k));
          CHECK(subspace_points(t).size() ==
                BigInt(static_cast<unsigned long>(universe_size(d, k))));
          return true;
        });
}

TEST_CASE("subspace enumeration matches the inclusion-exclusion count") {
  CHECK(subspace_count(2, 2, 1) == 5);
  CHECK(enumerate_subspaces(2, 2, 1).size() == 5);
  {
    auto lines = enumerate_subspaces(2, 2, 1);
    std::set<std::vector<int>> texts;
    for (const auto& t : lines) texts.insert(t.letters);
    std::set<std::vector<int>> expected{{1, 3}, {2, 3}, {3, 1}, {3, 2}, {3, 3}};
    CHECK(texts == expected);
  }
  CHECK(subspace_count(2, 2, 2) == 1);
  CHECK(enumerate_subspaces(2, 2, 2).at(0) == SubspaceTemplate(2, 2, {3, 4}));
  CHECK(subspace_count(3, 2, 2) == 9);
  CHECK(enumerate_subspaces(3, 2, 2).size() == 9);
}

TEST_CASE("enumeration equals raw-template dedup (oracle)") {
  for (int k = 2; k <= 3; ++k)
    for (int n = 1; n <= 5; ++n)
      for (int d = 1; d <= std::min(n, 3); ++d) {
        // oracle: enumerate all words over [k+d]^n, keep valid templates,
        // dedupe by the canonical relabeling
        std::set<std::vector<int>> canon;
        for (Rank r = 0; r < universe_size(n, k + d); ++r) {
          Word w = decode_rank(n, k + d, r);
          std::vector<bool> seen(static_cast<size_t>(d), false);
          for (int l : w.letters)
            if (l > k) seen[static_cast<size_t>(l - k - 1)] = true;
          if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) continue;
          canon.insert(SubspaceTemplate(k, d, w.letters).canonical().letters);
        }
        auto enumerated = enumerate_subspaces(n, k, d);
        CHECK(enumerated.size() == canon.size());
        CHECK(BigInt(static_cast<unsigned long>(canon.size())) == subspace_count(n, k, d));
        for (const auto& t : enumerated) {
          CHECK(t.is_canonical());
          CHECK(canon.count(t.letters) == 1);
        }
      }
}

TEST_CASE("composition of words") {
  CHECK(compose(Word(2, {1, 2, 1}), Word(3, {3, 1})) == Word(3, {3, 1, 3}));
  // the two factorizations of the all-ones word
  CHECK(compose(Word(2, {1, 2}), Word(2, {1, 1})) == Word(2, {1, 1}));
  CHECK(compose(Word(2, {2, 1}), Word(2, {1, 1})) == Word(2, {1, 1}));
  CHECK_THROWS_AS(compose(Word(3, {3, 1}), Word(2, {1, 1})), std::invalid_argument);
}

TEST_CASE("composition through a non-degenerate y is the lifted subspace") {
  for (int k = 2; k <= 3; ++k)
    for (int n = 2; n <= 4; ++n)
      for (int d = 1; d <= n; ++d) {
        int rep = std::max(d, 2);  // words over [d]^n carried on alphabet max(d,2)
        for (Rank yr = 0; yr < universe_size(n, rep); ++yr) {
          Word y = decode_rank(n, rep, yr);
          if (*std::max_element(y.letters.begin(), y.letters.end()) > d) continue;
          if (!covers_alphabet(y, d)) continue;
          SubspaceTemplate lifted = lift_composition_template(y, k, d);
          std::vector<Word> words;
          for (Rank zr = 0; zr < universe_size(d, k); ++zr)
            words.push_back(compose(y, decode_rank(d, k, zr)));
          CHECK(WordSet::from_words(n, k, words) == subspace_points(lifted));
        }
      }
}

TEST_CASE("composing with a line template gives a line") {
  Word y(2, {1, 2, 2, 1});
  SubspaceTemplate zline(2, 1, {3, 1});  // line template over [2+1]^2
  Word zword(3, zline.letters);
  Word composed = compose(y, zword);
  SubspaceTemplate result(2, 1, composed.letters);
  CHECK(subspace_points(result).size() == 2);
}

TEST_CASE("subspace views: template and coordinates") {
  Subspace s = Subspace::from_template(SubspaceTemplate(2, 2, {3, 1, 4, 3}));
  CHECK(s.free_coords == std::vector<std::vector<int>>{{1, 4}, {3}});
  CHECK(s.fixed_letters == std::vector<int>{0, 1, 0, 0});
  Subspace axis = Subspace::axis(4, 2, {2, 4}, Word(2, {2, 1}));
  CHECK(axis.tmpl == SubspaceTemplate(2, 2, {2, 3, 1, 4}));
}

TEST_CASE("truncation forbids the last letter on free coordinates") {
  Subspace line = Subspace::from_template(SubspaceTemplate(2, 1, {3, 1}));
  CHECK(truncation(line) == WordSet::from_words(2, 2, {Word(2, {1, 1})}));
  Subspace diag = Subspace::from_template(SubspaceTemplate(3, 1, {4, 4}));
  CHECK(truncation(diag) ==
        WordSet::from_words(2, 3, {Word(3, {1, 1}), Word(3, {2, 2})}));
  Subspace mixed = Subspace::from_template(SubspaceTemplate(3, 1, {4, 1}));
  CHECK(truncation(mixed) ==
        WordSet::from_words(2, 3, {Word(3, {1, 1}), Word(3, {2, 1})}));
}

TEST_CASE("pullback is the bijection image") {
  Subspace line = Subspace::from_template(SubspaceTemplate(2, 1, {3, 1}));
  CHECK(pullback(line, WordSet::full_set(2, 2)) == WordSet::full_set(1, 2));
  CHECK(pullback(line, WordSet::empty_set(2, 2)) == WordSet::empty_set(1, 2));
  WordSet A = WordSet::from_words(2, 2, {Word(2, {1, 1}), Word(2, {1, 2})});
  CHECK(pullback(line, A) == WordSet::from_words(1, 2, {Word(2, {1})}));
  // |pullback| = |A ∩ points|
  CHECK(pullback(line, A).size() == A.intersect(subspace_points(line.tmpl)).size());
}

TEST_CASE("pullback of a lifted composition recovers the z-set") {
  // non-degenerate y in [2]^3
  Word y(2, {2, 1, 2});
  SubspaceTemplate lifted = lift_composition_template(y, 2, 2);
  Subspace s = Subspace::from_template(lifted);
  for (std::uint64_t zmask = 0; zmask < 16; ++zmask) {
    std::vector<Word> zwords;
    for (Rank zr = 0; zr < 4; ++zr)
      if (zmask & (1u << zr)) zwords.push_back(decode_rank(2, 2, zr));
    std::vector<Word> xwords;
    for (const Word& z : zwords) xwords.push_back(compose(y, z));
    WordSet Z = WordSet::from_words(2, 2, zwords);
    WordSet X = WordSet::from_words(3, 2, xwords);
    CHECK(pullback(s, X) == Z);
  }
}

TEST_CASE("inner subspaces map to inner subspaces bijectively") {
  // e-dimensional subspaces of [k]^d correspond to the e-dimensional
  // subspaces inside S(x); exhaustive at k=2, d=2, n=3.
  const int k = 2, d = 2, n = 3, e = 1;
  for_each_subspace(n, k, d, [&](const SubspaceTemplate& outer) {
    WordSet outer_points = subspace_points(outer);
    std::set<std::vector<Rank>> images;
    for (const SubspaceTemplate& inner : enumerate_subspaces(d, k, e)) {
      SubspaceTemplate composed = compose_template(outer, inner);
      CHECK(composed.d == e);
      WordSet pts = subspace_points(composed);
      CHECK(pts.is_subset_of(outer_points));
      images.insert(pts.ranks());
    }
    // distinct inner subspaces give distinct images (bijective)
    CHECK(images.size() == enumerate_subspaces(d, k, e).size());
    // every e-subspace of [k]^n inside S arises this way
    std::size_t inside = 0;
    for (const SubspaceTemplate& cand : enumerate_subspaces(n, k, e))
      if (subspace_points(cand).is_subset_of(outer_points)) ++inside;
    CHECK(inside == images.size());
    return true;
  });
}

TEST_CASE("axis subspace enumeration covers C(n,m) k^{n-m} subspaces") {
  int seen = 0;
  for_each_axis_subspace(4, 2, 2, [&](const Subspace& s) {
    CHECK(s.d() == 2);
    for (const auto& fc : s.free_coords) CHECK(fc.size() == 1);
    ++seen;
  });
  CHECK(seen == 6 * 4);
}

TEST_CASE("template text form") {
  SubspaceTemplate t(2, 1, {3, 1, 3});
  CHECK(template_to_string(t) == "313");
  CHECK(template_from_string(2, 1, "313") == t);
}

TEST_CASE("line images under the positional map are arithmetic progressions") {
  for (int k = 2; k <= 3; ++k)
    for (int n = 1; n <= 4; ++n)
      for_each_subspace(n, k, 1, [&](const SubspaceTemplate& t) {
        std::vector<std::uint64_t> image;
        for (int j = 1; j <= k; ++j)
          image.push_back(szemeredi_map(instantiate(t, Word(k, {j}))));
        std::sort(image.begin(), image.end());
        for (size_t i = 2; i < image.size(); ++i)
          CHECK(image[i] - image[i - 1] == image[1] - image[0]);
        return true;
      });
}
