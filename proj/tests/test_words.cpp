#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dhj/words.hpp"

using namespace dhj;

TEST_CASE("rank encoding: coordinate 1 is least significant") {
  CHECK(encode_rank(Word(2, {1, 1})) == 0);
  CHECK(encode_rank(Word(2, {2, 1})) == 1);
  // hand evaluation: 0 + 1*3 + 2*9
  CHECK(encode_rank(Word(3, {1, 2, 3})) == 21);
  CHECK(decode_rank(3, 3, 21) == Word(3, {1, 2, 3}));
}

TEST_CASE("rank round-trip is the identity on small universes") {
  for (auto [n, k] : {std::pair{12, 2}, {7, 3}, {6, 4}}) {
    std::uint64_t size = universe_size(n, k);
    REQUIRE(size <= 4096);
    for (Rank r = 0; r < size; ++r) {
      Word x = decode_rank(n, k, r);
      CHECK(encode_rank(x) == r);
      CHECK(szemeredi_map(x) == r + 1);
    }
  }
}

TEST_CASE("word validation") {
  CHECK_THROWS_AS(Word(2, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Word(2, {3}), std::invalid_argument);
  CHECK_THROWS_AS(Word(1, {1}), std::invalid_argument);
  CHECK_THROWS_AS(decode_rank(2, 2, 4), std::out_of_range);
}

TEST_CASE("slice_of counts letters") {
  CHECK(slice_of(Word(2, {1, 2, 1})) == SliceVector({2, 1}));
  SliceVector deg = slice_of(Word(3, {1, 1}));
  CHECK(deg == SliceVector({2, 0, 0}));
  CHECK(deg.degenerate());
  SliceVector nondeg = slice_of(Word(3, {3, 1, 2}));
  CHECK(nondeg == SliceVector({1, 1, 1}));
  CHECK_FALSE(nondeg.degenerate());
}

TEST_CASE("slice_of is invariant under coordinate permutations") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + static_cast<int>(rng() % 3);
    int n = 1 + static_cast<int>(rng() % 7);
    Word x = decode_rank(n, k, rng() % universe_size(n, k));
    std::vector<int> perm = x.letters;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(slice_of(Word(k, perm)) == slice_of(x));
  }
}

TEST_CASE("orbit_size is the multinomial, cross-checked by orbit enumeration") {
  CHECK(orbit_size(SliceVector({2, 0})) == 1);
  CHECK(orbit_size(SliceVector({1, 1})) == 2);
  CHECK(orbit_size(SliceVector({2, 1, 1})) == 12);
  // oracle: count words of [3]^4 with that slice
  std::uint64_t count = 0;
  for (Rank r = 0; r < universe_size(4, 3); ++r)
    if (slice_of(decode_rank(4, 3, r)) == SliceVector({2, 1, 1})) ++count;
  CHECK(BigInt(static_cast<unsigned long>(count)) == orbit_size(SliceVector({2, 1, 1})));
}

TEST_CASE("slice enumeration counts and ordering") {
  auto all = enumerate_slices(2, 2);
  REQUIRE(all.size() == 3);
  CHECK(all[0] == SliceVector({2, 0}));
  CHECK(all[1] == SliceVector({1, 1}));
  CHECK(all[2] == SliceVector({0, 2}));
  auto nondeg = enumerate_slices(2, 2, true);
  REQUIRE(nondeg.size() == 1);
  CHECK(nondeg[0] == SliceVector({1, 1}));

  CHECK(enumerate_slices(6, 3).size() == 28);
  CHECK(enumerate_slices(6, 3, true).size() == 10);
  CHECK(slice_count(6, 3, false) == 28);
  CHECK(slice_count(6, 3, true) == 10);
}

TEST_CASE("orbit sizes add up to k^n") {
  for (int k = 2; k <= 4; ++k)
    for (int n = 1; n <= 10; ++n) {
      BigInt total = 0;
      for (const SliceVector& r : enumerate_slices(n, k)) total += orbit_size(r);
      CHECK(total == int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(n)));
    }
}

TEST_CASE("word text form") {
  CHECK(word_to_string(Word(3, {1, 3, 2})) == "132");
  CHECK(word_from_string(3, "132") == Word(3, {1, 3, 2}));
  CHECK_THROWS_AS(word_from_string(3, "140"), std::invalid_argument);
}

TEST_CASE("explicit word sets: ranks, algebra, serialization order") {
  WordSet a = WordSet::from_ranks(2, 2, {3, 0});
  CHECK(a.size() == 2);
  CHECK(a.ranks() == std::vector<Rank>{0, 3});
  CHECK(a.contains(Word(2, {1, 1})));
  CHECK_FALSE(a.contains(Word(2, {2, 1})));

  WordSet b = WordSet::from_words(2, 2, {Word(2, {2, 1})});
  CHECK(a.intersect(b).size() == 0);
  CHECK(a.unite(b).size() == 3);
  CHECK(a.complement().size() == 2);
  CHECK(b.is_subset_of(a.complement()));
}

TEST_CASE("slice-symmetric sets and bands") {
  // words of [2]^4 with exactly two ones
  WordSet band = WordSet::from_band(4, 2, Band{1, 2, 2});
  CHECK(band.size() == 6);
  WordSet mat = band.materialize();
  CHECK(mat.size() == 6);
  mat.for_each_word([&](const Word& x) {
    CHECK(slice_of(x).counts[0] == 2);
  });

  WordSet fromslices = WordSet::from_slices(4, 2, {SliceVector({2, 2})});
  CHECK(fromslices.materialize() == mat);

  WordSet pred = WordSet::from_slice_predicate(
      4, 2, [](const SliceVector& r) { return !r.degenerate(); });
  CHECK(pred.size() == 14);
}

TEST_CASE("explicit cap is enforced and adjustable") {
  std::uint64_t old = explicit_cap();
  set_explicit_cap(8);
  CHECK_THROWS_AS(WordSet::empty_set(4, 2), std::length_error);
  CHECK_THROWS_AS(WordSet::from_band(4, 2, Band{1, 0, 0}).materialize(), std::length_error);
  // slice-symmetric sets bypass the cap entirely
  CHECK(WordSet::from_band(4, 2, Band{1, 0, 0}).size() == 1);
  set_explicit_cap(old);
  CHECK(WordSet::from_band(4, 2, Band{1, 0, 0}).materialize().size() == 1);
}
