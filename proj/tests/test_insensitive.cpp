#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dhj/extremal.hpp"
#include "dhj/insensitive.hpp"

using namespace dhj;

namespace {

Rat r(long num, long den = 1) { return make_rat(BigInt(num), BigInt(den)); }

WordSet random_set(std::mt19937& rng, int n, int k) {
  boost::dynamic_bitset<> bits(universe_size(n, k));
  for (std::uint64_t i = 0; i < bits.size(); ++i)
    if (rng() & 1) bits.set(i);
  return WordSet::from_bits(n, k, std::move(bits));
}

}  // namespace

TEST_CASE("insensitivity: closure under single swaps") {
  WordSet grid = WordSet::from_words(
      2, 3, {Word(3, {1, 1}), Word(3, {3, 1}), Word(3, {1, 3}), Word(3, {3, 3})});
  CHECK(is_insensitive(grid, {1}));
  CHECK(is_insensitive(WordSet::full_set(2, 3), {1}));
  CHECK(is_insensitive(WordSet::full_set(2, 3), {2}));
  CHECK_FALSE(is_insensitive(WordSet::from_words(2, 3, {Word(3, {1, 1})}), {1}));
  CHECK_THROWS_AS(is_insensitive(grid, InsensitiveWitness{3}), std::invalid_argument);
}

TEST_CASE("closure: orbit of swaps, idempotent, no-op without touched letters") {
  WordSet seed = WordSet::from_words(2, 3, {Word(3, {1, 1})});
  WordSet closed = closure(seed, {1});
  CHECK(closed == WordSet::from_words(2, 3, {Word(3, {1, 1}), Word(3, {3, 1}), Word(3, {1, 3}),
                                             Word(3, {3, 3})}));
  CHECK(closure(closed, {1}) == closed);
  WordSet two = WordSet::from_words(2, 3, {Word(3, {2, 2})});
  CHECK(closure(two, {1}) == two);
}

TEST_CASE("closure is minimal and monotone (fuzz)") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    int k = 2 + static_cast<int>(rng() % 2);
    int n = 1 + static_cast<int>(rng() % 3);
    int i = 1 + static_cast<int>(rng() % static_cast<unsigned>(k - 1));
    WordSet A = random_set(rng, n, k);
    WordSet closed = closure(A, {i});
    CHECK(A.is_subset_of(closed));
    CHECK(is_insensitive(closed, {i}));
    // minimality: dropping any added word breaks insensitivity
    WordSet added = closed.subtract(A);
    added.for_each_rank([&](Rank rk) {
      boost::dynamic_bitset<> bits = closed.bits();
      bits.reset(rk);
      CHECK_FALSE(is_insensitive(WordSet::from_bits(n, k, std::move(bits)), {i}));
    });
    // monotone: closing a subset stays inside
    WordSet sub = A.intersect(random_set(rng, n, k));
    CHECK(closure(sub, {i}).is_subset_of(closed));
  }
}

TEST_CASE("k-set validation") {
  int n = 2, k = 3;
  WordSet D1 = closure(WordSet::from_words(n, k, {Word(3, {1, 1})}), {1});
  WordSet D2 = closure(WordSet::from_words(n, k, {Word(3, {1, 1}), Word(3, {2, 1})}), {2});
  WordSet D = D1.intersect(D2);
  CHECK(is_k_set(D, {{D1, {1}}, {D2, {2}}}));
  CHECK_FALSE(is_k_set(D1, {{D1, {1}}, {D2, {2}}}));  // intersection mismatch
  CHECK(is_k_set(WordSet::full_set(n, k),
                 {{WordSet::full_set(n, k), {1}}, {WordSet::full_set(n, k), {2}}}));
  CHECK_THROWS_AS(is_k_set(D, {{D1, {1}}}), std::invalid_argument);  // wrong arity
  CHECK_THROWS_AS(is_k_set(D, {{D2, {2}}, {D1, {1}}}), std::invalid_argument);  // wrong letters
}

TEST_CASE("insensitivity relative to a subspace") {
  Subspace s = Subspace::from_template(SubspaceTemplate(3, 1, {4, 2}));
  CHECK(insensitive_in_subspace(subspace_points(s.tmpl), s, {1}));
  CHECK(insensitive_in_subspace(WordSet::empty_set(2, 3), s, {1}));
  WordSet single = WordSet::from_words(2, 3, {Word(3, {1, 2})});
  CHECK_FALSE(insensitive_in_subspace(single, s, {1}));
  CHECK_THROWS_AS(insensitive_in_subspace(WordSet::from_words(2, 3, {Word(3, {1, 1})}), s, {1}),
                  std::invalid_argument);  // not inside the subspace
}

TEST_CASE("heart step at k=3, m=1: no letter-3 word survives in A1 ∩ C") {
  WordSet A1 = WordSet::from_words(1, 3, {Word(3, {1}), Word(3, {2})});
  HeartOutcome h = heart_step(A1);
  CHECK(h.C_list[0] == WordSet::full_set(1, 3));
  CHECK(h.C_list[1] == WordSet::full_set(1, 3));
  CHECK(h.C == WordSet::full_set(1, 3));
  CHECK(h.violations.empty());
  CHECK(h.ledger.nu_A1 == r(2, 3));
  CHECK(h.ledger.nu_A1_cap_C == r(2, 3));
}

TEST_CASE("heart step on the empty set") {
  HeartOutcome h = heart_step(WordSet::empty_set(2, 3));
  for (const WordSet& c : h.C_list) CHECK(c.size() == 0);
  CHECK(h.parts[0] == WordSet::full_set(2, 3));  // D^(1) = complement of C_1
  CHECK(h.ledger.nu_A1 == 0);
  CHECK(h.ledger.slack == 0);
  CHECK(h.chosen_j == 1);
}

TEST_CASE("heart step on the truncated cube input") {
  // A1 = [k-1]^m has no word with letter k; line-free at m=1
  WordSet A1 = WordSet::from_band(2, 3, Band{3, 0, 0}).materialize();
  HeartOutcome h = heart_step(A1);
  CHECK(h.violations.empty() == (lines_in(A1).size() == 0));
  boost::dynamic_bitset<> cover(universe_size(2, 3));
  for (const WordSet& p : h.parts) {
    CHECK((cover & p.bits()).none());
    cover |= p.bits();
  }
  CHECK(cover.count() == universe_size(2, 3));
}

TEST_CASE("heart step: violations carry explicit lines inside A1") {
  WordSet A1 = WordSet::full_set(2, 3);  // plenty of lines
  HeartOutcome h = heart_step(A1);
  CHECK_FALSE(h.violations.empty());
  for (const auto& v : h.violations) {
    CHECK(A1.contains(v.x));
    CHECK(subspace_points(v.line).is_subset_of(A1));
    bool has_k = false;
    for (int l : v.x.letters) has_k = has_k || l == 3;
    CHECK(has_k);
  }
}

TEST_CASE("heart step: partition, k-set witness, pigeonhole (exhaustive [3]^2)") {
  const int m = 2, k = 3;
  Density nu = make_density(DensityKind::equal_slices, m, k);
  std::uint64_t size = universe_size(m, k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << size); mask += 7) {
    std::vector<Rank> ranks;
    for (Rank b = 0; b < size; ++b)
      if (mask & (std::uint64_t(1) << b)) ranks.push_back(b);
    WordSet A1 = WordSet::from_ranks(m, k, ranks);
    HeartOutcome h = heart_step(A1);

    boost::dynamic_bitset<> cover(size);
    for (const WordSet& p : h.parts) {
      CHECK((cover & p.bits()).none());
      cover |= p.bits();
    }
    CHECK(cover.count() == size);
    CHECK(h.parts.back() == h.C);
    CHECK(is_k_set(h.D, h.witness));

    // pigeonhole: the chosen slack is at least the average over j < k
    WordSet rest = WordSet::empty_set(m, k);
    for (int j = 1; j <= k - 1; ++j) rest = rest.unite(h.parts[static_cast<size_t>(j - 1)]);
    Rat lhs = h.ledger.slack * Rat(k - 1);
    Rat rhs = measure(nu, A1.intersect(rest)) - h.ledger.nu_A1 * measure(nu, rest);
    CHECK(lhs >= rhs);

    // line-free inputs leave no letter-k word in A1 ∩ C
    if (lines_in(A1).size() == 0) CHECK(h.violations.empty());
  }
}
