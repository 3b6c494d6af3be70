#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dhj/rational.hpp"

namespace dhj {

using Rank = std::uint64_t;

// Runtime cap on explicit bitset universes (largest admissible k^n).
// Initialised from DHJ_EXPLICIT_CAP when the variable is set; default 2^24.
std::uint64_t explicit_cap();
void set_explicit_cap(std::uint64_t cap);

// k^n; throws std::overflow_error when it does not fit in 64 bits.
std::uint64_t universe_size(int n, int k);

// A word over the alphabet {1..k}; the atomic point of [k]^n.
struct Word {
  int k = 0;
  std::vector<int> letters;  // 1-based

  Word() = default;
  Word(int k, std::vector<int> letters);

  int n() const { return static_cast<int>(letters.size()); }

  bool operator==(const Word& o) const { return k == o.k && letters == o.letters; }
  bool operator!=(const Word& o) const { return !(*this == o); }
};

// Letter-count vector (r_1,...,r_k); labels the orbit of a word under
// coordinate permutations. Degenerate when some letter is absent.
struct SliceVector {
  std::vector<int> counts;

  SliceVector() = default;
  explicit SliceVector(std::vector<int> counts);

  int k() const { return static_cast<int>(counts.size()); }
  int n() const;
  bool degenerate() const;

  bool operator==(const SliceVector& o) const { return counts == o.counts; }
  bool operator<(const SliceVector& o) const { return counts < o.counts; }
};

// Base-k positional rank with coordinate 1 least significant, so that
// encode_rank(x) = szemeredi_map(x) - 1 exactly.
Rank encode_rank(const Word& x);
Word decode_rank(int n, int k, Rank rank);

// f(x) = 1 + sum_i (x_i - 1) k^{i-1}; a bijection [k]^n -> [k^n] sending
// combinatorial lines to k-term arithmetic progressions.
std::uint64_t szemeredi_map(const Word& x);

SliceVector slice_of(const Word& x);

// Multinomial n!/(r_1!...r_k!): the number of words in the orbit O_r.
BigInt orbit_size(const SliceVector& r);

// All slice vectors of [k]^n, in decreasing lexicographic order.
// Count is C(n+k-1,k-1), or C(n-1,k-1) when restricted to non-degenerate.
std::vector<SliceVector> enumerate_slices(int n, int k, bool nondegenerate_only = false);
void for_each_slice(int n, int k, bool nondegenerate_only,
                    const std::function<void(const SliceVector&)>& fn);
BigInt slice_count(int n, int k, bool nondegenerate_only);

// Canonical text form: comma-free digit string for k <= 9.
std::string word_to_string(const Word& x);
Word word_from_string(int k, const std::string& text);

// Interval constraint on the occurrence count of one letter.
struct Band {
  int letter = 1;
  long lo = 0;
  long hi = 0;
};

// A subset of [k]^n. Backend is either an explicit bitset over ranks
// (requires k^n <= explicit_cap()) or a slice-symmetric predicate,
// optionally intersected with a band constraint.
class WordSet {
 public:
  static WordSet empty_set(int n, int k);
  static WordSet full_set(int n, int k);
  static WordSet from_ranks(int n, int k, const std::vector<Rank>& ranks);
  static WordSet from_words(int n, int k, const std::vector<Word>& words);
  static WordSet from_bits(int n, int k, boost::dynamic_bitset<> bits);
  static WordSet from_slices(int n, int k, const std::vector<SliceVector>& slices);
  static WordSet from_band(int n, int k, Band band);
  static WordSet from_slice_predicate(int n, int k,
                                      std::function<bool(const SliceVector&)> pred,
                                      std::optional<Band> band_desc = std::nullopt);

  int n() const { return n_; }
  int k() const { return k_; }
  bool is_explicit() const { return explicit_; }
  std::uint64_t universe() const;

  bool contains(const Word& x) const;
  bool contains_rank(Rank r) const;
  bool contains_slice(const SliceVector& r) const;  // slice backend only
  BigInt size() const;

  const boost::dynamic_bitset<>& bits() const;
  std::vector<Rank> ranks() const;  // sorted
  const std::optional<Band>& band() const { return band_; }

  // Slice backend expanded into an explicit bitset; identity on explicit sets.
  WordSet materialize() const;

  WordSet complement() const;
  WordSet intersect(const WordSet& o) const;
  WordSet unite(const WordSet& o) const;
  WordSet subtract(const WordSet& o) const;
  bool is_subset_of(const WordSet& o) const;
  bool same_universe(const WordSet& o) const { return n_ == o.n_ && k_ == o.k_; }
  bool operator==(const WordSet& o) const;

  void for_each_rank(const std::function<void(Rank)>& fn) const;
  void for_each_word(const std::function<void(const Word&)>& fn) const;

 private:
  WordSet(int n, int k) : n_(n), k_(k) {}
  void require_explicit() const;
  void require_slice() const;

  int n_ = 0;
  int k_ = 0;
  bool explicit_ = true;
  boost::dynamic_bitset<> bits_;
  std::function<bool(const SliceVector&)> pred_;
  std::optional<Band> band_;
};

}  // namespace dhj
