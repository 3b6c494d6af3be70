#include "dhj/words.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace dhj {

namespace {

std::uint64_t initial_cap() {
  if (const char* env = std::getenv("DHJ_EXPLICIT_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return std::uint64_t(1) << 24;
}

std::atomic<std::uint64_t> g_cap{initial_cap()};

void check_universe(int n, int k) {
  if (n < 0) throw std::invalid_argument("negative word length");
  if (k < 2) throw std::invalid_argument("alphabet size must be at least 2");
}

}  // namespace

std::uint64_t explicit_cap() { return g_cap.load(); }

void set_explicit_cap(std::uint64_t cap) {
  if (cap == 0) throw std::invalid_argument("explicit cap must be positive");
  g_cap.store(cap);
}

std::uint64_t universe_size(int n, int k) {
  check_universe(n, k);
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) {
    if (size > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(k))
      throw std::overflow_error("k^n exceeds 64 bits");
    size *= static_cast<std::uint64_t>(k);
  }
  return size;
}

Word::Word(int k, std::vector<int> letters_in) : k(k), letters(std::move(letters_in)) {
  if (k < 2) throw std::invalid_argument("alphabet size must be at least 2");
  for (int l : letters)
    if (l < 1 || l > k) throw std::invalid_argument("letter out of range");
}

SliceVector::SliceVector(std::vector<int> counts_in) : counts(std::move(counts_in)) {
  if (counts.size() < 2) throw std::invalid_argument("slice needs k >= 2 counts");
  for (int c : counts)
    if (c < 0) throw std::invalid_argument("negative slice count");
}

int SliceVector::n() const {
  int total = 0;
  for (int c : counts) total += c;
  return total;
}

bool SliceVector::degenerate() const {
  return std::any_of(counts.begin(), counts.end(), [](int c) { return c == 0; });
}

Rank encode_rank(const Word& x) {
  std::uint64_t base = static_cast<std::uint64_t>(x.k);
  Rank rank = 0;
  std::uint64_t place = 1;
  for (int i = 0; i < x.n(); ++i) {
    rank += static_cast<std::uint64_t>(x.letters[i] - 1) * place;
    if (i + 1 < x.n()) {
      if (place > std::numeric_limits<std::uint64_t>::max() / base)
        throw std::overflow_error("rank exceeds 64 bits");
      place *= base;
    }
  }
  return rank;
}

Word decode_rank(int n, int k, Rank rank) {
  check_universe(n, k);
  std::vector<int> letters(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    letters[static_cast<size_t>(i)] = static_cast<int>(rank % static_cast<Rank>(k)) + 1;
    rank /= static_cast<Rank>(k);
  }
  if (rank != 0) throw std::out_of_range("rank outside [k]^n");
  return Word(k, std::move(letters));
}

std::uint64_t szemeredi_map(const Word& x) { return encode_rank(x) + 1; }

SliceVector slice_of(const Word& x) {
  std::vector<int> counts(static_cast<size_t>(x.k), 0);
  for (int l : x.letters) ++counts[static_cast<size_t>(l - 1)];
  return SliceVector(std::move(counts));
}

BigInt orbit_size(const SliceVector& r) { return multinomial(r.counts); }

void for_each_slice(int n, int k, bool nondegenerate_only,
                    const std::function<void(const SliceVector&)>& fn) {
  check_universe(n, k);
  std::vector<int> counts(static_cast<size_t>(k), 0);
  // Decreasing lexicographic order: r_1 runs from n down to 0, then r_2, ...
  const int floor_count = nondegenerate_only ? 1 : 0;
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == k - 1) {
      if (remaining < floor_count) return;
      counts[static_cast<size_t>(pos)] = remaining;
      fn(SliceVector(counts));
      return;
    }
    for (int c = remaining - floor_count * (k - 1 - pos); c >= floor_count; --c) {
      counts[static_cast<size_t>(pos)] = c;
      rec(pos + 1, remaining - c);
    }
  };
  if (n >= floor_count * k) rec(0, n);
}

std::vector<SliceVector> enumerate_slices(int n, int k, bool nondegenerate_only) {
  std::vector<SliceVector> out;
  for_each_slice(n, k, nondegenerate_only,
                 [&](const SliceVector& r) { out.push_back(r); });
  return out;
}

BigInt slice_count(int n, int k, bool nondegenerate_only) {
  if (nondegenerate_only)
    return binomial(static_cast<unsigned long>(n - 1), static_cast<unsigned long>(k - 1));
  return binomial(static_cast<unsigned long>(n + k - 1), static_cast<unsigned long>(k - 1));
}

std::string word_to_string(const Word& x) {
  if (x.k > 9) {
    std::string out = "[";
    for (int i = 0; i < x.n(); ++i) {
      if (i) out += ",";
      out += std::to_string(x.letters[static_cast<size_t>(i)]);
    }
    return out + "]";
  }
  std::string out;
  out.reserve(x.letters.size());
  for (int l : x.letters) out += static_cast<char>('0' + l);
  return out;
}

Word word_from_string(int k, const std::string& text) {
  if (k > 9) throw std::invalid_argument("digit-string form needs k <= 9");
  std::vector<int> letters;
  letters.reserve(text.size());
  for (char c : text) {
    if (c < '1' || c > '9') throw std::invalid_argument("bad word digit");
    letters.push_back(c - '0');
  }
  return Word(k, std::move(letters));
}

// ---------------------------------------------------------------------------
// WordSet

WordSet WordSet::empty_set(int n, int k) {
  std::uint64_t size = universe_size(n, k);
  if (size > explicit_cap()) throw std::length_error("k^n exceeds the explicit-set cap");
  WordSet s(n, k);
  s.bits_.resize(size);
  return s;
}

WordSet WordSet::full_set(int n, int k) {
  WordSet s = empty_set(n, k);
  s.bits_.set();
  return s;
}

WordSet WordSet::from_ranks(int n, int k, const std::vector<Rank>& ranks) {
  WordSet s = empty_set(n, k);
  for (Rank r : ranks) {
    if (r >= s.bits_.size()) throw std::out_of_range("rank outside [k]^n");
    s.bits_.set(r);
  }
  return s;
}

WordSet WordSet::from_words(int n, int k, const std::vector<Word>& words) {
  WordSet s = empty_set(n, k);
  for (const Word& w : words) {
    if (w.k != k || w.n() != n) throw std::invalid_argument("word universe mismatch");
    s.bits_.set(encode_rank(w));
  }
  return s;
}

WordSet WordSet::from_bits(int n, int k, boost::dynamic_bitset<> bits) {
  if (bits.size() != universe_size(n, k))
    throw std::invalid_argument("bitset size is not k^n");
  WordSet s(n, k);
  s.bits_ = std::move(bits);
  return s;
}

WordSet WordSet::from_slices(int n, int k, const std::vector<SliceVector>& slices) {
  check_universe(n, k);
  auto sorted = slices;
  for (const SliceVector& r : sorted)
    if (r.k() != k || r.n() != n) throw std::invalid_argument("slice universe mismatch");
  std::sort(sorted.begin(), sorted.end());
  WordSet s(n, k);
  s.explicit_ = false;
  s.pred_ = [sorted](const SliceVector& r) {
    return std::binary_search(sorted.begin(), sorted.end(), r);
  };
  return s;
}

WordSet WordSet::from_band(int n, int k, Band band) {
  check_universe(n, k);
  if (band.letter < 1 || band.letter > k) throw std::invalid_argument("band letter out of range");
  WordSet s(n, k);
  s.explicit_ = false;
  s.band_ = band;
  int idx = band.letter - 1;
  s.pred_ = [band, idx](const SliceVector& r) {
    int c = r.counts[static_cast<size_t>(idx)];
    return band.lo <= c && c <= band.hi;
  };
  return s;
}

WordSet WordSet::from_slice_predicate(int n, int k,
                                      std::function<bool(const SliceVector&)> pred,
                                      std::optional<Band> band_desc) {
  check_universe(n, k);
  WordSet s(n, k);
  s.explicit_ = false;
  s.pred_ = std::move(pred);
  s.band_ = band_desc;
  return s;
}

std::uint64_t WordSet::universe() const { return universe_size(n_, k_); }

void WordSet::require_explicit() const {
  if (!explicit_) throw std::logic_error("operation requires an explicit word set");
}

void WordSet::require_slice() const {
  if (explicit_) throw std::logic_error("operation requires a slice-symmetric word set");
}

bool WordSet::contains(const Word& x) const {
  if (x.k != k_ || x.n() != n_) throw std::invalid_argument("word universe mismatch");
  if (explicit_) return bits_.test(encode_rank(x));
  return pred_(slice_of(x));
}

bool WordSet::contains_rank(Rank r) const {
  if (explicit_) {
    if (r >= bits_.size()) throw std::out_of_range("rank outside [k]^n");
    return bits_.test(r);
  }
  return pred_(slice_of(decode_rank(n_, k_, r)));
}

bool WordSet::contains_slice(const SliceVector& r) const {
  require_slice();
  if (r.k() != k_ || r.n() != n_) throw std::invalid_argument("slice universe mismatch");
  return pred_(r);
}

BigInt WordSet::size() const {
  if (explicit_) return BigInt(static_cast<unsigned long>(bits_.count()));
  BigInt total = 0;
  for_each_slice(n_, k_, false, [&](const SliceVector& r) {
    if (pred_(r)) total += orbit_size(r);
  });
  return total;
}

const boost::dynamic_bitset<>& WordSet::bits() const {
  require_explicit();
  return bits_;
}

std::vector<Rank> WordSet::ranks() const {
  require_explicit();
  std::vector<Rank> out;
  out.reserve(bits_.count());
  for (Rank r = bits_.find_first(); r != boost::dynamic_bitset<>::npos; r = bits_.find_next(r))
    out.push_back(r);
  return out;
}

WordSet WordSet::materialize() const {
  if (explicit_) return *this;
  std::uint64_t size = universe();
  if (size > explicit_cap()) throw std::length_error("k^n exceeds the explicit-set cap");
  WordSet s = empty_set(n_, k_);
  for (Rank r = 0; r < size; ++r)
    if (pred_(slice_of(decode_rank(n_, k_, r)))) s.bits_.set(r);
  return s;
}

WordSet WordSet::complement() const {
  require_explicit();
  WordSet s(n_, k_);
  s.bits_ = ~bits_;
  return s;
}

WordSet WordSet::intersect(const WordSet& o) const {
  require_explicit();
  o.require_explicit();
  if (!same_universe(o)) throw std::invalid_argument("universe mismatch");
  WordSet s(n_, k_);
  s.bits_ = bits_ & o.bits_;
  return s;
}

WordSet WordSet::unite(const WordSet& o) const {
  require_explicit();
  o.require_explicit();
  if (!same_universe(o)) throw std::invalid_argument("universe mismatch");
  WordSet s(n_, k_);
  s.bits_ = bits_ | o.bits_;
  return s;
}

WordSet WordSet::subtract(const WordSet& o) const {
  require_explicit();
  o.require_explicit();
  if (!same_universe(o)) throw std::invalid_argument("universe mismatch");
  WordSet s(n_, k_);
  s.bits_ = bits_ - o.bits_;
  return s;
}

bool WordSet::is_subset_of(const WordSet& o) const {
  require_explicit();
  o.require_explicit();
  if (!same_universe(o)) throw std::invalid_argument("universe mismatch");
  return bits_.is_subset_of(o.bits_);
}

bool WordSet::operator==(const WordSet& o) const {
  require_explicit();
  o.require_explicit();
  return same_universe(o) && bits_ == o.bits_;
}

void WordSet::for_each_rank(const std::function<void(Rank)>& fn) const {
  require_explicit();
  for (Rank r = bits_.find_first(); r != boost::dynamic_bitset<>::npos; r = bits_.find_next(r))
    fn(r);
}

void WordSet::for_each_word(const std::function<void(const Word&)>& fn) const {
  for_each_rank([&](Rank r) { fn(decode_rank(n_, k_, r)); });
}

}  // namespace dhj
