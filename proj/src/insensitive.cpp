#include "dhj/insensitive.hpp"

#include <deque>
#include <stdexcept>

namespace dhj {

namespace {

void check_witness(int k, InsensitiveWitness w) {
  if (w.i < 1 || w.i >= k) throw std::invalid_argument("witness letter must lie in [1, k-1]");
}

// Word obtained from x by replacing every occurrence of `from` with `to`.
Word replace_all(const Word& x, int from, int to) {
  std::vector<int> letters = x.letters;
  for (int& l : letters)
    if (l == from) l = to;
  return Word(x.k, std::move(letters));
}

}  // namespace

bool is_insensitive(const WordSet& A, InsensitiveWitness w) {
  check_witness(A.k(), w);
  const int i = w.i, k = A.k();
  bool ok = true;
  // Single-position swaps generate all i<->k exchanges.
  A.for_each_word([&](const Word& x) {
    if (!ok) return;
    for (int pos = 0; pos < x.n() && ok; ++pos) {
      int l = x.letters[static_cast<size_t>(pos)];
      if (l != i && l != k) continue;
      Word y = x;
      y.letters[static_cast<size_t>(pos)] = l == i ? k : i;
      if (!A.contains(y)) ok = false;
    }
  });
  return ok;
}

WordSet closure(const WordSet& A, InsensitiveWitness w) {
  check_witness(A.k(), w);
  const int i = w.i, k = A.k();
  boost::dynamic_bitset<> bits = A.bits();
  std::deque<Rank> queue;
  for (Rank r = bits.find_first(); r != boost::dynamic_bitset<>::npos; r = bits.find_next(r))
    queue.push_back(r);
  while (!queue.empty()) {
    Word x = decode_rank(A.n(), A.k(), queue.front());
    queue.pop_front();
    for (int pos = 0; pos < x.n(); ++pos) {
      int l = x.letters[static_cast<size_t>(pos)];
      if (l != i && l != k) continue;
      Word y = x;
      y.letters[static_cast<size_t>(pos)] = l == i ? k : i;
      Rank yr = encode_rank(y);
      if (!bits.test(yr)) {
        bits.set(yr);
        queue.push_back(yr);
      }
    }
  }
  return WordSet::from_bits(A.n(), A.k(), std::move(bits));
}

bool is_k_set(const WordSet& D, const std::vector<std::pair<WordSet, InsensitiveWitness>>& parts) {
  if (static_cast<int>(parts.size()) != D.k() - 1)
    throw std::invalid_argument("a k-set needs exactly k-1 parts");
  WordSet inter = WordSet::full_set(D.n(), D.k());
  for (int h = 0; h < static_cast<int>(parts.size()); ++h) {
    const auto& [set, w] = parts[static_cast<size_t>(h)];
    if (w.i != h + 1) throw std::invalid_argument("part h must carry witness letter h");
    if (!set.same_universe(D)) throw std::invalid_argument("universe mismatch");
    if (!is_insensitive(set, w)) return false;
    inter = inter.intersect(set);
  }
  return inter == D;
}

bool insensitive_in_subspace(const WordSet& Dsub, const Subspace& s, InsensitiveWitness w) {
  if (!Dsub.is_subset_of(subspace_points(s.tmpl)))
    throw std::invalid_argument("set is not contained in the subspace");
  return is_insensitive(pullback(s, Dsub), w);
}

HeartOutcome heart_step(const WordSet& A1) {
  const int k = A1.k();
  const int m = A1.n();
  if (m < 1) throw std::invalid_argument("heart step needs m >= 1");
  Density nu = make_density(DensityKind::equal_slices, m, k);

  HeartOutcome out;
  out.C = WordSet::full_set(m, k);
  for (int j = 1; j <= k - 1; ++j) {
    boost::dynamic_bitset<> bits(A1.universe());
    for (Rank r = 0; r < A1.universe(); ++r) {
      Word x = decode_rank(m, k, r);
      if (A1.contains(replace_all(x, k, j))) bits.set(r);
    }
    WordSet Cj = WordSet::from_bits(m, k, std::move(bits));
    out.C = out.C.intersect(Cj);
    out.C_list.push_back(std::move(Cj));
  }

  // D^(j) = C_1 ∩ ... ∩ C_{j-1} ∩ complement(C_j); D^(k) = C.
  WordSet prefix = WordSet::full_set(m, k);
  for (int j = 1; j <= k; ++j) {
    if (j <= k - 1) {
      out.parts.push_back(prefix.intersect(out.C_list[static_cast<size_t>(j - 1)].complement()));
      prefix = prefix.intersect(out.C_list[static_cast<size_t>(j - 1)]);
    } else {
      out.parts.push_back(prefix);
    }
  }

  Rat nuA1 = measure(nu, A1);
  out.chosen_j = 1;
  Rat best_slack;
  for (int j = 1; j <= k - 1; ++j) {
    const WordSet& Dj = out.parts[static_cast<size_t>(j - 1)];
    Rat slack = measure(nu, A1.intersect(Dj)) - nuA1 * measure(nu, Dj);
    if (j == 1 || slack > best_slack) {
      best_slack = slack;
      out.chosen_j = j;
    }
  }
  out.D = out.parts[static_cast<size_t>(out.chosen_j - 1)];

  // k-set witness: D_i = C_i below j, the complement of C_j at j, full above.
  for (int i = 1; i <= k - 1; ++i) {
    WordSet part = i < out.chosen_j   ? out.C_list[static_cast<size_t>(i - 1)]
                   : i == out.chosen_j ? out.C_list[static_cast<size_t>(i - 1)].complement()
                                       : WordSet::full_set(m, k);
    out.witness.emplace_back(std::move(part), InsensitiveWitness{i});
  }

  WordSet A1capC = A1.intersect(out.C);
  WordSet with_last = WordSet::from_bits(m, k, [&] {
    boost::dynamic_bitset<> bits(A1.universe());
    for (Rank r = 0; r < A1.universe(); ++r) {
      Word x = decode_rank(m, k, r);
      for (int l : x.letters)
        if (l == k) {
          bits.set(r);
          break;
        }
    }
    return bits;
  }());

  out.ledger.nu_A1 = nuA1;
  out.ledger.nu_A1_cap_C = measure(nu, A1capC);
  out.ledger.nu_C_with_last_letter = measure(nu, out.C.intersect(with_last));
  out.ledger.nu_A1_cap_D = measure(nu, A1.intersect(out.D));
  out.ledger.nu_D = measure(nu, out.D);
  out.ledger.slack = best_slack;

  // Any word of A1 ∩ C containing k yields the line {x(1),...,x(k-1),x} in A1.
  A1capC.intersect(with_last).for_each_word([&](const Word& x) {
    std::vector<int> letters = x.letters;
    for (int& l : letters)
      if (l == k) l = k + 1;
    out.violations.push_back({x, SubspaceTemplate(k, 1, std::move(letters))});
  });
  return out;
}

}  // namespace dhj
