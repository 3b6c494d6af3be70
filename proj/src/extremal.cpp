#include "dhj/extremal.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "dhj/enumeration.hpp"

namespace dhj {

namespace {

std::vector<std::uint64_t> rank_places(int n, int k) {
  std::vector<std::uint64_t> places(static_cast<size_t>(n));
  std::uint64_t p = 1;
  for (int i = 0; i < n; ++i) {
    places[static_cast<size_t>(i)] = p;
    if (i + 1 < n) p *= static_cast<std::uint64_t>(k);
  }
  return places;
}

std::uint64_t pow_u64(int base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<std::uint64_t>(base);
  return out;
}

}  // namespace

WordSet lines_in(const WordSet& A) {
  const int n = A.n(), k = A.k();
  if (!A.is_explicit()) {
    // L(x) ⊆ A depends only on the slice of the template: substituting j for
    // the wildcards moves the wildcard count onto letter j.
    WordSet copy = A;
    return WordSet::from_slice_predicate(n, k + 1, [copy, k](const SliceVector& rho) {
      int w = rho.counts[static_cast<size_t>(k)];
      if (w < 1) return false;
      for (int j = 0; j < k; ++j) {
        std::vector<int> counts(rho.counts.begin(), rho.counts.end() - 1);
        counts[static_cast<size_t>(j)] += w;
        if (!copy.contains_slice(SliceVector(std::move(counts)))) return false;
      }
      return true;
    });
  }
  std::uint64_t tsize = universe_size(n, k + 1);
  if (tsize > explicit_cap()) throw std::length_error("(k+1)^n exceeds the explicit-set cap");
  boost::dynamic_bitset<> bits(tsize);
  auto kplaces = rank_places(n, k);
  for (Odometer t(n, k + 1, rank_places(n, k + 1)); t.valid(); t.advance()) {
    if (t.counts()[static_cast<size_t>(k)] == 0) continue;  // no wildcard
    std::uint64_t base = 0, wild = 0;
    for (int i = 0; i < n; ++i) {
      int l = t.digits()[static_cast<size_t>(i)];
      if (l <= k)
        base += static_cast<std::uint64_t>(l - 1) * kplaces[static_cast<size_t>(i)];
      else
        wild += kplaces[static_cast<size_t>(i)];
    }
    bool inside = true;
    for (int j = 1; j <= k && inside; ++j)
      inside = A.contains_rank(base + static_cast<std::uint64_t>(j - 1) * wild);
    if (inside) bits.set(t.rank());
  }
  return WordSet::from_bits(n, k + 1, std::move(bits));
}

// ---------------------------------------------------------------------------
// Maximum line-free search

namespace {

struct LineFreeSearch {
  int total_words;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool exhausted = false;
  std::vector<std::vector<std::uint64_t>> through;  // line masks through each word
  std::vector<char> root_ok;                        // least rank in its coordinate orbit
  std::uint64_t chosen = 0;
  int chosen_count = 0;
  std::uint64_t best = 0;
  int best_count = 0;

  void rec(int idx, bool root) {
    if (exhausted) return;
    ++nodes;
    if (nodes > budget) {
      exhausted = true;
      return;
    }
    if (chosen_count > best_count) {
      best_count = chosen_count;
      best = chosen;
    }
    if (idx == total_words) return;
    if (chosen_count + (total_words - idx) <= best_count) return;
    std::uint64_t bit = std::uint64_t(1) << idx;
    if (!root || root_ok[static_cast<size_t>(idx)]) {
      std::uint64_t with = chosen | bit;
      bool ok = true;
      for (std::uint64_t line : through[static_cast<size_t>(idx)])
        if ((line & ~with) == 0) {
          ok = false;
          break;
        }
      if (ok) {
        chosen = with;
        ++chosen_count;
        rec(idx + 1, false);
        chosen = with & ~bit;
        --chosen_count;
      }
    }
    rec(idx + 1, root);
  }
};

}  // namespace

ExtremalResult max_line_free(int n, int k, std::uint64_t node_budget) {
  std::uint64_t size = universe_size(n, k);
  if (size > 64) throw std::length_error("line-free search supports k^n <= 64");
  const int N = static_cast<int>(size);

  LineFreeSearch search;
  search.total_words = N;
  search.budget = node_budget;
  search.through.assign(static_cast<size_t>(N), {});
  for_each_subspace(n, k, 1, [&](const SubspaceTemplate& t) {
    std::uint64_t mask = 0;
    for (int j = 1; j <= k; ++j)
      mask |= std::uint64_t(1) << encode_rank(instantiate(t, Word(k, {j})));
    for (int w = 0; w < N; ++w)
      if (mask & (std::uint64_t(1) << w)) search.through[static_cast<size_t>(w)].push_back(mask);
    return true;
  });

  search.root_ok.assign(static_cast<size_t>(N), 1);
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  do {
    for (int w = 0; w < N; ++w) {
      Word x = decode_rank(n, k, static_cast<Rank>(w));
      std::vector<int> permuted(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i)
        permuted[static_cast<size_t>(perm[static_cast<size_t>(i)])] = x.letters[static_cast<size_t>(i)];
      if (encode_rank(Word(k, std::move(permuted))) < static_cast<Rank>(w))
        search.root_ok[static_cast<size_t>(w)] = 0;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  search.rec(0, true);

  ExtremalResult out;
  out.n = n;
  out.k = k;
  out.best_size = static_cast<std::uint64_t>(search.best_count);
  out.optimal = !search.exhausted;
  out.nodes_explored = search.nodes;
  std::vector<Rank> ranks;
  for (int w = 0; w < N; ++w)
    if (search.best & (std::uint64_t(1) << w)) ranks.push_back(static_cast<Rank>(w));
  out.witness = WordSet::from_ranks(n, k, ranks);
  if (lines_in(out.witness).size() != 0)
    throw std::logic_error("search produced a witness containing a line");
  return out;
}

LymResult lym_sum(const std::vector<std::uint32_t>& family, int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("lym_sum supports n <= 20");
  std::vector<std::uint32_t> sets = family;
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::uint32_t all = n == 32 ? ~0u : ((1u << n) - 1);
  LymResult out{Rat(0), true};
  for (std::uint32_t x : sets) {
    if (x & ~all) throw std::invalid_argument("subset outside [n]");
    int sz = __builtin_popcount(x);
    out.sum += make_rat(1, binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(sz)));
  }
  for (size_t a = 0; a < sets.size() && out.antichain; ++a)
    for (size_t b = 0; b < sets.size(); ++b) {
      if (a == b) continue;
      if ((sets[a] & sets[b]) == sets[a]) {  // sets[a] ⊆ sets[b]
        out.antichain = false;
        break;
      }
    }
  return out;
}

std::optional<SubspaceTemplate> subspace_in_set(const WordSet& A, int d) {
  const int n = A.n(), k = A.k();
  std::optional<SubspaceTemplate> found;
  std::uint64_t points = universe_size(d, k);
  for_each_subspace(n, k, d, [&](const SubspaceTemplate& t) {
    for (std::uint64_t yr = 0; yr < points; ++yr)
      if (!A.contains(instantiate(t, decode_rank(d, k, yr)))) return true;  // keep looking
    found = t;
    return false;
  });
  return found;
}

std::pair<Subspace, Rat> increment_search(const WordSet& A, int d) {
  const int n = A.n(), k = A.k();
  std::uint64_t points = universe_size(d, k);
  BigInt denom = BigInt(static_cast<unsigned long>(points));
  std::optional<SubspaceTemplate> best;
  std::uint64_t best_count = 0;
  bool first = true;
  for_each_subspace(n, k, d, [&](const SubspaceTemplate& t) {
    std::uint64_t count = 0;
    for (std::uint64_t yr = 0; yr < points; ++yr)
      if (A.contains(instantiate(t, decode_rank(d, k, yr)))) ++count;
    if (first || count > best_count) {
      best = t;
      best_count = count;
      first = false;
    }
    return true;
  });
  if (!best) throw std::invalid_argument("no subspace of this dimension exists");
  return {Subspace::from_template(*best),
          make_rat(BigInt(static_cast<unsigned long>(best_count)), denom)};
}

AverageCheck subspace_average_check(const WordSet& A, int m) {
  const int n = A.n(), k = A.k();
  if (m < 1 || m > n) throw std::invalid_argument("dimension out of range");
  AverageCheck out;
  Rat sum_full(0), sum_trunc(0);
  std::uint64_t subspaces = 0;
  for_each_axis_subspace(n, k, m, [&](const Subspace& s) {
    sum_full += restrict_equal_slices(A, s, false);
    sum_trunc += restrict_equal_slices(A, s, true);
    ++subspaces;
  });
  Rat denom(BigInt(static_cast<unsigned long>(subspaces)));
  out.direct_full = sum_full / denom;
  out.direct_truncated = sum_trunc / denom;

  Density minor_full = make_density(DensityKind::equal_slices, m, k);
  out.composed_full = measure(compose_injection_density(n, k, m, minor_full), A);

  // Truncated minor: equal-slices on [k-1]^m, extended by zero on words
  // containing letter k.
  auto slices = enumerate_slices(m, k);
  std::vector<Rat> weights(slices.size(), Rat(0));
  BigInt c = binomial(static_cast<unsigned long>(m + k - 2), static_cast<unsigned long>(k - 2));
  for (size_t i = 0; i < slices.size(); ++i) {
    if (slices[i].counts[static_cast<size_t>(k - 1)] != 0) continue;
    std::vector<int> trimmed(slices[i].counts.begin(), slices[i].counts.end() - 1);
    weights[i] = make_rat(1, c * multinomial(trimmed));
  }
  Density minor_trunc = Density::slice_table(m, k, std::move(weights));
  out.composed_truncated = measure(compose_injection_density(n, k, m, minor_trunc), A);

  out.mu = measure(make_density(DensityKind::uniform, n, k), A);
  return out;
}

FirstStepReport first_step_classify(const WordSet& A, int m, const Rat& delta, const Rat& eta) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  if (!(eta > 0) || eta > delta / 4) throw std::invalid_argument("need 0 < eta <= delta/4");
  Rat alt1_cut = delta + eta;
  Rat alt2_cut = delta - Rat(4) * eta / delta;
  Rat trunc_cut = delta / 4;
  FirstStepReport out;
  for_each_axis_subspace(A.n(), A.k(), m, [&](const Subspace& s) {
    ++out.total;
    Rat full = restrict_equal_slices(A, s, false);
    if (full >= alt1_cut) {
      ++out.alt1;
      if (!out.alt1_witness) out.alt1_witness = s;
      return;
    }
    if (full >= alt2_cut && restrict_equal_slices(A, s, true) >= trunc_cut) {
      ++out.alt2;
      if (!out.alt2_witness) out.alt2_witness = s;
      return;
    }
    ++out.neither;
    if (!out.neither_witness) out.neither_witness = s;
  });
  return out;
}

ThirdStepResult third_step_search(const WordSet& A2, const WordSet& D, int r, const Rat& delta2) {
  if (!A2.is_subset_of(D)) throw std::invalid_argument("A2 must be contained in D");
  const int n = A2.n(), k = A2.k();
  Rat denom(int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(r)));
  std::optional<ThirdStepResult> best;
  for_each_axis_subspace(n, k, r, [&](const Subspace& s) {
    std::uint64_t inA2 = 0, inD = 0;
    std::uint64_t points = universe_size(r, k);
    for (std::uint64_t yr = 0; yr < points; ++yr) {
      Word p = instantiate(s.tmpl, decode_rank(r, k, yr));
      if (D.contains(p)) {
        ++inD;
        if (A2.contains(p)) ++inA2;
      }
    }
    Rat muA2 = Rat(BigInt(static_cast<unsigned long>(inA2))) / denom;
    Rat muD = Rat(BigInt(static_cast<unsigned long>(inD))) / denom;
    Rat slack = muA2 - delta2 * muD;
    if (!best || slack > best->slack) best = ThirdStepResult{s, slack, muA2, muD};
  });
  if (!best) throw std::invalid_argument("no axis subspace of this dimension");
  return *best;
}

// ---------------------------------------------------------------------------
// Partition of insensitive sets and k-sets

std::optional<SubspaceTemplate> exhaustive_truncated_finder(const std::vector<bool>& section,
                                                            int m, int k, int d) {
  if (d > m) return std::nullopt;
  if (k == 2) {
    // [k-1]^m is a single word; any wildcard placement covers it.
    if (!section[0]) return std::nullopt;
    std::vector<int> letters(static_cast<size_t>(m), 1);
    for (int i = 0; i < d; ++i) letters[static_cast<size_t>(i)] = k + 1 + i;
    return SubspaceTemplate(k, d, std::move(letters));
  }
  std::optional<SubspaceTemplate> found;
  std::uint64_t points = universe_size(d, k - 1);
  for_each_subspace(m, k - 1, d, [&](const SubspaceTemplate& t) {
    for (std::uint64_t yr = 0; yr < points; ++yr)
      if (!section[encode_rank(instantiate(t, decode_rank(d, k - 1, yr)))]) return true;
    std::vector<int> lifted = t.letters;
    for (int& l : lifted)
      if (l > k - 1) ++l;  // wildcards shift by one to make room for letter k
    found = SubspaceTemplate(k, d, std::move(lifted));
    return false;
  });
  return found;
}

namespace {

struct RoundState {
  boost::dynamic_bitset<> remaining;  // current D_r
  std::vector<int> used;              // J_1 ∪ ... ∪ J_r (1-based positions)
};

// One removal round on a 1k-insensitive (witness i) set; returns false when
// no progress is possible.
bool partition_round(RoundState& st, int n, int k, int d, int m,
                     std::vector<SubspaceTemplate>& blocks, PartitionRound& log,
                     const Rat& eps, const TruncatedSubspaceFinder& finder) {
  std::vector<int> free_pos;
  for (int p = 1; p <= n; ++p)
    if (std::find(st.used.begin(), st.used.end(), p) == st.used.end()) free_pos.push_back(p);
  if (static_cast<int>(free_pos.size()) < m) return false;

  auto places = rank_places(n, k);
  std::vector<std::uint64_t> used_places;
  for (int p : st.used) used_places.push_back(places[static_cast<size_t>(p - 1)]);

  struct Candidate {
    std::vector<int> J;
    SubspaceTemplate U;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // (x,z) rank parts
  };
  std::optional<Candidate> best;

  for_each_combination(static_cast<int>(free_pos.size()), m, [&](const std::vector<int>& pick) {
    std::vector<int> J;
    for (int idx : pick) J.push_back(free_pos[static_cast<size_t>(idx - 1)]);
    std::vector<std::uint64_t> jplaces, zplaces;
    for (int p : free_pos) {
      std::uint64_t pl = places[static_cast<size_t>(p - 1)];
      if (std::find(J.begin(), J.end(), p) != J.end())
        jplaces.push_back(pl);
      else
        zplaces.push_back(pl);
    }

    // Collect candidate shapes U from the truncated sections, then keep the
    // one covering the most (x, z) pairs; ties fall to canonical order.
    std::map<std::vector<int>, std::uint64_t> tally;
    int zlen = static_cast<int>(zplaces.size());
    int xlen = static_cast<int>(used_places.size());
    for (Odometer x(xlen, k, used_places); x.valid(); x.advance()) {
      for (Odometer z(zlen, k, zplaces); z.valid(); z.advance()) {
        std::vector<bool> section(static_cast<size_t>(pow_u64(k - 1, m)), false);
        bool any = false;
        std::vector<std::uint64_t> trunc_places(static_cast<size_t>(m));
        std::uint64_t tp = 1;
        for (int i = 0; i < m; ++i) {
          trunc_places[static_cast<size_t>(i)] = tp;
          tp *= static_cast<std::uint64_t>(k - 1);
        }
        for (Odometer y(m, k - 1, trunc_places); y.valid(); y.advance()) {
          std::uint64_t full = x.rank() + z.rank();
          for (int i = 0; i < m; ++i)
            full += static_cast<std::uint64_t>(y.digits()[static_cast<size_t>(i)] - 1) *
                    jplaces[static_cast<size_t>(i)];
          if (st.remaining.test(full)) {
            section[y.rank()] = true;
            any = true;
          }
        }
        if (!any) continue;
        if (auto u = finder(section, m, k, d)) tally[u->letters] += 1;
      }
    }

    for (const auto& [letters, seen] : tally) {
      (void)seen;
      SubspaceTemplate U(k, d, letters);
      // Exact T: all (x, z) whose full U-fibre lies in D_r.
      std::uint64_t ufixed = 0;
      std::vector<std::uint64_t> uwild(static_cast<size_t>(d), 0);
      for (int i = 0; i < m; ++i) {
        int l = U.letters[static_cast<size_t>(i)];
        if (l <= k)
          ufixed += static_cast<std::uint64_t>(l - 1) * jplaces[static_cast<size_t>(i)];
        else
          uwild[static_cast<size_t>(l - k - 1)] += jplaces[static_cast<size_t>(i)];
      }
      std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
      for (Odometer x(xlen, k, used_places); x.valid(); x.advance()) {
        for (Odometer z(zlen, k, zplaces); z.valid(); z.advance()) {
          bool all_in = true;
          for (Odometer y(d, k, uwild); y.valid() && all_in; y.advance())
            all_in = st.remaining.test(x.rank() + z.rank() + ufixed + y.rank());
          if (all_in) pairs.emplace_back(x.rank(), z.rank() + ufixed);
        }
      }
      if (pairs.empty()) continue;
      if (!best || pairs.size() > best->pairs.size())
        best = Candidate{J, U, std::move(pairs)};
    }
  });

  if (!best) return false;

  // Remove T x U and emit one block per pair.
  std::vector<std::uint64_t> uwild(static_cast<size_t>(d), 0);
  {
    std::vector<std::uint64_t> jplaces;
    for (int p : best->J) jplaces.push_back(places[static_cast<size_t>(p - 1)]);
    for (int i = 0; i < m; ++i) {
      int l = best->U.letters[static_cast<size_t>(i)];
      if (l > k) uwild[static_cast<size_t>(l - k - 1)] += jplaces[static_cast<size_t>(i)];
    }
  }
  for (const auto& [xrank, zrank] : best->pairs) {
    for (Odometer y(d, k, uwild); y.valid(); y.advance())
      st.remaining.reset(xrank + zrank + y.rank());
    // Template: decode the base word and place U's wildcards on J.
    Word basew = decode_rank(n, k, xrank + zrank);
    std::vector<int> letters = basew.letters;
    for (int i = 0; i < m; ++i) {
      int l = best->U.letters[static_cast<size_t>(i)];
      if (l > k) letters[static_cast<size_t>(best->J[static_cast<size_t>(i)] - 1)] = l;
    }
    blocks.push_back(SubspaceTemplate(k, d, std::move(letters)).canonical());
  }

  st.used.insert(st.used.end(), best->J.begin(), best->J.end());
  std::sort(st.used.begin(), st.used.end());

  log.free_coords_used = best->J;
  log.block_shape = best->U;
  log.sections_removed = best->pairs.size();
  log.removed_mass =
      make_rat(BigInt(static_cast<unsigned long>(best->pairs.size())) *
                   int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(d)),
               int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(n)));
  // Corrected per-round mass bound eps / (3 (k+d)^m k^{m-d}): the density of
  // T x U carries the extra factor from U's density inside [k]^J.
  log.round_bound = eps / Rat(BigInt(3) *
                              int_pow(static_cast<unsigned long>(k + d), static_cast<unsigned long>(m)) *
                              int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(m - d)));
  log.met_bound = log.removed_mass >= log.round_bound;
  return true;
}

PartitionCertificate partition_rounds(const WordSet& D, int /*witness_i*/, int d, int m,
                                      const Rat& eps, std::uint64_t& round_budget,
                                      const TruncatedSubspaceFinder& finder) {
  const int n = D.n(), k = D.k();
  PartitionCertificate cert;
  cert.target = D;
  cert.requested_eps = eps;

  RoundState st;
  st.remaining = D.bits();

  Rat full_mass(int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(n)));
  auto density_left = [&]() -> Rat {
    return Rat(BigInt(static_cast<unsigned long>(st.remaining.count()))) / full_mass;
  };

  while (round_budget > 0 && density_left() >= eps) {
    PartitionRound log;
    if (!partition_round(st, n, k, d, m, cert.blocks, log, eps, finder)) break;
    --round_budget;
    ++cert.rounds;
    cert.round_log.push_back(std::move(log));
  }

  cert.residual = WordSet::from_bits(n, k, st.remaining);
  cert.residual_density = density_left();
  cert.eps_met = cert.residual_density < eps;
  return cert;
}

}  // namespace

PartitionCertificate partition_insensitive(
    const WordSet& D, const std::vector<std::pair<WordSet, InsensitiveWitness>>& parts, int d,
    int m, const Rat& eps, std::uint64_t round_budget, const TruncatedSubspaceFinder& finder_in) {
  const TruncatedSubspaceFinder finder =
      finder_in ? finder_in : TruncatedSubspaceFinder(exhaustive_truncated_finder);
  const int n = D.n(), k = D.k();
  if (parts.empty() || static_cast<int>(parts.size()) > k - 1)
    throw std::invalid_argument("a k-set witness needs between 1 and k-1 parts");
  if (d < 1 || d > m || m > n) throw std::invalid_argument("need 1 <= d <= m <= n");
  for (size_t h = 0; h < parts.size(); ++h) {
    if (h > 0 && parts[h].second.i <= parts[h - 1].second.i)
      throw std::invalid_argument("witness letters must be strictly increasing");
    if (!parts[h].first.same_universe(D)) throw std::invalid_argument("universe mismatch");
    if (!is_insensitive(parts[h].first, parts[h].second))
      throw std::invalid_argument("part is not insensitive with its stated letter");
  }
  {
    WordSet inter = WordSet::full_set(n, k);
    for (const auto& [set, w] : parts) {
      (void)w;
      inter = inter.intersect(set);
    }
    if (!(inter == D)) throw std::invalid_argument("parts do not intersect to the target set");
  }

  if (parts.size() == 1)
    return partition_rounds(D, parts[0].second.i, d, m, eps, round_budget, finder);

  // Peel the last part into m-dimensional blocks, then recurse inside each
  // block on the pulled-back remaining parts.
  Rat half_eps = eps / 2;
  PartitionCertificate outer =
      partition_rounds(parts.back().first, parts.back().second.i, m, m, half_eps, round_budget, finder);

  PartitionCertificate cert;
  cert.target = D;
  cert.requested_eps = eps;
  cert.rounds = outer.rounds;
  cert.round_log = outer.round_log;

  boost::dynamic_bitset<> residual_bits(universe_size(n, k));

  WordSet head = WordSet::full_set(n, k);
  for (size_t h = 0; h + 1 < parts.size(); ++h) head = head.intersect(parts[h].first);

  for (const SubspaceTemplate& block : outer.blocks) {
    Subspace sub = Subspace::from_template(block);
    std::vector<std::pair<WordSet, InsensitiveWitness>> inner_parts;
    WordSet innerD = WordSet::full_set(m, k);
    for (size_t h = 0; h + 1 < parts.size(); ++h) {
      WordSet pulled = pullback(sub, parts[h].first);
      innerD = innerD.intersect(pulled);
      inner_parts.emplace_back(std::move(pulled), parts[h].second);
    }
    PartitionCertificate inner =
        partition_insensitive(innerD, inner_parts, d, m, half_eps, round_budget, finder);
    for (const SubspaceTemplate& b : inner.blocks)
      cert.blocks.push_back(compose_template(block, b));
    inner.residual.for_each_word([&](const Word& y) {
      residual_bits.set(encode_rank(instantiate(block, y)));
    });
    cert.rounds += inner.rounds;
    for (auto& l : inner.round_log) cert.round_log.push_back(l);
  }

  WordSet outer_left = outer.residual.intersect(head);
  outer_left.for_each_rank([&](Rank r) { residual_bits.set(r); });

  cert.residual = WordSet::from_bits(n, k, std::move(residual_bits));
  cert.residual_density = Rat(cert.residual.size()) /
                          Rat(int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(n)));
  cert.eps_met = cert.residual_density < eps;
  return cert;
}

bool validate_certificate(const PartitionCertificate& cert) {
  const int n = cert.target.n(), k = cert.target.k();
  boost::dynamic_bitset<> covered = cert.residual.bits();
  if (!cert.residual.is_subset_of(cert.target)) return false;
  for (const SubspaceTemplate& t : cert.blocks) {
    if (t.n() != n || t.k != k) return false;
    WordSet points = subspace_points(t);
    if (!points.is_subset_of(cert.target)) return false;
    if ((points.bits() & covered).any()) return false;  // overlap
    covered |= points.bits();
  }
  return covered == cert.target.bits();
}

LineDensityReport line_density_report(const WordSet& A) {
  const int n = A.n(), k = A.k();
  LineDensityReport out;
  out.mu_A = measure(make_density(DensityKind::uniform, n, k), A);
  out.nu_A = measure(make_density(DensityKind::equal_slices, n, k), A);
  out.nu_tilde_A = n >= k ? measure(make_density(DensityKind::nondeg_equal_slices, n, k), A)
                          : Rat(0);
  WordSet M = lines_in(A);
  out.mu_M = measure(make_density(DensityKind::uniform, n, k + 1), M);
  out.nu_M = measure(make_density(DensityKind::equal_slices, n, k + 1), M);
  return out;
}

}  // namespace dhj
