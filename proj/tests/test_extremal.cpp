#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "dhj/extremal.hpp"
#include "dhj/json_io.hpp"

using namespace dhj;

namespace {

Rat r(long num, long den = 1) { return make_rat(BigInt(num), BigInt(den)); }

WordSet random_set(std::mt19937& rng, int n, int k) {
  boost::dynamic_bitset<> bits(universe_size(n, k));
  for (std::uint64_t i = 0; i < bits.size(); ++i)
    if (rng() & 1) bits.set(i);
  return WordSet::from_bits(n, k, std::move(bits));
}

WordSet thin_to_line_free(std::mt19937& rng, WordSet A) {
  while (true) {
    WordSet M = lines_in(A);
    if (M.size() == 0) return A;
    std::vector<Rank> ts = M.ranks();
    Word t = decode_rank(A.n(), A.k() + 1, ts[rng() % ts.size()]);
    int j = 1 + static_cast<int>(rng() % static_cast<unsigned>(A.k()));
    std::vector<int> letters = t.letters;
    for (int& l : letters)
      if (l == A.k() + 1) l = j;
    boost::dynamic_bitset<> bits = A.bits();
    bits.reset(encode_rank(Word(A.k(), letters)));
    A = WordSet::from_bits(A.n(), A.k(), std::move(bits));
  }
}

}  // namespace

TEST_CASE("lines_in on explicit sets") {
  CHECK(lines_in(WordSet::full_set(2, 2)).size() == 5);  // 3^2 - 2^2 templates
  WordSet antidiag = WordSet::from_words(2, 2, {Word(2, {1, 2}), Word(2, {2, 1})});
  CHECK(lines_in(antidiag).size() == 0);
  WordSet diag = WordSet::from_words(2, 2, {Word(2, {1, 1}), Word(2, {2, 2})});
  WordSet M = lines_in(diag);
  CHECK(M.size() == 1);
  CHECK(M.contains(Word(3, {3, 3})));
}

TEST_CASE("lines_in on slice-symmetric sets equals the explicit path") {
  std::mt19937 rng(5);
  for (int n = 1; n <= 12; ++n) {
    // random set of counts as a slice predicate over [2]^n
    std::vector<char> allowed(static_cast<size_t>(n + 1));
    for (auto& c : allowed) c = rng() & 1;
    WordSet sym = WordSet::from_slice_predicate(n, 2, [allowed](const SliceVector& s) {
      return allowed[static_cast<size_t>(s.counts[0])] != 0;
    });
    WordSet sym_lines = lines_in(sym);
    WordSet explicit_lines = lines_in(sym.materialize());
    CHECK(sym_lines.materialize() == explicit_lines);
  }
  // same for a k=3 band
  WordSet band = WordSet::from_band(4, 3, Band{2, 1, 2});
  CHECK(lines_in(band).materialize() == lines_in(band.materialize()));
}

TEST_CASE("maximum line-free sizes at tiny parameters") {
  ExtremalResult r22 = max_line_free(2, 2);
  CHECK(r22.best_size == 2);
  CHECK(r22.optimal);
  CHECK(max_line_free(3, 2).best_size == 3);
  CHECK(max_line_free(4, 2).best_size == 6);
  CHECK(max_line_free(1, 3).best_size == 2);
  CHECK(max_line_free(2, 3).best_size == 6);
}

TEST_CASE("search equals the brute-force maximum (oracle, k^n <= 16)") {
  for (auto [n, k] : {std::pair{2, 2}, {3, 2}, {4, 2}, {1, 3}}) {
    std::uint64_t size = universe_size(n, k);
    std::uint64_t best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << size); ++mask) {
      std::vector<Rank> ranks;
      for (Rank b = 0; b < size; ++b)
        if (mask & (std::uint64_t(1) << b)) ranks.push_back(b);
      WordSet A = WordSet::from_ranks(n, k, ranks);
      if (lines_in(A).size() == 0) best = std::max<std::uint64_t>(best, ranks.size());
    }
    ExtremalResult res = max_line_free(n, k);
    CHECK(res.optimal);
    CHECK(res.best_size == best);
  }
}

TEST_CASE("search soundness: never below a constructed line-free set") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    int k = 2 + static_cast<int>(rng() % 2);
    int n = 1 + static_cast<int>(rng() % (k == 2 ? 4 : 2));
    WordSet A = thin_to_line_free(rng, random_set(rng, n, k));
    ExtremalResult res = max_line_free(n, k);
    CHECK(res.best_size >= A.size().get_ui());
  }
}

TEST_CASE("budget exhaustion reports a non-optimal incumbent") {
  ExtremalResult res = max_line_free(4, 2, 10);
  CHECK_FALSE(res.optimal);
  CHECK(lines_in(res.witness).size() == 0);
}

TEST_CASE("lym sums") {
  LymResult a = lym_sum({0b01, 0b10}, 2);
  CHECK(a.sum == 1);
  CHECK(a.antichain);
  LymResult b = lym_sum({0}, 2);
  CHECK(b.sum == 1);
  CHECK(b.antichain);
  LymResult c = lym_sum({0, 0b01}, 2);
  CHECK(c.sum == r(3, 2));
  CHECK_FALSE(c.antichain);
}

TEST_CASE("antichains satisfy the lym bound (fuzz)") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(rng() % 8);
    std::vector<std::uint32_t> family;
    for (int i = 0; i < 10; ++i)
      family.push_back(static_cast<std::uint32_t>(rng()) & ((1u << n) - 1));
    LymResult res = lym_sum(family, n);
    if (res.antichain) CHECK(res.sum <= 1);
  }
}

TEST_CASE("subspace_in_set") {
  auto found = subspace_in_set(WordSet::full_set(2, 2), 2);
  REQUIRE(found.has_value());
  CHECK(*found == SubspaceTemplate(2, 2, {3, 4}));
  WordSet antidiag = WordSet::from_words(2, 2, {Word(2, {1, 2}), Word(2, {2, 1})});
  CHECK_FALSE(subspace_in_set(antidiag, 1).has_value());
  WordSet grid = WordSet::from_words(
      2, 3, {Word(3, {1, 1}), Word(3, {3, 1}), Word(3, {1, 3}), Word(3, {3, 3})});
  CHECK_FALSE(subspace_in_set(grid, 1).has_value());
}

TEST_CASE("increment search maximizes relative density") {
  auto [s_full, v_full] = increment_search(WordSet::full_set(2, 2), 1);
  CHECK(v_full == 1);
  auto [s_empty, v_empty] = increment_search(WordSet::empty_set(2, 2), 1);
  CHECK(v_empty == 0);
  WordSet A = WordSet::from_words(2, 2, {Word(2, {1, 2}), Word(2, {2, 1}), Word(2, {2, 2})});
  auto [s, v] = increment_search(A, 1);
  CHECK(v == 1);
  CHECK(s.tmpl == SubspaceTemplate(2, 1, {2, 3}));  // first maximizer in canonical order
}

TEST_CASE("increment search equals an independent exhaustive maximum") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    int k = 2 + static_cast<int>(rng() % 2);
    int n = 1 + static_cast<int>(rng() % 3);
    int d = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    WordSet A = random_set(rng, n, k);
    auto [s, v] = increment_search(A, d);
    Rat best(0);
    Density uni = make_density(DensityKind::uniform, d, k);
    for (const SubspaceTemplate& t : enumerate_subspaces(n, k, d)) {
      Rat val = measure(uni, pullback(Subspace::from_template(t), A));
      if (val > best) best = val;
    }
    CHECK(v == best);
    CHECK(measure(uni, pullback(s, A)) == v);
  }
}

TEST_CASE("dual-path subspace averages agree") {
  AverageCheck full = subspace_average_check(WordSet::full_set(3, 2), 1);
  CHECK(full.direct_full == 1);
  CHECK(full.direct_truncated == 1);
  CHECK(full.equal());
  AverageCheck empty = subspace_average_check(WordSet::empty_set(3, 2), 1);
  CHECK(empty.direct_full == 0);
  CHECK(empty.equal());
  // spec's dual-path instance: k=2, n=3, m=1, A = {x : x_1 = 1}
  boost::dynamic_bitset<> bits(8);
  for (Rank rk = 0; rk < 8; ++rk)
    if (decode_rank(3, 2, rk).letters[0] == 1) bits.set(rk);
  AverageCheck half = subspace_average_check(WordSet::from_bits(3, 2, bits), 1);
  CHECK(half.equal());
  CHECK(half.mu == r(1, 2));
}

TEST_CASE("dual-path averages agree on random sets") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    int k = 2 + static_cast<int>(rng() % 2);
    int n = 2 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(n, 3)));
    AverageCheck chk = subspace_average_check(random_set(rng, n, k), m);
    CHECK(chk.equal());
  }
}

TEST_CASE("first-step classification") {
  CHECK_THROWS_AS(first_step_classify(WordSet::full_set(2, 2), 1, r(1, 2), r(1, 2)),
                  std::invalid_argument);  // eta > delta/4
  FirstStepReport full = first_step_classify(WordSet::full_set(2, 3), 1, r(1, 2), r(1, 8));
  CHECK(full.alt1 == full.total);
  FirstStepReport empty = first_step_classify(WordSet::empty_set(2, 3), 1, r(1, 2), r(1, 8));
  CHECK(empty.neither == empty.total);

  // spec instance: k=3, n=3, m=1, A = {x : x_1 != 3}, delta = 2/3, eta = 1/6
  boost::dynamic_bitset<> bits(27);
  for (Rank rk = 0; rk < 27; ++rk)
    if (decode_rank(3, 3, rk).letters[0] != 3) bits.set(rk);
  WordSet A = WordSet::from_bits(3, 3, bits);
  Rat delta = r(2, 3), eta = r(1, 6);
  FirstStepReport rep = first_step_classify(A, 1, delta, eta);
  CHECK(rep.total == 27);  // C(3,1) * 3^2 axis subspaces
  CHECK(rep.total == rep.alt1 + rep.alt2 + rep.neither);
  // independent recount
  std::uint64_t alt1 = 0, alt2 = 0, neither = 0;
  for_each_axis_subspace(3, 3, 1, [&](const Subspace& s) {
    Rat fullv = restrict_equal_slices(A, s, false);
    if (fullv >= delta + eta)
      ++alt1;
    else if (fullv >= delta - Rat(4) * eta / delta &&
             restrict_equal_slices(A, s, true) >= delta / 4)
      ++alt2;
    else
      ++neither;
  });
  CHECK(rep.alt1 == alt1);
  CHECK(rep.alt2 == alt2);
  CHECK(rep.neither == neither);
}

TEST_CASE("third-step search") {
  WordSet D = WordSet::full_set(2, 2);
  ThirdStepResult same = third_step_search(D, D, 1, r(1, 2));
  CHECK(same.slack == r(1, 2));  // (1 - delta2) * max mu_V(D) with mu_V(D) = 1
  WordSet empty = WordSet::empty_set(2, 2);
  ThirdStepResult none = third_step_search(empty, D, 1, r(1, 2));
  CHECK(none.slack <= 0);
  CHECK_THROWS_AS(third_step_search(D, empty, 1, r(1, 2)), std::invalid_argument);

  // spec instance: k=2, n=3, D = {x1=1}, A2 = {x in D : x2=1}, r=1, delta2=1/2
  boost::dynamic_bitset<> dbits(8), abits(8);
  for (Rank rk = 0; rk < 8; ++rk) {
    Word x = decode_rank(3, 2, rk);
    if (x.letters[0] == 1) {
      dbits.set(rk);
      if (x.letters[1] == 1) abits.set(rk);
    }
  }
  WordSet Dx = WordSet::from_bits(3, 2, dbits);
  WordSet A2 = WordSet::from_bits(3, 2, abits);
  ThirdStepResult res = third_step_search(A2, Dx, 1, r(1, 2));
  // independent exhaustive maximum
  Rat best;
  bool first = true;
  for_each_axis_subspace(3, 2, 1, [&](const Subspace& s) {
    WordSet pts = subspace_points(s.tmpl);
    Rat a2 = Rat(A2.intersect(pts).size()) / 2;
    Rat dd = Rat(Dx.intersect(pts).size()) / 2;
    Rat slack = a2 - r(1, 2) * dd;
    if (first || slack > best) best = slack;
    first = false;
  });
  CHECK(res.slack == best);
}

TEST_CASE("partition: full cube at k=2 decomposes into lines exactly") {
  WordSet D = WordSet::full_set(2, 2);
  PartitionCertificate cert =
      partition_insensitive(D, {{D, {1}}}, 1, 1, r(1, 4));
  CHECK(validate_certificate(cert));
  CHECK(cert.residual.size() == 0);
  CHECK(cert.eps_met);
  CHECK(cert.blocks.size() == 2);
}

TEST_CASE("partition: line-free insensitive set is all residual") {
  WordSet D = closure(WordSet::from_words(2, 3, {Word(3, {1, 1})}), {1});
  REQUIRE(lines_in(D).size() == 0);
  PartitionCertificate cert = partition_insensitive(D, {{D, {1}}}, 1, 1, r(1, 4));
  CHECK(validate_certificate(cert));
  CHECK(cert.residual == D);
  CHECK(cert.blocks.empty());
  CHECK_FALSE(cert.eps_met);
  CHECK(cert.residual_density == r(4, 9));
}

TEST_CASE("partition: empty set gives an empty certificate") {
  WordSet D = WordSet::empty_set(2, 2);
  PartitionCertificate cert = partition_insensitive(D, {{D, {1}}}, 1, 1, r(1, 4));
  CHECK(validate_certificate(cert));
  CHECK(cert.blocks.empty());
  CHECK(cert.residual.size() == 0);
  CHECK(cert.eps_met);
}

TEST_CASE("partition rejects invalid witnesses") {
  WordSet D = WordSet::from_words(2, 3, {Word(3, {1, 1})});  // not insensitive
  CHECK_THROWS_AS(partition_insensitive(D, {{D, {1}}}, 1, 1, r(1, 4)), std::invalid_argument);
  WordSet full = WordSet::full_set(2, 3);
  CHECK_THROWS_AS(partition_insensitive(full, {{full, {2}}, {full, {1}}}, 1, 1, r(1, 4)),
                  std::invalid_argument);  // letters not increasing
  CHECK_THROWS_AS(partition_insensitive(D, {{full, {1}}}, 1, 1, r(1, 4)),
                  std::invalid_argument);  // intersection mismatch
}

TEST_CASE("partition certificates validate under fuzz; corrupted blocks rejected") {
  std::mt19937 rng(47);
  int rejected = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int k = 2 + static_cast<int>(rng() % 2);
    int n = 1 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    int d = 1 + static_cast<int>(rng() % static_cast<unsigned>(m));
    std::vector<std::pair<WordSet, InsensitiveWitness>> parts;
    WordSet D = WordSet::full_set(n, k);
    int nparts = k == 2 ? 1 : 1 + static_cast<int>(rng() % 2);
    for (int h = 0; h < nparts; ++h) {
      int letter = nparts == 1 ? 1 + static_cast<int>(rng() % static_cast<unsigned>(k - 1)) : h + 1;
      WordSet part = closure(random_set(rng, n, k), {letter});
      D = D.intersect(part);
      parts.emplace_back(std::move(part), InsensitiveWitness{letter});
    }
    PartitionCertificate cert = partition_insensitive(D, parts, d, m, r(1, 4));
    CHECK(validate_certificate(cert));
    // blocks are genuine subspaces of the right dimension inside D
    for (const SubspaceTemplate& b : cert.blocks) {
      CHECK(b.d == d);
      CHECK(subspace_points(b).is_subset_of(D));
    }
    if (!cert.blocks.empty()) {
      PartitionCertificate bad = cert;
      std::vector<int> letters = bad.blocks[0].letters;
      bool changed = false;
      for (int& l : letters)
        if (l <= k) {
          l = l % k + 1;
          changed = true;
        }
      if (changed) {
        bad.blocks[0] = SubspaceTemplate(k, d, letters);
        CHECK_FALSE(validate_certificate(bad));
        ++rejected;
      }
    }
  }
  CHECK(rejected > 10);  // the corruption path was actually exercised
}

TEST_CASE("partition certificate JSON round-trip re-validates") {
  WordSet D = WordSet::full_set(2, 2);
  PartitionCertificate cert = partition_insensitive(D, {{D, {1}}}, 1, 1, r(1, 4));
  Json j = certificate_to_json(cert);
  PartitionCertificate back = certificate_from_json(j);
  CHECK(validate_certificate(back));
  CHECK(back.blocks.size() == cert.blocks.size());
}

TEST_CASE("line density report on explicit sets") {
  LineDensityReport full = line_density_report(WordSet::full_set(2, 2));
  CHECK(full.mu_A == 1);
  CHECK(full.mu_M == r(5, 9));
  LineDensityReport none = line_density_report(WordSet::empty_set(2, 2));
  CHECK(none.mu_M == 0);
  CHECK(none.nu_M == 0);
}

TEST_CASE("line density report on a large band, slice-level") {
  // k=2, n=64, hold the count of ones within 8 of the centre
  WordSet A = WordSet::from_band(64, 2, Band{1, 24, 40});
  LineDensityReport rep = line_density_report(A);
  // mu(A) from the binomial tail complement
  CHECK(rep.mu_A == Rat(1) - balanced_tail(64, 2, 1, 8));
  CHECK(rep.mu_M > 0);
  CHECK(rep.mu_M < 1);
}

TEST_CASE("a custom truncated-subspace finder is honoured") {
  // a finder that never finds anything leaves everything in the residual
  WordSet D = WordSet::full_set(2, 2);
  TruncatedSubspaceFinder refuse = [](const std::vector<bool>&, int, int, int) {
    return std::optional<SubspaceTemplate>{};
  };
  PartitionCertificate cert = partition_insensitive(D, {{D, {1}}}, 1, 1, r(1, 4), 1024, refuse);
  CHECK(validate_certificate(cert));
  CHECK(cert.blocks.empty());
  CHECK(cert.residual == D);
  // the default finder decomposes the same input completely
  PartitionCertificate full = partition_insensitive(D, {{D, {1}}}, 1, 1, r(1, 4));
  CHECK(full.residual.size() == 0);
}
