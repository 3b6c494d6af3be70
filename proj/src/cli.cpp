#include "dhj/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "dhj/extremal.hpp"
#include "dhj/insensitive.hpp"
#include "dhj/json_io.hpp"
#include "dhj/measures.hpp"
#include "dhj/subspaces.hpp"
#include "dhj/words.hpp"

namespace dhj {

namespace {

struct Invocation {
  std::string command;
  Json parameters = Json::object();
  Json results = Json::object();
  bool ok = true;        // verification outcome; exit 1 when false
  bool format_csv = false;
  bool approx = false;
};

// "full" | "empty" | "ranks:[...]" | "words:112,121" | "band:letter=1,lo=2,hi=5" | "@file"
WordSet parse_set(const std::string& spec, int n, int k) {
  if (spec == "full") return WordSet::full_set(n, k);
  if (spec == "empty") return WordSet::empty_set(n, k);
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw CLI::ValidationError("--set", "cannot open " + spec.substr(1));
    Json j = Json::parse(in);
    WordSet s = wordset_from_json(j);
    if (s.n() != n || s.k() != k) throw CLI::ValidationError("--set", "universe mismatch in file");
    return s;
  }
  if (spec.rfind("ranks:", 0) == 0) {
    Json j = Json::parse(spec.substr(6));
    return WordSet::from_ranks(n, k, j.get<std::vector<Rank>>());
  }
  if (spec.rfind("words:", 0) == 0) {
    std::vector<Word> words;
    std::stringstream ss(spec.substr(6));
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) words.push_back(word_from_string(k, tok));
    return WordSet::from_words(n, k, words);
  }
  if (spec.rfind("slices:", 0) == 0) {
    Json j = Json::parse(spec.substr(7));
    std::vector<SliceVector> slices;
    for (const Json& entry : j) slices.push_back(SliceVector(entry.get<std::vector<int>>()));
    return WordSet::from_slices(n, k, slices);
  }
  if (spec.rfind("band:", 0) == 0) {
    Band b;
    std::stringstream ss(spec.substr(5));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--set", "bad band field " + tok);
      std::string key = tok.substr(0, eq);
      long value = std::stol(tok.substr(eq + 1));
      if (key == "letter")
        b.letter = static_cast<int>(value);
      else if (key == "lo")
        b.lo = value;
      else if (key == "hi")
        b.hi = value;
      else
        throw CLI::ValidationError("--set", "bad band field " + key);
    }
    return WordSet::from_band(n, k, b);
  }
  throw CLI::ValidationError("--set", "unrecognized set spec: " + spec);
}

Rat parse_rat(const std::string& text) {
  try {
    return rat_from_string(text);
  } catch (const std::exception& e) {
    throw CLI::ValidationError("rational", e.what());
  }
}

void add_approx(Json& node) {
  if (node.is_object()) {
    Json extra = Json::object();
    for (auto& [key, value] : node.items()) {
      if (value.is_string()) {
        try {
          extra[key + "_approx"] = rat_to_double(rat_from_string(value.get<std::string>()));
        } catch (...) {
        }
      } else {
        add_approx(value);
      }
    }
    for (auto& [key, value] : extra.items()) node[key] = value;
  } else if (node.is_array()) {
    for (auto& item : node) add_approx(item);
  }
}

void flatten_csv(const Json& node, const std::string& prefix, std::ostream& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items())
      flatten_csv(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (node.is_primitive()) {
    out << prefix << "," << (node.is_string() ? node.get<std::string>() : node.dump()) << "\n";
  } else {
    out << prefix << "," << "\"" << node.dump() << "\"" << "\n";
  }
}

void emit(Invocation& inv, std::ostream& out, long long elapsed_ms) {
  if (inv.approx) add_approx(inv.results);
  if (inv.format_csv) {
    out << "key,value\n";
    out << "command," << inv.command << "\n";
    flatten_csv(inv.parameters, "parameters", out);
    flatten_csv(inv.results, "results", out);
    out << "exact,true\n";
    out << "elapsed_ms," << elapsed_ms << "\n";
    return;
  }
  Json report;
  report["command"] = inv.command;
  report["parameters"] = inv.parameters;
  report["results"] = inv.results;
  report["exact"] = true;
  report["elapsed_ms"] = elapsed_ms;
  out << report.dump(2) << "\n";
}

// Uniformly random explicit subset from a seeded generator.
WordSet random_subset(std::mt19937_64& rng, int n, int k) {
  std::uint64_t size = universe_size(n, k);
  boost::dynamic_bitset<> bits(size);
  for (std::uint64_t r = 0; r < size; ++r)
    if (rng() & 1) bits.set(r);
  return WordSet::from_bits(n, k, std::move(bits));
}

// Random line-free subset: thin out a random subset until no line remains.
WordSet random_line_free(std::mt19937_64& rng, int n, int k) {
  WordSet A = random_subset(rng, n, k);
  while (true) {
    WordSet M = lines_in(A);
    if (M.size() == 0) return A;
    std::vector<Rank> templates = M.ranks();
    Rank tr = templates[rng() % templates.size()];
    Word t = decode_rank(n, k + 1, tr);
    std::vector<int> options;
    for (int j = 1; j <= k; ++j) options.push_back(j);
    int j = options[rng() % options.size()];
    std::vector<int> letters = t.letters;
    for (int& l : letters)
      if (l == k + 1) l = j;
    boost::dynamic_bitset<> bits = A.bits();
    bits.reset(encode_rank(Word(k, letters)));
    A = WordSet::from_bits(n, k, std::move(bits));
  }
}

long integer_cbrt(long n) {
  long c = std::lround(std::cbrt(static_cast<double>(n)));
  while (c * c * c > n) --c;
  while ((c + 1) * (c + 1) * (c + 1) <= n) ++c;
  return c;
}

// --- verification bodies -------------------------------------------------

bool verify_normalization(int n, int k, bool inject_fault, Json& results) {
  Json checked = Json::array();
  bool ok = true;
  auto record = [&](const std::string& name, const Density& d) {
    Rat mass = d.total_mass();
    bool good = mass == 1;
    ok = ok && good;
    checked.push_back({{"density", name}, {"mass", rat_to_string(mass)}, {"ok", good}});
  };
  Density uniform = make_density(DensityKind::uniform, n, k);
  if (inject_fault) {
    std::vector<Rat> w = uniform.slice_weights();
    w[0] += make_rat(1, BigInt(1000000));
    uniform = Density::slice_table(n, k, std::move(w));
  }
  record("uniform", uniform);
  record("equal_slices", make_density(DensityKind::equal_slices, n, k));
  if (n >= k) record("nondeg_equal_slices", make_density(DensityKind::nondeg_equal_slices, n, k));
  for (int d = k; d <= n; ++d)
    record("nu_prime_d" + std::to_string(d),
           nu_prime_density(n, k, d, NuPrimeWeights::nondegenerate));
  if (n >= k && n <= 8) record("circle", circle_density(n, k));
  for (int m = 1; m <= n; ++m) {
    std::string suffix = "_m" + std::to_string(m);
    record("subset_restricted_uniform" + suffix,
           compose_subset_density(n, k, m, MinorKind::restricted_uniform, MajorKind::uniform));
    record("subset_uniform_major_equal_slices" + suffix,
           compose_subset_density(n, k, m, MinorKind::uniform, MajorKind::equal_slices));
    record("subset_equal_slices_major_uniform" + suffix,
           compose_subset_density(n, k, m, MinorKind::equal_slices, MajorKind::uniform));
    record("injection_equal_slices" + suffix,
           compose_injection_density(n, k, m, make_density(DensityKind::equal_slices, m, k)));
  }
  results["checked"] = std::move(checked);
  results["ok"] = ok;
  return ok;
}

bool verify_nu_prime(int n, int k, int d, const std::string& method, Json& results) {
  NuPrimeMethod m =
      method == "brute" ? NuPrimeMethod::brute_force : NuPrimeMethod::grouped;
  Density lhs = nu_prime_density(n, k, d, NuPrimeWeights::nondegenerate, m);
  Density rhs = make_density(DensityKind::nondeg_equal_slices, n, k);
  Rat tv = tv_distance(lhs, rhs);
  results["tv"] = rat_to_string(tv);
  return tv == 0;
}

bool verify_circle(int n, int k, Json& results) {
  Rat tv = tv_distance(circle_density(n, k), make_density(DensityKind::nondeg_equal_slices, n, k));
  results["tv"] = rat_to_string(tv);
  return tv == 0;
}

bool verify_compose_bound(int n, int k, Json& results) {
  Density nu = make_density(DensityKind::equal_slices, n, k);
  Json rows = Json::array();
  bool ok = true;
  for (int m = 1; m <= n; ++m) {
    Density composed =
        compose_subset_density(n, k, m, MinorKind::uniform, MajorKind::equal_slices);
    Rat t2 = Rat(2) * tv_distance(composed, nu);
    Rat bound = make_rat(BigInt(2L * k * m), BigInt(n));
    bool good = t2 <= bound;
    ok = ok && good;
    rows.push_back({{"m", m},
                    {"two_tv", rat_to_string(t2)},
                    {"bound", rat_to_string(bound)},
                    {"ok", good}});
  }
  results["rows"] = std::move(rows);
  results["ok"] = ok;
  return ok;
}

bool verify_degenerate_bounds(int n, int k, Json& results) {
  bool ok = true;
  Json worst;
  Rat best_margin;
  bool first = true;
  for (int m = 1; m <= n; ++m)
    for (int j = 1; j <= k; ++j) {
      DegenerateSliceBounds b = degenerate_slice_bounds(n, k, m, j);
      ok = ok && b.all_strict();
      Rat margin = b.low_occurrence_bound - b.low_occurrence_mass;
      if (first || margin < best_margin) {
        best_margin = margin;
        worst = degenerate_bounds_to_json(b);
        worst["m"] = m;
        worst["j"] = j;
        first = false;
      }
    }
  results["tightest"] = std::move(worst);
  results["ok"] = ok;
  return ok;
}

bool verify_tail(int n, int k, long halfwidth, Json& results) {
  Rat value = balanced_tail(n, k, 1, halfwidth);
  long c = integer_cbrt(n);
  if (c * c * c != n)
    throw CLI::ValidationError("--n", "tail bound n^{-1/3} needs a perfect cube n");
  Rat bound = make_rat(1, BigInt(c));
  results["tail_mass"] = rat_to_string(value);
  results["bound"] = rat_to_string(bound);
  return value < bound;
}

bool verify_moments(int n, int k, int j, Json& results) {
  Density uniform = make_density(DensityKind::uniform, n, k);
  Moments mom = slice_moments(uniform, [j](const SliceVector& r) {
    return Rat(r.counts[static_cast<size_t>(j - 1)]);
  });
  Rat mean_expected = make_rat(BigInt(n), BigInt(k));
  Rat var_expected = mean_expected * (Rat(1) - make_rat(1, BigInt(k)));
  results["mean"] = rat_to_string(mom.mean);
  results["variance"] = rat_to_string(mom.variance);
  results["mean_expected"] = rat_to_string(mean_expected);
  results["variance_expected"] = rat_to_string(var_expected);
  return mom.mean == mean_expected && mom.variance == var_expected;
}

bool verify_szemeredi_map(int n, int k, Json& results) {
  std::uint64_t size = universe_size(n, k);
  std::vector<bool> seen(size, false);
  for (Rank r = 0; r < size; ++r) {
    std::uint64_t v = szemeredi_map(decode_rank(n, k, r));
    if (v < 1 || v > size || seen[v - 1]) {
      results["bijective"] = false;
      return false;
    }
    seen[v - 1] = true;
  }
  results["bijective"] = true;
  std::uint64_t lines = 0;
  bool all_ap = true;
  for_each_subspace(n, k, 1, [&](const SubspaceTemplate& t) {
    ++lines;
    std::vector<std::uint64_t> image;
    for (int j = 1; j <= k; ++j) image.push_back(szemeredi_map(instantiate(t, Word(k, {j}))));
    std::sort(image.begin(), image.end());
    for (int j = 2; j < k; ++j)
      if (image[static_cast<size_t>(j)] - image[static_cast<size_t>(j - 1)] !=
          image[1] - image[0]) {
        all_ap = false;
        return false;
      }
    return true;
  });
  results["lines_checked"] = lines;
  results["all_arithmetic_progressions"] = all_ap;
  return all_ap;
}

bool verify_sperner(int n, Json& results) {
  ExtremalResult r = max_line_free(n, 2, 2'000'000'000ULL);
  BigInt bound = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(n / 2));
  results["best_size"] = r.best_size;
  results["optimal"] = r.optimal;
  results["middle_binomial"] = bound.get_str();
  std::vector<std::uint32_t> family;
  r.witness.for_each_word([&](const Word& x) {
    std::uint32_t mask = 0;
    for (int i = 0; i < n; ++i)
      if (x.letters[static_cast<size_t>(i)] == 2) mask |= 1u << i;
    family.push_back(mask);
  });
  LymResult lym = lym_sum(family, n);
  results["witness_lym_sum"] = rat_to_string(lym.sum);
  results["witness_antichain"] = lym.antichain;
  return r.optimal && BigInt(static_cast<unsigned long>(r.best_size)) == bound &&
         lym.antichain && lym.sum <= 1;
}

bool verify_heart(int k, int m, std::uint64_t fuzz, std::uint64_t seed, Json& results) {
  std::mt19937_64 rng(seed);
  std::uint64_t size = universe_size(m, k);
  bool exhaustive = size <= 10;
  std::uint64_t cases = exhaustive ? (std::uint64_t(1) << size) : fuzz;
  std::uint64_t line_free_seen = 0, control_seen = 0;
  bool ok = true;
  for (std::uint64_t c = 0; c < cases && ok; ++c) {
    WordSet A1 = WordSet::empty_set(m, k);
    if (exhaustive) {
      std::vector<Rank> ranks;
      for (std::uint64_t b = 0; b < size; ++b)
        if (c & (std::uint64_t(1) << b)) ranks.push_back(b);
      A1 = WordSet::from_ranks(m, k, ranks);
    } else {
      A1 = random_line_free(rng, m, k);
    }
    bool line_free = lines_in(A1).size() == 0;
    HeartOutcome h = heart_step(A1);
    // Partition property.
    boost::dynamic_bitset<> cover(size);
    for (const WordSet& p : h.parts) {
      if ((cover & p.bits()).any()) ok = false;
      cover |= p.bits();
    }
    if (cover.count() != size) ok = false;
    if (!is_k_set(h.D, h.witness)) ok = false;
    if (line_free) {
      ++line_free_seen;
      if (!h.violations.empty()) ok = false;
    } else {
      ++control_seen;
      // Any reported violation must exhibit a line inside A1.
      for (const auto& v : h.violations) {
        if (!A1.contains(v.x)) ok = false;
        WordSet pts = subspace_points(v.line);
        if (!pts.is_subset_of(A1)) ok = false;
      }
    }
  }
  results["cases"] = cases;
  results["line_free_cases"] = line_free_seen;
  results["control_cases"] = control_seen;
  results["ok"] = ok;
  return ok;
}

bool verify_partition(int n, int k, int d, int m, std::uint64_t count, std::uint64_t seed,
                      bool inject_fault, Json& results) {
  std::mt19937_64 rng(seed);
  bool ok = true;
  std::uint64_t validated = 0;
  for (std::uint64_t c = 0; c < count && ok; ++c) {
    // Random insensitive closure, or a k-set of such for k >= 3.
    int parts_count = k == 2 ? 1 : 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k - 1));
    std::vector<std::pair<WordSet, InsensitiveWitness>> parts;
    WordSet D = WordSet::full_set(n, k);
    for (int h = 0; h < parts_count; ++h) {
      int letter = parts_count == 1 ? 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k - 1))
                                    : h + 1;
      WordSet part = closure(random_subset(rng, n, k), InsensitiveWitness{letter});
      D = D.intersect(part);
      parts.emplace_back(std::move(part), InsensitiveWitness{letter});
    }
    // Witness letters must be strictly increasing; single random letter is fine.
    PartitionCertificate cert = partition_insensitive(D, parts, d, m, make_rat(1, BigInt(4)));
    if (!validate_certificate(cert)) {
      ok = false;
      break;
    }
    ++validated;
    if (inject_fault && !cert.blocks.empty()) {
      // Corrupt one block: shift its fixed letters cyclically.
      PartitionCertificate bad = cert;
      std::vector<int> letters = bad.blocks[0].letters;
      bool changed = false;
      for (int& l : letters)
        if (l <= k) {
          l = l % k + 1;
          changed = true;
        }
      if (changed) {
        bad.blocks[0] = SubspaceTemplate(k, bad.blocks[0].d, letters);
        if (validate_certificate(bad)) {
          ok = false;
          results["fault_accepted"] = true;
        }
      }
    }
  }
  results["validated"] = validated;
  results["ok"] = ok;
  return ok;
}

bool verify_averages(int n, int k, int m, std::uint64_t count, std::uint64_t seed, Json& results) {
  std::mt19937_64 rng(seed);
  bool ok = true;
  for (std::uint64_t c = 0; c < count && ok; ++c) {
    WordSet A = random_subset(rng, n, k);
    AverageCheck chk = subspace_average_check(A, m);
    ok = chk.equal();
  }
  results["cases"] = count;
  results["ok"] = ok;
  return ok;
}

bool verify_balanced_words(int n, Json& results) {
  long c23 = integer_cbrt(static_cast<long>(n) * n);  // n^{2/3} for cube n
  long lo = (n - 1) / 2 + 1 - c23 + 1;  // smallest count strictly above n/2 - n^{2/3}
  // For odd n the centre n/2 is fractional; band = counts within the open
  // interval (n/2 - n^{2/3}, n/2 + n^{2/3}).
  Rat half = make_rat(BigInt(n), BigInt(2));
  Rat width = Rat(BigInt(c23));
  long lo_count = 0, hi_count = n;
  while (Rat(BigInt(lo_count)) <= half - width) ++lo_count;
  while (Rat(BigInt(hi_count)) >= half + width) --hi_count;
  (void)lo;
  WordSet A = WordSet::from_band(n, 2, Band{1, lo_count, hi_count});
  LineDensityReport rep = line_density_report(A);
  results["band"] = {{"letter", 1}, {"lo", lo_count}, {"hi", hi_count}};
  results["mu_A"] = rat_to_string(rep.mu_A);
  results["mu_M"] = rat_to_string(rep.mu_M);
  results["nu_A"] = rat_to_string(rep.nu_A);
  results["nu_M"] = rat_to_string(rep.nu_M);
  Rat hi_bound = make_rat(99, 100), lo_bound = make_rat(1, 100);
  bool ok = rep.mu_A > hi_bound && rep.mu_M < lo_bound;
  results["ok"] = ok;
  return ok;
}

bool verify_certificate_file(const std::string& path, Json& results) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--file", "cannot open " + path);
  Json j = Json::parse(in);
  if (j.contains("results")) j = j.at("results");  // accept a whole CLI report
  PartitionCertificate cert = certificate_from_json(j);
  bool ok = validate_certificate(cert);
  results["blocks"] = cert.blocks.size();
  results["valid"] = ok;
  return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact combinatorics of words, lines, subspaces and equal-slices densities"};
  app.require_subcommand(1);

  Invocation inv;
  std::string format = "json";
  app.add_option("--format", format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  bool approx = false;
  app.add_flag("--approx", approx, "add approximate decimal renderings");

  int n = 0, k = 2, d = 1, m = 1, j = 1, r = 1;
  std::uint64_t rank = 0, budget = 50'000'000, seed = 12345, count = 100;
  long halfwidth = 0;
  std::string word_text, set_spec = "full", set2_spec = "full", template_text, y_text;
  std::string delta_text = "1/2", eta_text = "1/8", eps_text = "1/4", method = "grouped";
  std::string kind = "uniform", file_path;
  bool nondegenerate = false, list_flag = false, truncated = false, inject_fault = false;
  int witness_letter = 1;

  std::function<void()> action;

  // --- words ---------------------------------------------------------------
  CLI::App* words = app.add_subcommand("words", "ranks, slices and the line-to-AP map");
  CLI::App* words_rank = words->add_subcommand("rank", "rank and map value of a word");
  words_rank->add_option("--k", k)->required();
  words_rank->add_option("--word", word_text)->required();
  words_rank->callback([&] {
    inv.command = "words rank";
    Word x = word_from_string(k, word_text);
    inv.parameters = {{"k", k}, {"word", word_text}};
    inv.results["rank"] = encode_rank(x);
    inv.results["map"] = szemeredi_map(x);
    inv.results["slice"] = slice_of(x).counts;
  });
  CLI::App* words_unrank = words->add_subcommand("unrank", "word of a rank");
  words_unrank->add_option("--k", k)->required();
  words_unrank->add_option("--n", n)->required();
  words_unrank->add_option("--rank", rank)->required();
  words_unrank->callback([&] {
    inv.command = "words unrank";
    inv.parameters = {{"k", k}, {"n", n}, {"rank", rank}};
    inv.results["word"] = word_to_json(decode_rank(n, k, rank));
  });
  CLI::App* words_slices = words->add_subcommand("slices", "slice vectors of [k]^n");
  words_slices->add_option("--k", k)->required();
  words_slices->add_option("--n", n)->required();
  words_slices->add_flag("--nondegenerate", nondegenerate);
  words_slices->add_flag("--list", list_flag);
  words_slices->callback([&] {
    inv.command = "words slices";
    inv.parameters = {{"k", k}, {"n", n}, {"nondegenerate", nondegenerate}};
    inv.results["count"] = slice_count(n, k, nondegenerate).get_str();
    if (list_flag) {
      Json arr = Json::array();
      for_each_slice(n, k, nondegenerate, [&](const SliceVector& s) {
        arr.push_back({{"counts", s.counts}, {"orbit", orbit_size(s).get_str()}});
      });
      inv.results["slices"] = std::move(arr);
    }
  });

  // --- subspaces -----------------------------------------------------------
  CLI::App* subs = app.add_subcommand("subspaces", "templates, points and counting");
  CLI::App* subs_count = subs->add_subcommand("count", "number of d-dimensional subspaces");
  subs_count->add_option("--k", k)->required();
  subs_count->add_option("--n", n)->required();
  subs_count->add_option("--d", d)->required();
  subs_count->callback([&] {
    inv.command = "subspaces count";
    inv.parameters = {{"k", k}, {"n", n}, {"d", d}};
    inv.results["count"] = subspace_count(n, k, d).get_str();
  });
  CLI::App* subs_enum = subs->add_subcommand("enumerate", "canonical templates");
  subs_enum->add_option("--k", k)->required();
  subs_enum->add_option("--n", n)->required();
  subs_enum->add_option("--d", d)->required();
  subs_enum->add_option("--limit", count, "emit at most this many templates");
  subs_enum->callback([&] {
    inv.command = "subspaces enumerate";
    inv.parameters = {{"k", k}, {"n", n}, {"d", d}};
    Json arr = Json::array();
    std::uint64_t left = count;
    for_each_subspace(n, k, d, [&](const SubspaceTemplate& t) {
      if (left == 0) return false;
      --left;
      arr.push_back(template_to_json(t));
      return true;
    });
    inv.results["templates"] = std::move(arr);
  });
  CLI::App* subs_points = subs->add_subcommand("points", "points of a template");
  subs_points->add_option("--k", k)->required();
  subs_points->add_option("--d", d)->required();
  subs_points->add_option("--template", template_text)->required();
  subs_points->callback([&] {
    inv.command = "subspaces points";
    SubspaceTemplate t = template_from_string(k, d, template_text);
    inv.parameters = {{"k", k}, {"d", d}, {"template", template_text}};
    Json arr = Json::array();
    subspace_points(t).for_each_word([&](const Word& x) { arr.push_back(word_to_json(x)); });
    inv.results["points"] = std::move(arr);
  });
  CLI::App* subs_inst = subs->add_subcommand("instantiate", "substitute y into a template");
  subs_inst->add_option("--k", k)->required();
  subs_inst->add_option("--d", d)->required();
  subs_inst->add_option("--template", template_text)->required();
  subs_inst->add_option("--y", y_text)->required();
  subs_inst->callback([&] {
    inv.command = "subspaces instantiate";
    SubspaceTemplate t = template_from_string(k, d, template_text);
    Word y = word_from_string(k, y_text);
    inv.parameters = {{"k", k}, {"d", d}, {"template", template_text}, {"y", y_text}};
    inv.results["word"] = word_to_json(instantiate(t, y));
  });

  // --- measure ---------------------------------------------------------------
  CLI::App* meas = app.add_subcommand("measure", "exact mass of a set under a density");
  meas->add_option("--kind", kind)->check(CLI::IsMember({"uniform", "equal_slices", "nondeg_equal_slices"}));
  meas->add_option("--k", k)->required();
  meas->add_option("--n", n)->required();
  meas->add_option("--set", set_spec)->required();
  meas->callback([&] {
    inv.command = "measure";
    DensityKind dk = kind == "uniform"        ? DensityKind::uniform
                     : kind == "equal_slices" ? DensityKind::equal_slices
                                              : DensityKind::nondeg_equal_slices;
    WordSet A = parse_set(set_spec, n, k);
    inv.parameters = {{"kind", kind}, {"k", k}, {"n", n}, {"set", set_spec}};
    inv.results["value"] = rat_to_string(measure(make_density(dk, n, k), A));
  });

  // --- verify ----------------------------------------------------------------
  CLI::App* verify = app.add_subcommand("verify", "exact identity and inequality checks");
  verify->require_subcommand(1);
  auto add_verify = [&](const std::string& name, const std::string& help,
                        const std::function<void(CLI::App*)>& options,
                        const std::function<bool(Json&)>& body) {
    CLI::App* sub = verify->add_subcommand(name, help);
    options(sub);
    sub->callback([&inv, name, body] {
      inv.command = "verify " + name;
      inv.ok = body(inv.results);
    });
    return sub;
  };

  add_verify(
      "normalization", "all density families have total mass exactly 1",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
        s->add_flag("--inject-fault", inject_fault);
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"n", n}};
        return verify_normalization(n, k, inject_fault, res);
      });
  add_verify(
      "nu-prime", "factorization density equals the non-degenerate equal-slices density",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
        s->add_option("--d", d)->required();
        s->add_option("--method", method)->check(CLI::IsMember({"grouped", "brute"}));
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"n", n}, {"d", d}, {"method", method}};
        return verify_nu_prime(n, k, d, method, res);
      });
  add_verify(
      "circle", "circle construction equals the non-degenerate equal-slices density",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"n", n}};
        return verify_circle(n, k, res);
      });
  add_verify(
      "compose-bound", "uniform-patch composition stays within km/n of equal-slices",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"n", n}};
        return verify_compose_bound(n, k, res);
      });
  add_verify(
      "degenerate-bounds", "low-occurrence and degenerate-orbit mass bounds",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"n", n}};
        return verify_degenerate_bounds(n, k, res);
      });
  add_verify(
      "tail", "occurrence-count tail mass is below n^{-1/3}",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
        s->add_option("--halfwidth", halfwidth, "defaults to n^{2/3} for cube n");
      },
      [&](Json& res) {
        if (halfwidth == 0) halfwidth = integer_cbrt(static_cast<long>(n) * n);
        inv.parameters = {{"k", k}, {"n", n}, {"halfwidth", halfwidth}};
        return verify_tail(n, k, halfwidth, res);
      });
  add_verify(
      "moments", "occurrence count has mean n/k and variance (n/k)(1-1/k)",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
        s->add_option("--j", j);
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"n", n}, {"j", j}};
        return verify_moments(n, k, j, res);
      });
  add_verify(
      "szemeredi-map", "line images are arithmetic progressions; map is bijective",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"n", n}};
        return verify_szemeredi_map(n, k, res);
      });
  add_verify(
      "sperner", "maximum line-free size at k=2 matches the middle binomial",
      [&](CLI::App* s) { s->add_option("--n", n)->required(); },
      [&](Json& res) {
        inv.parameters = {{"n", n}};
        return verify_sperner(n, res);
      });
  add_verify(
      "heart", "heart-step partition, containment and witness lines",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--m", m)->required();
        s->add_option("--count", count);
        s->add_option("--seed", seed);
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"m", m}, {"count", count}, {"seed", seed}};
        return verify_heart(k, m, count, seed, res);
      });
  add_verify(
      "partition", "fuzzed certificates validate; corrupted ones do not",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
        s->add_option("--d", d);
        s->add_option("--m", m);
        s->add_option("--count", count);
        s->add_option("--seed", seed);
        s->add_flag("--inject-fault", inject_fault);
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"n", n}, {"d", d}, {"m", m}, {"count", count}, {"seed", seed}};
        return verify_partition(n, k, d, m, count, seed, inject_fault, res);
      });
  add_verify(
      "averages", "direct subspace averages equal composed-density evaluations",
      [&](CLI::App* s) {
        s->add_option("--k", k)->required();
        s->add_option("--n", n)->required();
        s->add_option("--m", m)->required();
        s->add_option("--count", count);
        s->add_option("--seed", seed);
      },
      [&](Json& res) {
        inv.parameters = {{"k", k}, {"n", n}, {"m", m}, {"count", count}, {"seed", seed}};
        return verify_averages(n, k, m, count, seed, res);
      });
  add_verify(
      "balanced-words", "near-balanced band is uniformly dense yet almost line-free",
      [&](CLI::App* s) { s->add_option("--n", n)->required(); },
      [&](Json& res) {
        inv.parameters = {{"n", n}};
        return verify_balanced_words(n, res);
      });
  add_verify(
      "certificate", "re-validate a stored partition certificate",
      [&](CLI::App* s) { s->add_option("--file", file_path)->required(); },
      [&](Json& res) {
        inv.parameters = {{"file", file_path}};
        return verify_certificate_file(file_path, res);
      });

  // --- extremal ---------------------------------------------------------------
  CLI::App* extremal = app.add_subcommand("extremal", "maximum line-free set search");
  extremal->add_option("--k", k)->required();
  extremal->add_option("--n", n)->required();
  extremal->add_option("--budget", budget);
  extremal->callback([&] {
    inv.command = "extremal";
    inv.parameters = {{"k", k}, {"n", n}, {"budget", budget}};
    inv.results = extremal_to_json(max_line_free(n, k, budget));
  });

  // --- heart -------------------------------------------------------------------
  CLI::App* heart = app.add_subcommand("heart", "insensitive-set construction over [k]^m");
  heart->add_option("--k", k)->required();
  heart->add_option("--m", m)->required();
  heart->add_option("--set", set_spec)->required();
  heart->callback([&] {
    inv.command = "heart";
    WordSet A1 = parse_set(set_spec, m, k);
    inv.parameters = {{"k", k}, {"m", m}, {"set", set_spec}};
    inv.results = heart_to_json(heart_step(A1));
  });

  // --- partition -----------------------------------------------------------------
  CLI::App* partition = app.add_subcommand("partition", "decompose an insensitive set");
  partition->add_option("--k", k)->required();
  partition->add_option("--n", n)->required();
  partition->add_option("--set", set_spec)->required();
  partition->add_option("--witness-letter", witness_letter);
  partition->add_option("--d", d)->required();
  partition->add_option("--m", m)->required();
  partition->add_option("--eps", eps_text);
  partition->add_option("--budget", budget);
  partition->callback([&] {
    inv.command = "partition";
    WordSet D = parse_set(set_spec, n, k);
    inv.parameters = {{"k", k},       {"n", n}, {"set", set_spec}, {"witness_letter", witness_letter},
                      {"d", d},       {"m", m}, {"eps", eps_text}, {"budget", budget}};
    PartitionCertificate cert = partition_insensitive(
        D, {{D, InsensitiveWitness{witness_letter}}}, d, m, parse_rat(eps_text), budget);
    inv.results = certificate_to_json(cert);
    inv.results["validates"] = validate_certificate(cert);
  });

  // --- increment -------------------------------------------------------------------
  CLI::App* increment = app.add_subcommand("increment", "best relative density over subspaces");
  increment->add_option("--k", k)->required();
  increment->add_option("--n", n)->required();
  increment->add_option("--set", set_spec)->required();
  increment->add_option("--d", d)->required();
  increment->callback([&] {
    inv.command = "increment";
    WordSet A = parse_set(set_spec, n, k);
    inv.parameters = {{"k", k}, {"n", n}, {"set", set_spec}, {"d", d}};
    auto [s, value] = increment_search(A, d);
    inv.results["subspace"] = subspace_to_json(s);
    inv.results["density"] = rat_to_string(value);
  });

  // --- report ---------------------------------------------------------------------
  CLI::App* report = app.add_subcommand("report", "exact diagnostic reports");
  report->require_subcommand(1);

  CLI::App* rep_line = report->add_subcommand("line-density", "five densities of A and its lines");
  rep_line->add_option("--k", k)->required();
  rep_line->add_option("--n", n)->required();
  rep_line->add_option("--set", set_spec)->required();
  rep_line->callback([&] {
    inv.command = "report line-density";
    inv.parameters = {{"k", k}, {"n", n}, {"set", set_spec}};
    inv.results = line_density_to_json(line_density_report(parse_set(set_spec, n, k)));
  });

  CLI::App* rep_deg = report->add_subcommand("degenerate-bounds", "exact degenerate-slice values");
  rep_deg->add_option("--k", k)->required();
  rep_deg->add_option("--n", n)->required();
  rep_deg->add_option("--m", m)->required();
  rep_deg->add_option("--j", j);
  rep_deg->callback([&] {
    inv.command = "report degenerate-bounds";
    inv.parameters = {{"k", k}, {"n", n}, {"m", m}, {"j", j}};
    inv.results = degenerate_bounds_to_json(degenerate_slice_bounds(n, k, m, j));
  });

  CLI::App* rep_first = report->add_subcommand("first-step", "per-subspace alternative classifier");
  rep_first->add_option("--k", k)->required();
  rep_first->add_option("--n", n)->required();
  rep_first->add_option("--set", set_spec)->required();
  rep_first->add_option("--m", m)->required();
  rep_first->add_option("--delta", delta_text)->required();
  rep_first->add_option("--eta", eta_text)->required();
  rep_first->callback([&] {
    inv.command = "report first-step";
    inv.parameters = {{"k", k}, {"n", n}, {"set", set_spec}, {"m", m}, {"delta", delta_text}, {"eta", eta_text}};
    inv.results = first_step_to_json(
        first_step_classify(parse_set(set_spec, n, k), m, parse_rat(delta_text), parse_rat(eta_text)));
  });

  CLI::App* rep_third = report->add_subcommand("third-step", "uniform-density slack maximizer");
  rep_third->add_option("--k", k)->required();
  rep_third->add_option("--n", n)->required();
  rep_third->add_option("--set-a2", set_spec)->required();
  rep_third->add_option("--set-d", set2_spec)->required();
  rep_third->add_option("--r", r)->required();
  rep_third->add_option("--delta2", delta_text)->required();
  rep_third->callback([&] {
    inv.command = "report third-step";
    inv.parameters = {{"k", k}, {"n", n}, {"set_a2", set_spec}, {"set_d", set2_spec}, {"r", r}, {"delta2", delta_text}};
    inv.results = third_step_to_json(third_step_search(
        parse_set(set_spec, n, k), parse_set(set2_spec, n, k), r, parse_rat(delta_text)));
  });

  CLI::App* rep_avg = report->add_subcommand("averages", "dual-path subspace averages");
  rep_avg->add_option("--k", k)->required();
  rep_avg->add_option("--n", n)->required();
  rep_avg->add_option("--set", set_spec)->required();
  rep_avg->add_option("--m", m)->required();
  rep_avg->callback([&] {
    inv.command = "report averages";
    inv.parameters = {{"k", k}, {"n", n}, {"set", set_spec}, {"m", m}};
    inv.results = average_check_to_json(subspace_average_check(parse_set(set_spec, n, k), m));
  });

  CLI::App* rep_restrict = report->add_subcommand(
      "restriction", "relative equal-slices density of A on a subspace (with diagnostic ratio)");
  rep_restrict->add_option("--k", k)->required();
  rep_restrict->add_option("--n", n)->required();
  rep_restrict->add_option("--set", set_spec)->required();
  rep_restrict->add_option("--d", d)->required();
  rep_restrict->add_option("--template", template_text)->required();
  rep_restrict->add_flag("--truncated", truncated);
  rep_restrict->callback([&] {
    inv.command = "report restriction";
    WordSet A = parse_set(set_spec, n, k);
    SubspaceTemplate t = template_from_string(k, d, template_text);
    Subspace s = Subspace::from_template(t);
    inv.parameters = {{"k", k}, {"n", n}, {"set", set_spec}, {"template", template_text}, {"truncated", truncated}};
    inv.results["nu_S"] = rat_to_string(restrict_equal_slices(A, s, truncated));
    // Diagnostic only: the ratio form differs from the bijection form in general.
    Density nu = make_density(DensityKind::equal_slices, n, k);
    WordSet pts = subspace_points(t);
    Rat denom = measure(nu, pts);
    inv.results["ratio_form"] =
        denom == 0 ? "undefined" : rat_to_string(measure(nu, A.intersect(pts)) / denom);
  });

  CLI::App* rep_density = report->add_subcommand("density", "dump a density table as JSON");
  rep_density->add_option("--kind", kind,
                          "uniform | equal_slices | nondeg_equal_slices | nu-prime | circle | "
                          "compose-subset | compose-injection")
      ->required();
  rep_density->add_option("--k", k)->required();
  rep_density->add_option("--n", n)->required();
  rep_density->add_option("--d", d);
  rep_density->add_option("--m", m);
  rep_density->add_option("--minor", set_spec, "restricted_uniform | uniform | equal_slices");
  rep_density->add_option("--major", set2_spec, "uniform | equal_slices");
  rep_density->callback([&] {
    inv.command = "report density";
    inv.parameters = {{"kind", kind}, {"k", k}, {"n", n}};
    auto build = [&]() -> Density {
      if (kind == "uniform") return make_density(DensityKind::uniform, n, k);
      if (kind == "equal_slices") return make_density(DensityKind::equal_slices, n, k);
      if (kind == "nondeg_equal_slices")
        return make_density(DensityKind::nondeg_equal_slices, n, k);
      if (kind == "nu-prime") {
        inv.parameters["d"] = d;
        return nu_prime_density(n, k, d, NuPrimeWeights::nondegenerate);
      }
      if (kind == "circle") return circle_density(n, k);
      if (kind == "compose-subset") {
        inv.parameters["m"] = m;
        inv.parameters["minor"] = set_spec;
        inv.parameters["major"] = set2_spec;
        MinorKind mi = set_spec == "restricted_uniform" ? MinorKind::restricted_uniform
                       : set_spec == "uniform"          ? MinorKind::uniform
                                                        : MinorKind::equal_slices;
        MajorKind ma = set2_spec == "uniform" ? MajorKind::uniform : MajorKind::equal_slices;
        return compose_subset_density(n, k, m, mi, ma);
      }
      if (kind == "compose-injection") {
        inv.parameters["m"] = m;
        return compose_injection_density(n, k, m, make_density(DensityKind::equal_slices, m, k));
      }
      throw CLI::ValidationError("--kind", "unknown density kind " + kind);
    };
    Density dt = build();
    inv.results = density_to_json(dt);
    inv.results["total_mass"] = rat_to_string(dt.total_mass());
  });

  CLI::App* rep_compose = report->add_subcommand(
      "compose-mass", "slice-level mass of a slice-symmetric set under a composed density");
  rep_compose->add_option("--k", k)->required();
  rep_compose->add_option("--n", n)->required();
  rep_compose->add_option("--m", m)->required();
  rep_compose->add_option("--minor", template_text, "restricted_uniform | uniform | equal_slices")
      ->required();
  rep_compose->add_option("--major", y_text, "uniform | equal_slices")->required();
  rep_compose->add_option("--set", set_spec, "slice-symmetric spec (band:/slices:)")->required();
  rep_compose->callback([&] {
    inv.command = "report compose-mass";
    inv.parameters = {{"k", k}, {"n", n}, {"m", m},
                      {"minor", template_text}, {"major", y_text}, {"set", set_spec}};
    MinorKind mi = template_text == "restricted_uniform" ? MinorKind::restricted_uniform
                   : template_text == "uniform"          ? MinorKind::uniform
                                                         : MinorKind::equal_slices;
    MajorKind ma = y_text == "uniform" ? MajorKind::uniform : MajorKind::equal_slices;
    WordSet A = parse_set(set_spec, n, k);
    inv.results["mass"] = rat_to_string(compose_subset_slice_measure(n, k, m, mi, ma, A));
  });

  CLI::App* rep_tail = report->add_subcommand("tail", "exact occurrence-count tail mass");
  rep_tail->add_option("--k", k)->required();
  rep_tail->add_option("--n", n)->required();
  rep_tail->add_option("--j", j);
  rep_tail->add_option("--halfwidth", halfwidth)->required();
  rep_tail->callback([&] {
    inv.command = "report tail";
    inv.parameters = {{"k", k}, {"n", n}, {"j", j}, {"halfwidth", halfwidth}};
    inv.results["tail_mass"] = rat_to_string(balanced_tail(n, k, j, halfwidth));
  });

  // ---------------------------------------------------------------------------
  std::vector<std::string> argv_ordered(args.rbegin(), args.rend());
  auto started = std::chrono::steady_clock::now();
  try {
    app.parse(argv_ordered);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    err << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
          .count();
  inv.format_csv = format == "csv";
  inv.approx = approx;
  emit(inv, out, elapsed);
  return inv.ok ? 0 : 1;
}

}  // namespace dhj
