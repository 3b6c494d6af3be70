#include "dhj/measures.hpp"

#include <algorithm>
#include <stdexcept>

#include "dhj/enumeration.hpp"

namespace dhj {

namespace {

bool slice_before(const SliceVector& a, const SliceVector& b) {
  return b.counts < a.counts;  // enumerate_slices emits decreasing lex order
}

std::vector<BigInt> factorial_table(int upto) {
  std::vector<BigInt> f(static_cast<size_t>(upto) + 1);
  f[0] = 1;
  for (int i = 1; i <= upto; ++i) f[static_cast<size_t>(i)] = f[static_cast<size_t>(i - 1)] * i;
  return f;
}

// Point-table accumulator over a fixed common denominator.
struct PointAccumulator {
  std::vector<BigInt> num;
  BigInt den;

  PointAccumulator(std::uint64_t size, BigInt den_in) : num(size), den(std::move(den_in)) {}

  void add(std::uint64_t rank, const BigInt& a, const BigInt& b) {
    mpz_addmul(num[rank].get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }

  Density to_density(int n, int k) {
    std::vector<Rat> weights(num.size());
    for (size_t i = 0; i < num.size(); ++i) weights[i] = make_rat(num[i], den);
    return Density::point_table(n, k, std::move(weights));
  }
};

std::vector<std::uint64_t> rank_places(int n, int k) {
  std::vector<std::uint64_t> places(static_cast<size_t>(n));
  std::uint64_t p = 1;
  for (int i = 0; i < n; ++i) {
    places[static_cast<size_t>(i)] = p;
    if (i + 1 < n) p *= static_cast<std::uint64_t>(k);
  }
  return places;
}

BigInt product_of_factorials(const std::vector<BigInt>& fact, const std::vector<int>& counts) {
  BigInt out = 1;
  for (int c : counts) out *= fact[static_cast<size_t>(c)];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Density

Density Density::slice_table(int n, int k, std::vector<Rat> per_word_by_slice) {
  auto slices = std::make_shared<std::vector<SliceVector>>(enumerate_slices(n, k));
  if (per_word_by_slice.size() != slices->size())
    throw std::invalid_argument("slice-table size mismatch");
  for (const Rat& w : per_word_by_slice)
    if (w < 0) throw std::invalid_argument("negative density weight");
  Density d;
  d.n_ = n;
  d.k_ = k;
  d.backend_ = Backend::slice_table;
  d.slices_ = std::move(slices);
  d.weights_ = std::move(per_word_by_slice);
  return d;
}

Density Density::point_table(int n, int k, std::vector<Rat> weight_by_rank) {
  std::uint64_t size = universe_size(n, k);
  if (size > explicit_cap()) throw std::length_error("k^n exceeds the explicit-set cap");
  if (weight_by_rank.size() != size) throw std::invalid_argument("point-table size mismatch");
  for (const Rat& w : weight_by_rank)
    if (w < 0) throw std::invalid_argument("negative density weight");
  Density d;
  d.n_ = n;
  d.k_ = k;
  d.backend_ = Backend::point_table;
  d.weights_ = std::move(weight_by_rank);
  return d;
}

const std::vector<SliceVector>& Density::slices() const {
  if (backend_ != Backend::slice_table) throw std::logic_error("not a slice-table density");
  return *slices_;
}

const std::vector<Rat>& Density::slice_weights() const {
  if (backend_ != Backend::slice_table) throw std::logic_error("not a slice-table density");
  return weights_;
}

const Rat& Density::slice_weight(const SliceVector& r) const {
  const auto& all = slices();
  auto it = std::lower_bound(all.begin(), all.end(), r, slice_before);
  if (it == all.end() || !(*it == r)) throw std::invalid_argument("slice outside universe");
  return weights_[static_cast<size_t>(it - all.begin())];
}

const std::vector<Rat>& Density::point_weights() const {
  if (backend_ != Backend::point_table) throw std::logic_error("not a point-table density");
  return weights_;
}

Rat Density::weight(const Word& x) const {
  if (x.k != k_ || x.n() != n_) throw std::invalid_argument("word universe mismatch");
  if (backend_ == Backend::point_table) return weights_[encode_rank(x)];
  return slice_weight(slice_of(x));
}

Rat Density::total_mass() const {
  Rat total(0);
  if (backend_ == Backend::point_table) {
    for (const Rat& w : weights_) total += w;
  } else {
    for (size_t i = 0; i < weights_.size(); ++i)
      total += weights_[i] * Rat(orbit_size((*slices_)[i]));
  }
  return total;
}

Density make_density(DensityKind kind, int n, int k, bool force_point_table) {
  if (n < 1) throw std::invalid_argument("density needs n >= 1");
  if (kind == DensityKind::nondeg_equal_slices && n < k)
    throw std::invalid_argument("non-degenerate equal-slices needs n >= k");
  auto slices = enumerate_slices(n, k);
  std::vector<Rat> weights(slices.size());
  switch (kind) {
    case DensityKind::uniform: {
      Rat w = make_rat(1, int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(n)));
      std::fill(weights.begin(), weights.end(), w);
      break;
    }
    case DensityKind::equal_slices: {
      BigInt c = slice_count(n, k, false);
      for (size_t i = 0; i < slices.size(); ++i)
        weights[i] = make_rat(1, c * orbit_size(slices[i]));
      break;
    }
    case DensityKind::nondeg_equal_slices: {
      BigInt c = slice_count(n, k, true);
      for (size_t i = 0; i < slices.size(); ++i)
        weights[i] = slices[i].degenerate() ? Rat(0) : make_rat(1, c * orbit_size(slices[i]));
      break;
    }
  }
  Density d = Density::slice_table(n, k, std::move(weights));
  if (!force_point_table) return d;
  std::uint64_t size = universe_size(n, k);
  if (size > explicit_cap()) throw std::length_error("k^n exceeds the explicit-set cap");
  std::vector<Rat> by_rank(size);
  for (Rank r = 0; r < size; ++r) by_rank[r] = d.weight(decode_rank(n, k, r));
  return Density::point_table(n, k, std::move(by_rank));
}

Rat compose_subset_slice_measure(int n, int k, int m, MinorKind minor, MajorKind major,
                                 const WordSet& A) {
  if (m < 1 || m > n) throw std::invalid_argument("minority size out of range");
  if (A.is_explicit())
    throw std::invalid_argument("slice-level evaluation needs a slice-symmetric set");
  if (A.n() != n || A.k() != k) throw std::invalid_argument("universe mismatch");
  // For a slice-symmetric A every choice of J contributes equally, so fix
  // J = {1..m} and sum over slice pairs of the two parts.
  auto minor_weight = [&](const SliceVector& s) -> Rat {
    switch (minor) {
      case MinorKind::restricted_uniform:
        if (s.counts[static_cast<size_t>(k - 1)] != 0) return Rat(0);
        return make_rat(1, int_pow(static_cast<unsigned long>(k - 1),
                                   static_cast<unsigned long>(m)));
      case MinorKind::uniform:
        return make_rat(1, int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(m)));
      case MinorKind::equal_slices:
        return make_rat(1, slice_count(m, k, false) * orbit_size(s));
    }
    return Rat(0);
  };
  auto major_weight = [&](const SliceVector& s) -> Rat {
    if (major == MajorKind::uniform)
      return make_rat(1, int_pow(static_cast<unsigned long>(k),
                                 static_cast<unsigned long>(n - m)));
    return make_rat(1, slice_count(n - m, k, false) * orbit_size(s));
  };
  Rat total(0);
  for_each_slice(m, k, false, [&](const SliceVector& sm) {
    Rat wm = minor_weight(sm) * Rat(orbit_size(sm));
    if (wm == 0) return;
    for_each_slice(n - m, k, false, [&](const SliceVector& sr) {
      std::vector<int> joint(static_cast<size_t>(k));
      for (int j = 0; j < k; ++j)
        joint[static_cast<size_t>(j)] =
            sm.counts[static_cast<size_t>(j)] + sr.counts[static_cast<size_t>(j)];
      if (!A.contains_slice(SliceVector(std::move(joint)))) return;
      total += wm * major_weight(sr) * Rat(orbit_size(sr));
    });
  });
  return total;
}

Rat measure(const Density& d, const WordSet& A) {
  if (d.n() != A.n() || d.k() != A.k()) throw std::invalid_argument("universe mismatch");
  Rat total(0);
  if (d.backend() == Density::Backend::slice_table) {
    if (!A.is_explicit()) {
      const auto& slices = d.slices();
      const auto& weights = d.slice_weights();
      for (size_t i = 0; i < slices.size(); ++i)
        if (A.contains_slice(slices[i])) total += weights[i] * Rat(orbit_size(slices[i]));
    } else {
      A.for_each_word([&](const Word& x) { total += d.slice_weight(slice_of(x)); });
    }
  } else {
    const auto& weights = d.point_weights();
    if (A.is_explicit()) {
      A.for_each_rank([&](Rank r) { total += weights[r]; });
    } else {
      std::uint64_t size = universe_size(d.n(), d.k());
      for (Rank r = 0; r < size; ++r)
        if (A.contains_rank(r)) total += weights[r];
    }
  }
  return total;
}

Rat tv_distance(const Density& d1, const Density& d2) {
  if (!d1.same_universe(d2)) throw std::invalid_argument("universe mismatch");
  Rat l1(0);
  if (d1.backend() == Density::Backend::slice_table &&
      d2.backend() == Density::Backend::slice_table) {
    const auto& slices = d1.slices();
    const auto& w1 = d1.slice_weights();
    const auto& w2 = d2.slice_weights();
    for (size_t i = 0; i < slices.size(); ++i)
      l1 += abs(Rat(w1[i] - w2[i])) * Rat(orbit_size(slices[i]));
  } else {
    std::uint64_t size = universe_size(d1.n(), d1.k());
    if (size > explicit_cap())
      throw std::length_error("mixed-backend distance needs k^n within the explicit cap");
    for (Rank r = 0; r < size; ++r) {
      Word x = decode_rank(d1.n(), d1.k(), r);
      l1 += abs(Rat(d1.weight(x) - d2.weight(x)));
    }
  }
  return l1 / 2;
}

// ---------------------------------------------------------------------------
// Composed densities

Density compose_subset_density(int n, int k, int m, MinorKind minor, MajorKind major) {
  if (m < 1 || m > n) throw std::invalid_argument("minority size out of range");
  std::uint64_t size = universe_size(n, k);
  if (size > explicit_cap()) throw std::length_error("k^n exceeds the explicit-set cap");
  auto fact = factorial_table(n);
  auto places = rank_places(n, k);

  int minor_base = minor == MinorKind::restricted_uniform ? k - 1 : k;
  BigInt minor_den;
  switch (minor) {
    case MinorKind::restricted_uniform:
      minor_den = int_pow(static_cast<unsigned long>(k - 1), static_cast<unsigned long>(m));
      break;
    case MinorKind::uniform:
      minor_den = int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(m));
      break;
    case MinorKind::equal_slices:
      minor_den = slice_count(m, k, false) * fact[static_cast<size_t>(m)];
      break;
  }
  BigInt major_den = major == MajorKind::uniform
                         ? int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(n - m))
                         : slice_count(n - m, k, false) * fact[static_cast<size_t>(n - m)];

  BigInt den = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(m)) *
               minor_den * major_den;
  PointAccumulator acc(size, den);

  for_each_combination(n, m, [&](const std::vector<int>& J) {
    std::vector<std::uint64_t> jplaces, cplaces;
    size_t ji = 0;
    for (int pos = 1; pos <= n; ++pos) {
      if (ji < J.size() && J[static_cast<size_t>(ji)] == pos) {
        jplaces.push_back(places[static_cast<size_t>(pos - 1)]);
        ++ji;
      } else {
        cplaces.push_back(places[static_cast<size_t>(pos - 1)]);
      }
    }
    for (Odometer y(m, minor_base, jplaces); y.valid(); y.advance()) {
      BigInt ynum = minor == MinorKind::equal_slices ? product_of_factorials(fact, y.counts())
                                                     : BigInt(1);
      for (Odometer z(n - m, k, cplaces); z.valid(); z.advance()) {
        if (major == MajorKind::uniform)
          acc.add(y.rank() + z.rank(), ynum, BigInt(1));
        else
          acc.add(y.rank() + z.rank(), ynum, product_of_factorials(fact, z.counts()));
      }
    }
  });
  return acc.to_density(n, k);
}

namespace {

// Per-slice integer weights w * den for a slice-constant minor density.
struct SliceConstantMinor {
  std::vector<BigInt> num_by_slice;  // aligned with enumerate_slices(m, k)
  BigInt den;
};

SliceConstantMinor slice_constant_form(const Density& minor) {
  SliceConstantMinor out;
  auto slices = enumerate_slices(minor.n(), minor.k());
  std::vector<Rat> per_word(slices.size());
  if (minor.backend() == Density::Backend::slice_table) {
    per_word = minor.slice_weights();
  } else {
    // Verify constancy on orbits before collapsing.
    std::vector<bool> seen(slices.size(), false);
    std::uint64_t size = universe_size(minor.n(), minor.k());
    for (Rank r = 0; r < size; ++r) {
      Word x = decode_rank(minor.n(), minor.k(), r);
      SliceVector s = slice_of(x);
      auto it = std::lower_bound(slices.begin(), slices.end(), s, slice_before);
      size_t idx = static_cast<size_t>(it - slices.begin());
      const Rat& w = minor.point_weights()[r];
      if (!seen[idx]) {
        per_word[idx] = w;
        seen[idx] = true;
      } else if (per_word[idx] != w) {
        throw std::invalid_argument(
            "minor density is not slice-symmetric; pass exploit_symmetry = false");
      }
    }
  }
  out.den = 1;
  for (const Rat& w : per_word) {
    BigInt q(w.get_den());
    mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), q.get_mpz_t());
  }
  out.num_by_slice.resize(per_word.size());
  for (size_t i = 0; i < per_word.size(); ++i) {
    Rat scaled = per_word[i] * Rat(out.den);
    out.num_by_slice[i] = BigInt(scaled.get_num());
  }
  return out;
}

}  // namespace

Density compose_injection_density(int n, int k, int m, const Density& minor,
                                  bool exploit_symmetry) {
  if (m < 1 || m > n) throw std::invalid_argument("minority size out of range");
  if (minor.n() != m || minor.k() != k) throw std::invalid_argument("minor universe mismatch");
  std::uint64_t size = universe_size(n, k);
  if (size > explicit_cap()) throw std::length_error("k^n exceeds the explicit-set cap");
  auto places = rank_places(n, k);

  if (exploit_symmetry) {
    // Injections sharing an image contribute equally for a slice-constant
    // minor, so the sum collapses to one term per m-subset.
    SliceConstantMinor mf = slice_constant_form(minor);
    auto mslices = enumerate_slices(m, k);
    BigInt den = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(m)) *
                 mf.den *
                 int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(n - m));
    PointAccumulator acc(size, den);
    for_each_combination(n, m, [&](const std::vector<int>& J) {
      std::vector<std::uint64_t> jplaces, cplaces;
      size_t ji = 0;
      for (int pos = 1; pos <= n; ++pos) {
        if (ji < J.size() && J[static_cast<size_t>(ji)] == pos) {
          jplaces.push_back(places[static_cast<size_t>(pos - 1)]);
          ++ji;
        } else {
          cplaces.push_back(places[static_cast<size_t>(pos - 1)]);
        }
      }
      for (Odometer y(m, k, jplaces); y.valid(); y.advance()) {
        SliceVector s(y.counts());
        auto it = std::lower_bound(mslices.begin(), mslices.end(), s, slice_before);
        const BigInt& ynum = mf.num_by_slice[static_cast<size_t>(it - mslices.begin())];
        if (ynum == 0) continue;
        for (Odometer z(n - m, k, cplaces); z.valid(); z.advance())
          acc.add(y.rank() + z.rank(), ynum, BigInt(1));
      }
    });
    return acc.to_density(n, k);
  }

  // Raw enumeration over injections sigma: [m] -> [n].
  BigInt minor_den = 1;
  std::uint64_t msize = universe_size(m, k);
  std::vector<Rat> minor_w(msize);
  for (Rank r = 0; r < msize; ++r) {
    minor_w[r] = minor.weight(decode_rank(m, k, r));
    BigInt q(minor_w[r].get_den());
    mpz_lcm(minor_den.get_mpz_t(), minor_den.get_mpz_t(), q.get_mpz_t());
  }
  std::vector<BigInt> minor_num(msize);
  for (Rank r = 0; r < msize; ++r)
    minor_num[r] = BigInt(Rat(minor_w[r] * Rat(minor_den)).get_num());

  BigInt falling = 1;
  for (int i = 0; i < m; ++i) falling *= (n - i);
  BigInt den = falling * minor_den *
               int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(n - m));
  PointAccumulator acc(size, den);

  std::vector<int> sigma(static_cast<size_t>(m), 0);
  std::vector<bool> used(static_cast<size_t>(n + 1), false);
  std::function<void(int)> rec = [&](int i) {
    if (i == m) {
      std::vector<std::uint64_t> splaces(static_cast<size_t>(m));
      std::vector<std::uint64_t> cplaces;
      for (int t = 0; t < m; ++t)
        splaces[static_cast<size_t>(t)] = places[static_cast<size_t>(sigma[static_cast<size_t>(t)] - 1)];
      for (int pos = 1; pos <= n; ++pos)
        if (!used[static_cast<size_t>(pos)]) cplaces.push_back(places[static_cast<size_t>(pos - 1)]);
      for (Odometer x(m, k, splaces); x.valid(); x.advance()) {
        const BigInt& xnum = minor_num[encode_rank(Word(k, x.digits()))];
        if (xnum == 0) continue;
        for (Odometer z(n - m, k, cplaces); z.valid(); z.advance())
          acc.add(x.rank() + z.rank(), xnum, BigInt(1));
      }
      return;
    }
    for (int pos = 1; pos <= n; ++pos) {
      if (used[static_cast<size_t>(pos)]) continue;
      used[static_cast<size_t>(pos)] = true;
      sigma[static_cast<size_t>(i)] = pos;
      rec(i + 1);
      used[static_cast<size_t>(pos)] = false;
    }
  };
  rec(0);
  return acc.to_density(n, k);
}

// ---------------------------------------------------------------------------
// Factorization density

namespace {

Density nu_prime_brute(int n, int k, int d, NuPrimeWeights weights) {
  std::uint64_t size = universe_size(n, k);
  if (size > explicit_cap()) throw std::length_error("k^n exceeds the explicit-set cap");
  auto fact = factorial_table(std::max(n, d));
  bool nondeg = weights == NuPrimeWeights::nondegenerate;
  BigInt c1 = nondeg ? binomial(static_cast<unsigned long>(n - 1), static_cast<unsigned long>(d - 1))
                     : binomial(static_cast<unsigned long>(n + d - 1), static_cast<unsigned long>(d - 1));
  BigInt c2 = nondeg ? binomial(static_cast<unsigned long>(d - 1), static_cast<unsigned long>(k - 1))
                     : binomial(static_cast<unsigned long>(d + k - 1), static_cast<unsigned long>(k - 1));
  BigInt den = c1 * fact[static_cast<size_t>(n)] * c2 * fact[static_cast<size_t>(d)];
  PointAccumulator acc(size, den);
  auto places = rank_places(n, k);

  std::vector<int> y(static_cast<size_t>(n), 0);
  std::vector<int> ycount(static_cast<size_t>(d), 0);
  // Enumerate non-degenerate y in [d]^n; prune when the remaining positions
  // cannot cover the unused letters.
  std::function<void(int, int)> rec = [&](int pos, int missing) {
    if (n - pos < missing) return;
    if (pos == n) {
      BigInt ynum = product_of_factorials(fact, ycount);
      // z places: letter t collects the rank weight of all positions with y_i = t.
      std::vector<std::uint64_t> zplaces(static_cast<size_t>(d), 0);
      for (int i = 0; i < n; ++i)
        zplaces[static_cast<size_t>(y[static_cast<size_t>(i)] - 1)] += places[static_cast<size_t>(i)];
      for (Odometer z(d, k, zplaces); z.valid(); z.advance()) {
        if (nondeg) {
          bool zdeg = false;
          for (int c : z.counts())
            if (c == 0) {
              zdeg = true;
              break;
            }
          if (zdeg) continue;
        }
        acc.add(z.rank(), ynum, product_of_factorials(fact, z.counts()));
      }
      return;
    }
    for (int l = 1; l <= d; ++l) {
      y[static_cast<size_t>(pos)] = l;
      bool fresh = ycount[static_cast<size_t>(l - 1)] == 0;
      ++ycount[static_cast<size_t>(l - 1)];
      rec(pos + 1, missing - (fresh ? 1 : 0));
      --ycount[static_cast<size_t>(l - 1)];
    }
  };
  rec(0, d);
  return acc.to_density(n, k);
}

Density nu_prime_grouped(int n, int k, int d, NuPrimeWeights weights) {
  auto fact = factorial_table(std::max(n, d));
  bool nondeg = weights == NuPrimeWeights::nondegenerate;
  BigInt c1 = nondeg ? binomial(static_cast<unsigned long>(n - 1), static_cast<unsigned long>(d - 1))
                     : binomial(static_cast<unsigned long>(n + d - 1), static_cast<unsigned long>(d - 1));
  BigInt c2 = nondeg ? binomial(static_cast<unsigned long>(d - 1), static_cast<unsigned long>(k - 1))
                     : binomial(static_cast<unsigned long>(d + k - 1), static_cast<unsigned long>(k - 1));
  BigInt den = c1 * fact[static_cast<size_t>(n)] * c2 * fact[static_cast<size_t>(d)];

  auto slices = enumerate_slices(n, k);
  std::vector<Rat> weights_out(slices.size(), Rat(0));

  for (size_t si = 0; si < slices.size(); ++si) {
    const SliceVector& r = slices[si];
    if (nondeg && r.degenerate()) continue;
    std::vector<int> active;
    for (int j = 0; j < k; ++j)
      if (r.counts[static_cast<size_t>(j)] > 0) active.push_back(j);

    BigInt total = 0;
    std::vector<int> blocks(active.size(), 0);  // i_j: y-blocks inside letter class j
    // Composition pieces per active letter; divisor = prod of part factorials.
    std::function<void(size_t, const BigInt&, const BigInt&, const BigInt&)> over_compositions =
        [&](size_t ai, const BigInt& count_so_far, const BigInt& w1num_so_far,
            const BigInt& w2num_so_far) {
          if (ai == active.size()) {
            // count * w1num * w2num, with d!/prod(i_j!) block labelings.
            BigInt labelings = fact[static_cast<size_t>(d)];
            for (int b : blocks) {
              BigInt bf = fact[static_cast<size_t>(b)];
              mpz_divexact(labelings.get_mpz_t(), labelings.get_mpz_t(), bf.get_mpz_t());
            }
            total += count_so_far * labelings * w1num_so_far * w2num_so_far;
            return;
          }
          int rj = r.counts[static_cast<size_t>(active[ai])];
          int ij = blocks[ai];
          // Ordered compositions of rj into ij positive parts.
          std::vector<int> parts(static_cast<size_t>(ij), 0);
          std::function<void(int, int, const BigInt&)> comp = [&](int t, int left,
                                                                  const BigInt& divisor) {
            if (t == ij) {
              if (left != 0) return;
              BigInt count_j = fact[static_cast<size_t>(rj)];
              mpz_divexact(count_j.get_mpz_t(), count_j.get_mpz_t(), divisor.get_mpz_t());
              over_compositions(ai + 1, count_so_far * count_j, w1num_so_far * divisor,
                                w2num_so_far * fact[static_cast<size_t>(ij)]);
              return;
            }
            int max_part = left - (ij - t - 1);
            for (int p = 1; p <= max_part; ++p) {
              parts[static_cast<size_t>(t)] = p;
              comp(t + 1, left - p, divisor * fact[static_cast<size_t>(p)]);
            }
          };
          comp(0, rj, BigInt(1));
        };

    std::function<void(size_t, int)> over_blocks = [&](size_t ai, int left) {
      if (ai == active.size()) {
        if (left == 0) over_compositions(0, BigInt(1), BigInt(1), BigInt(1));
        return;
      }
      int rj = r.counts[static_cast<size_t>(active[ai])];
      int remaining_min = static_cast<int>(active.size() - ai - 1);
      for (int b = 1; b <= std::min(rj, left - remaining_min); ++b) {
        blocks[ai] = b;
        over_blocks(ai + 1, left - b);
      }
    };
    over_blocks(0, d);
    weights_out[si] = make_rat(total, den);
  }
  return Density::slice_table(n, k, std::move(weights_out));
}

}  // namespace

Density nu_prime_density(int n, int k, int d, NuPrimeWeights weights, NuPrimeMethod method) {
  if (d < k || d > n) throw std::invalid_argument("factorization density needs k <= d <= n");
  return method == NuPrimeMethod::brute_force ? nu_prime_brute(n, k, d, weights)
                                              : nu_prime_grouped(n, k, d, weights);
}

// ---------------------------------------------------------------------------
// Circle construction

Density circle_density(int n, int k, int max_n) {
  if (k < 2 || n < k) throw std::invalid_argument("circle construction needs 2 <= k <= n");
  if (n > max_n) throw std::invalid_argument("circle construction: n too large for enumeration");
  std::uint64_t size = universe_size(n, k);
  std::vector<std::uint64_t> hits(size, 0);
  auto places = rank_places(n, k);

  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i + 1;
  std::vector<int> letter_at(static_cast<size_t>(n), 0);
  std::uint64_t outcomes = 0;
  do {
    for_each_combination(n, k, [&](const std::vector<int>& B) {
      for (int t = 0; t < k; ++t) {
        // Arc starting at delimiter B[(t+j-1) mod k] carries letter j.
        for (int j = 1; j <= k; ++j) {
          int start = B[static_cast<size_t>((t + j - 1) % k)];
          int end = B[static_cast<size_t>((t + j) % k)];
          for (int i = start; i != end; i = (i % n) + 1)
            letter_at[static_cast<size_t>(perm[static_cast<size_t>(i - 1)] - 1)] = j;
        }
        std::uint64_t rank = 0;
        for (int i = 0; i < n; ++i)
          rank += static_cast<std::uint64_t>(letter_at[static_cast<size_t>(i)] - 1) *
                  places[static_cast<size_t>(i)];
        ++hits[rank];
        ++outcomes;
      }
    });
  } while (std::next_permutation(perm.begin(), perm.end()));

  BigInt den(static_cast<unsigned long>(outcomes));
  std::vector<Rat> weights(size);
  for (std::uint64_t r = 0; r < size; ++r)
    weights[r] = make_rat(BigInt(static_cast<unsigned long>(hits[r])), den);
  return Density::point_table(n, k, std::move(weights));
}

// ---------------------------------------------------------------------------
// Relativization, moments, tails

Rat restrict_equal_slices(const WordSet& A, const Subspace& s, bool truncated) {
  WordSet image = pullback(s, A);
  int k = s.k(), d = s.d();
  if (!truncated) return measure(make_density(DensityKind::equal_slices, d, k), image);
  if (k == 2) {
    // [k-1]^d is the single all-ones word.
    return image.contains(decode_rank(d, k, 0)) ? Rat(1) : Rat(0);
  }
  std::uint64_t tsize = universe_size(d, k - 1);
  boost::dynamic_bitset<> bits(tsize);
  for (std::uint64_t yr = 0; yr < tsize; ++yr) {
    Word y = decode_rank(d, k - 1, yr);
    if (image.contains(Word(k, y.letters))) bits.set(yr);
  }
  WordSet truncated_image = WordSet::from_bits(d, k - 1, std::move(bits));
  return measure(make_density(DensityKind::equal_slices, d, k - 1), truncated_image);
}

Moments moments(const Density& d, const std::function<Rat(const Word&)>& f) {
  if (d.backend() != Density::Backend::point_table)
    throw std::invalid_argument("word-function moments need a point-table density");
  std::uint64_t size = universe_size(d.n(), d.k());
  Rat mean(0);
  std::vector<Rat> values(size);
  for (Rank r = 0; r < size; ++r) {
    values[r] = f(decode_rank(d.n(), d.k(), r));
    mean += values[r] * d.point_weights()[r];
  }
  Rat var(0);
  for (Rank r = 0; r < size; ++r) {
    Rat dev = values[r] - mean;
    var += dev * dev * d.point_weights()[r];
  }
  return {mean, var};
}

Moments slice_moments(const Density& d, const std::function<Rat(const SliceVector&)>& f) {
  if (d.backend() != Density::Backend::slice_table)
    throw std::invalid_argument("slice-function moments need a slice-table density");
  const auto& slices = d.slices();
  const auto& w = d.slice_weights();
  Rat mean(0);
  std::vector<Rat> values(slices.size());
  std::vector<Rat> masses(slices.size());
  for (size_t i = 0; i < slices.size(); ++i) {
    values[i] = f(slices[i]);
    masses[i] = w[i] * Rat(orbit_size(slices[i]));
    mean += values[i] * masses[i];
  }
  Rat var(0);
  for (size_t i = 0; i < slices.size(); ++i) {
    Rat dev = values[i] - mean;
    var += dev * dev * masses[i];
  }
  return {mean, var};
}

Rat balanced_tail(int n, int k, int j, long halfwidth) {
  if (n < 1 || k < 2 || j < 1 || j > k) throw std::invalid_argument("bad tail parameters");
  if (halfwidth < 0) throw std::invalid_argument("negative halfwidth");
  BigInt num = 0;
  for (int c = 0; c <= n; ++c) {
    // c outside [n/k - halfwidth, n/k + halfwidth], compared exactly.
    long lhs = static_cast<long>(c) * k;
    bool outside = lhs < n - halfwidth * k || lhs > n + halfwidth * k;
    if (!outside) continue;
    num += binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(c)) *
           int_pow(static_cast<unsigned long>(k - 1), static_cast<unsigned long>(n - c));
  }
  return make_rat(num, int_pow(static_cast<unsigned long>(k), static_cast<unsigned long>(n)));
}

bool DegenerateSliceBounds::all_strict() const {
  return low_occurrence_mass < low_occurrence_bound && degenerate_mass < degenerate_bound &&
         sup_distance < sup_bound;
}

DegenerateSliceBounds degenerate_slice_bounds(int n, int k, int m, int j) {
  if (n < k) throw std::invalid_argument("degenerate-slice bounds need n >= k");
  if (m < 1 || j < 1 || j > k) throw std::invalid_argument("bad bound parameters");
  Density nu = make_density(DensityKind::equal_slices, n, k);
  Density nut = make_density(DensityKind::nondeg_equal_slices, n, k);
  WordSet low = WordSet::from_slice_predicate(
      n, k, [m, j](const SliceVector& r) { return r.counts[static_cast<size_t>(j - 1)] < m; });
  WordSet degenerate = WordSet::from_slice_predicate(
      n, k, [](const SliceVector& r) { return r.degenerate(); });
  DegenerateSliceBounds out;
  out.low_occurrence_mass = measure(nu, low);
  out.low_occurrence_bound = make_rat(BigInt(static_cast<long>(m) * k), BigInt(n));
  out.degenerate_mass = measure(nu, degenerate);
  out.degenerate_bound = make_rat(BigInt(static_cast<long>(k) * k), BigInt(n));
  out.sup_distance = tv_distance(nu, nut);
  out.sup_bound = out.degenerate_bound;
  return out;
}

}  // namespace dhj
