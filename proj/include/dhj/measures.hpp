#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dhj/subspaces.hpp"
#include "dhj/words.hpp"

namespace dhj {

enum class DensityKind { uniform, equal_slices, nondeg_equal_slices };

// Exact probability assignment on [k]^n. Slice-table backend stores one
// per-word weight per orbit (constant on orbits); point-table backend stores
// a weight per rank and requires k^n within the explicit cap.
class Density {
 public:
  enum class Backend { slice_table, point_table };

  static Density slice_table(int n, int k, std::vector<Rat> per_word_by_slice);
  static Density point_table(int n, int k, std::vector<Rat> weight_by_rank);

  int n() const { return n_; }
  int k() const { return k_; }
  Backend backend() const { return backend_; }
  bool same_universe(const Density& o) const { return n_ == o.n_ && k_ == o.k_; }

  // Slice-table accessors; slices are in enumerate_slices(n,k) order.
  const std::vector<SliceVector>& slices() const;
  const std::vector<Rat>& slice_weights() const;
  const Rat& slice_weight(const SliceVector& r) const;

  const std::vector<Rat>& point_weights() const;

  Rat weight(const Word& x) const;
  Rat total_mass() const;

 private:
  Density() = default;
  int n_ = 0, k_ = 0;
  Backend backend_ = Backend::point_table;
  std::shared_ptr<const std::vector<SliceVector>> slices_;
  std::vector<Rat> weights_;
};

// Backend is chosen automatically (slice table, which works at any n);
// force_point_table materializes per-rank weights instead, cap permitting.
Density make_density(DensityKind kind, int n, int k, bool force_point_table = false);

// Exact mass of A; additive over disjoint unions.
Rat measure(const Density& d, const WordSet& A);

// max over sets A of |d1(A) - d2(A)|, computed as half the L1 weight
// difference.
Rat tv_distance(const Density& d1, const Density& d2);

enum class MinorKind { restricted_uniform, uniform, equal_slices };
enum class MajorKind { uniform, equal_slices };

// Density of words assembled from a uniformly random m-subset J of [n], a
// minor-density word on J and a major-density word on the complement.
// (restricted_uniform draws the J-part uniformly from [k-1]^J.)
Density compose_subset_density(int n, int k, int m, MinorKind minor, MajorKind major);

// Mass of a slice-symmetric set under the subset composition, computed at
// slice level; usable when k^n is far beyond the explicit cap.
Rat compose_subset_slice_measure(int n, int k, int m, MinorKind minor, MajorKind major,
                                 const WordSet& A);

// Same construction indexed by injections [m] -> [n] with an arbitrary minor
// density on [k]^m. When the minor is constant on slices the sum over
// injections with a common image collapses to the subset form; pass
// exploit_symmetry = false to force the raw enumeration.
Density compose_injection_density(int n, int k, int m, const Density& minor,
                                  bool exploit_symmetry = true);

enum class NuPrimeWeights { nondegenerate, plain };
enum class NuPrimeMethod { grouped, brute_force };

// The factorization density: weight of x is the sum of w1(y) * w2(z) over all
// factorizations x = y*z with y non-degenerate in [d]^n and z in [k]^d.
// Weights are the (non-degenerate) equal-slices densities of the two factors.
// With plain weights the restriction to non-degenerate y makes the result a
// sub-probability table (mass = equal-slices mass of the non-degenerate words
// of [d]^n); only the non-degenerate-weight variant is a true density.
// brute_force enumerates the (y, z) pairs literally; grouped enumerates
// factorizations of one representative per slice, organised by the number of
// y-blocks inside each letter class and their sizes.
Density nu_prime_density(int n, int k, int d, NuPrimeWeights weights,
                         NuPrimeMethod method = NuPrimeMethod::grouped);

// Projection of the uniform density on (permutation, pointed k-subset) pairs:
// the n points sit around a circle in permutation order, the k delimiters cut
// it into arcs, and the pointed delimiter starts the letter-1 arc. Exact
// enumeration of all n! * k * C(n,k) outcomes.
Density circle_density(int n, int k, int max_n = 8);

// Equal-slices density of the image of A in [k]^d under the bijection with s;
// with truncated set, equal-slices on [k-1]^d of the image of A ∩ S'.
Rat restrict_equal_slices(const WordSet& A, const Subspace& s, bool truncated);

struct Moments {
  Rat mean;
  Rat variance;
};

// Mean and variance of f under d (point-table backend).
Moments moments(const Density& d, const std::function<Rat(const Word&)>& f);
// Same for slice-measurable f (slice-table backend).
Moments slice_moments(const Density& d, const std::function<Rat(const SliceVector&)>& f);

// Uniform mass of the words whose occurrence count of letter j lies outside
// [n/k - halfwidth, n/k + halfwidth]; computed by binomial sums, never by
// enumerating k^n words.
Rat balanced_tail(int n, int k, int j, long halfwidth);

struct DegenerateSliceBounds {
  Rat low_occurrence_mass;   // nu{words with < m occurrences of j}
  Rat low_occurrence_bound;  // mk/n
  Rat degenerate_mass;       // nu(union of degenerate orbits)
  Rat degenerate_bound;      // k^2/n
  Rat sup_distance;          // max over A of |nu(A) - nu~(A)|
  Rat sup_bound;             // k^2/n
  bool all_strict() const;
};

// Exact values and strict-inequality checks for the degenerate-slice bounds.
DegenerateSliceBounds degenerate_slice_bounds(int n, int k, int m, int j);

}  // namespace dhj
