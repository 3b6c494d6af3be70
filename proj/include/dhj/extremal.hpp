#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dhj/insensitive.hpp"
#include "dhj/measures.hpp"
#include "dhj/subspaces.hpp"
#include "dhj/words.hpp"

namespace dhj {

// Templates x over [k+1]^n \ [k]^n with L(x) ⊆ A. Explicit sets yield an
// explicit result; slice-symmetric sets yield a slice-symmetric result over
// [k+1]^n evaluated by letter counts alone.
WordSet lines_in(const WordSet& A);

struct ExtremalResult {
  int n = 0, k = 0;
  std::uint64_t best_size = 0;
  WordSet witness;
  bool optimal = false;
  std::uint64_t nodes_explored = 0;

  ExtremalResult() : witness(WordSet::empty_set(1, 2)) {}
};

// Maximum size of a line-free subset of [k]^n by branch and bound over words
// in rank order. Bound: incumbent versus |chosen| + |remaining|; coordinate
// symmetry is applied at the root only (the first chosen word must have the
// least rank in its coordinate-permutation orbit). Returns best-so-far with
// optimal = false once the node budget is exhausted.
ExtremalResult max_line_free(int n, int k, std::uint64_t node_budget = 50'000'000);

struct LymResult {
  Rat sum;         // sum over X in F of |X|!(n-|X|)!/n!
  bool antichain;  // no inclusion pair
};

// Family given as bitmasks of subsets of [n], n <= 20. Duplicates collapse.
LymResult lym_sum(const std::vector<std::uint32_t>& family, int n);

// First canonical d-dimensional template whose points all lie in A, if any.
// Exhaustive, hence returns nullopt only when none exists.
std::optional<SubspaceTemplate> subspace_in_set(const WordSet& A, int d);

// The d-dimensional subspace maximizing uniform relative density of A, with
// the exact maximum; canonical enumeration order breaks ties.
std::pair<Subspace, Rat> increment_search(const WordSet& A, int d);

struct AverageCheck {
  Rat direct_full;      // average of nu_S(A) over all S_{J,y}
  Rat composed_full;    // injection-composed density of A, equal-slices minor
  Rat direct_truncated;
  Rat composed_truncated;
  Rat mu;               // uniform density of A
  bool equal() const {
    return direct_full == composed_full && direct_truncated == composed_truncated;
  }
};

// Both computation paths for the average relative equal-slices density of A
// over axis subspaces of dimension m, which must agree exactly.
AverageCheck subspace_average_check(const WordSet& A, int m);

enum class StepClass { alt1, alt2, neither };

struct FirstStepReport {
  std::uint64_t total = 0;
  std::uint64_t alt1 = 0, alt2 = 0, neither = 0;
  std::optional<Subspace> alt1_witness, alt2_witness, neither_witness;
};

// Labels every S_{J,y} of dimension m: alt1 when nu_S(A) >= delta + eta,
// otherwise alt2 when nu_S(A) >= delta - 4 eta / delta and the truncated
// density is at least delta / 4. Requires 0 < eta <= delta / 4.
FirstStepReport first_step_classify(const WordSet& A, int m, const Rat& delta, const Rat& eta);

struct ThirdStepResult {
  Subspace maximizer;
  Rat slack;   // mu_V(A2) - delta2 * mu_V(D) at the maximizer
  Rat mu_A2;   // mu_V(A2) there
  Rat mu_D;    // mu_V(D) there
};

// Exhaustive maximization of mu_V(A2) - delta2 * mu_V(D) over r-dimensional
// axis subspaces V = S_{J,y}. Requires A2 ⊆ D.
ThirdStepResult third_step_search(const WordSet& A2, const WordSet& D, int r, const Rat& delta2);

struct PartitionRound {
  std::vector<int> free_coords_used;  // the m-subset J consumed this round
  SubspaceTemplate block_shape;       // the common subspace U on J
  std::uint64_t sections_removed = 0; // |T|
  Rat removed_mass;                   // uniform mass of T x U
  Rat round_bound;                    // eps / (3 (k+d)^m k^{m-d})
  bool met_bound = false;
};

struct PartitionCertificate {
  std::vector<SubspaceTemplate> blocks;
  WordSet residual;
  WordSet target;
  Rat residual_density;
  Rat requested_eps;
  bool eps_met = false;
  int rounds = 0;
  std::vector<PartitionRound> round_log;

  PartitionCertificate() : residual(WordSet::empty_set(1, 2)), target(WordSet::empty_set(1, 2)) {}
};

// Finds a d-dimensional subspace of the truncated cube [k-1]^m inside a
// section (bits indexed by base-(k-1) rank), returned already lifted to a
// template over [k+d]^m whose fixed letters avoid k. This is the pluggable
// stand-in for the appeal to the k-1 case of the line theorem.
using TruncatedSubspaceFinder = std::function<std::optional<SubspaceTemplate>(
    const std::vector<bool>& section, int m, int k, int d)>;

// The default finder: first canonical template by exhaustive search.
std::optional<SubspaceTemplate> exhaustive_truncated_finder(const std::vector<bool>& section,
                                                            int m, int k, int d);

// Iterative removal of T x U products from a k-set D. The certificate is
// always exact (disjoint blocks inside D, union plus residual equal to D);
// whether the residual beats eps is reported, not guaranteed, at desk scale.
PartitionCertificate partition_insensitive(
    const WordSet& D, const std::vector<std::pair<WordSet, InsensitiveWitness>>& parts, int d,
    int m, const Rat& eps, std::uint64_t round_budget = 1024,
    const TruncatedSubspaceFinder& finder = {});

// Offline re-validation of a certificate using only words/subspaces.
bool validate_certificate(const PartitionCertificate& cert);

struct LineDensityReport {
  Rat mu_A, nu_A, nu_tilde_A;  // on [k]^n
  Rat mu_M, nu_M;              // of the line-template set on [k+1]^n
};

// The five exact densities for A and its set of lines; slice-symmetric sets
// are handled at slice level without enumerating points.
LineDensityReport line_density_report(const WordSet& A);

}  // namespace dhj
