#pragma once

#include <vector>

#include "dhj/measures.hpp"
#include "dhj/subspaces.hpp"
#include "dhj/words.hpp"

namespace dhj {

// Witness letter i < k for ik-insensitivity: closure under exchanging
// occurrences of i and k.
struct InsensitiveWitness {
  int i = 1;
};

// True iff A is closed under swapping any occurrences of letters i and k.
bool is_insensitive(const WordSet& A, InsensitiveWitness w);

// Smallest ik-insensitive superset of A.
WordSet closure(const WordSet& A, InsensitiveWitness w);

// True iff parts has k-1 entries, part h is (h+1 = witness) insensitive with
// its stated letter, and their intersection equals D.
bool is_k_set(const WordSet& D, const std::vector<std::pair<WordSet, InsensitiveWitness>>& parts);

// Insensitivity of Dsub relative to s: the pulled-back image must be
// ik-insensitive in [k]^d. Requires Dsub inside the points of s.
bool insensitive_in_subspace(const WordSet& Dsub, const Subspace& s, InsensitiveWitness w);

struct HeartOutcome {
  std::vector<WordSet> C_list;   // C_1..C_{k-1}, C_j = {x : x(j) in A1}
  WordSet C;                     // intersection of the C_j
  std::vector<WordSet> parts;    // D^(1)..D^(k); a partition of [k]^m
  int chosen_j = 1;              // maximizer of the exact slack, smallest on ties
  WordSet D;                     // D^(chosen_j)
  std::vector<std::pair<WordSet, InsensitiveWitness>> witness;  // k-set witness for D

  struct Ledger {
    Rat nu_A1;
    Rat nu_A1_cap_C;
    Rat nu_C_with_last_letter;  // nu(C minus [k-1]^m)
    Rat nu_A1_cap_D;
    Rat nu_D;
    Rat slack;  // nu(A1 cap D) - nu(A1) nu(D)
  } ledger;

  // Words of A1 ∩ C containing letter k; each carries the line template
  // witnessing that A1 is not line-free. Empty whenever A1 is line-free.
  struct Violation {
    Word x;
    SubspaceTemplate line;
  };
  std::vector<Violation> violations;

  HeartOutcome() : C(WordSet::empty_set(1, 2)), D(WordSet::empty_set(1, 2)) {}
};

// The C_j / C / D^(j) construction over [k]^m: builds the insensitive sets
// C_j, the partition D^(1..k), picks j in [k-1] with the largest exact
// equal-slices slack, and reports the ledger. If A1 is line-free, A1 ∩ C
// avoids letter k; otherwise each offending word is returned with an explicit
// line contained in A1.
HeartOutcome heart_step(const WordSet& A1);

}  // namespace dhj
