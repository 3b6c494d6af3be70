"""Exact combinatorics of words, lines, subspaces and equal-slices densities.

All values are exact: rationals come back as fractions.Fraction, counts as
Python ints. The heavy lifting happens in the compiled _core module.
"""

from dhjlab._core import (
    Band,
    Density,
    ExtremalResult,
    HeartOutcome,
    InsensitiveWitness,
    PartitionCertificate,
    SliceVector,
    Subspace,
    SubspaceTemplate,
    Word,
    WordSet,
    balanced_tail,
    circle_density,
    closure,
    compose,
    compose_injection_density,
    compose_subset_density,
    decode_rank,
    degenerate_slice_bounds,
    encode_rank,
    enumerate_slices,
    enumerate_subspaces,
    explicit_cap,
    first_step_classify,
    heart_step,
    increment_search,
    insensitive_in_subspace,
    instantiate,
    is_insensitive,
    is_k_set,
    line_density_report,
    lines_in,
    lym_sum,
    make_density,
    max_line_free,
    measure,
    nu_prime_density,
    orbit_size,
    partition_insensitive,
    pullback,
    restrict_equal_slices,
    set_explicit_cap,
    slice_moments,
    slice_of,
    subspace_average_check,
    subspace_count,
    subspace_in_set,
    subspace_points,
    szemeredi_map,
    third_step_search,
    truncation,
    tv_distance,
    validate_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
