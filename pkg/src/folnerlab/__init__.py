"""Finite-scale experiments with Folner sequences in countable amenable
groups: density measurement, large structureless set constructions, and
window-scale detectors for finite sums / products structure and for
syndetic, thick, and piecewise syndetic behaviour.
"""

from .errors import (
    BackendMismatchError,
    BudgetExceededError,
    CalibrationError,
    DomainError,
    FolnerLabError,
    UnsupportedOperationError,
)
from .groups import (
    ALT,
    SYM,
    Z,
    AlternatingFinitary,
    CountableGroup,
    IntegerGroup,
    IntegerLattice,
    Perm,
    PERM_ID,
    SymmetricFinitary,
    cycle,
    group_by_name,
    multiply,
    parse_cycles,
    sign,
    transposition_pair,
)
from .folner import (
    FolnerSequence,
    ReiterWeights,
    alt_sequence,
    box_sequence,
    interval_sequence,
    invert,
    left_defect,
    reiter_from_folner,
    right_defect,
    slice_weights,
    symmetric_interval_sequence,
    translated,
    two_sided_reiter,
    unslice_check,
)
from .subsets import (
    DensityReport,
    SubsetSpec,
    complement,
    density_along,
    difference,
    empty_set,
    from_finite,
    full_set,
    intersection,
    materialize,
    multiples,
    rle_decode,
    rle_encode,
    shift_left,
    shift_right,
    symmetric_difference,
    union,
)
from .structures import (
    ChainSearchResult,
    FPChain,
    StructureWitness,
    dilate_left,
    extract_fpi_from_thick,
    find_shift_avoiding,
    fp_chain_search,
    fp_products,
    fp_set,
    fs_meets_multiples,
    fs_set,
    is_pws_window,
    is_syndetic_window,
    is_thick_window,
    shifted_fs_search,
    verify_fp_containment,
)
from .constructions import (
    NonPwsResult,
    StrausParams,
    SyndeticFamily,
    TrimResult,
    alt_group_example,
    cofinite_trim,
    doubling_example,
    fpd_obstruction_check,
    greedy_disjoint_cover,
    non_pws_large_set,
    shrinking_syndetic_family,
    straus_interval_mask,
    straus_set,
)
from .symbolic import (
    EmpiricalMeasure,
    Pattern,
    ProbeReport,
    all_patterns,
    empirical_measure,
    interval_frequency_series,
    orbit_point,
    pattern_distribution,
    pattern_from_bits,
    syndetic_orbit_probe,
    unique_pattern_check,
)

__version__ = "0.1.0"
