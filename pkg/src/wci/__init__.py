"""Weak clean index and related invariants of finite rings."""

from .constructors import (
    FiniteBimodule,
    SymbolicTriangularRing,
    build,
    build_symbolic_t3,
    cyclic_bimodule,
    direct_product,
    matrix_ring,
    triangular,
    trunc_poly,
    zn,
)
from .errors import (
    InputError,
    PreconditionError,
    ResourceError,
    RingAxiomError,
    RingError,
    UnsupportedOperationError,
)
from .index import (
    ChiReport,
    ClassificationResult,
    JSets,
    chi,
    chi_bound_triangular,
    chi_clean,
    clean_index,
    index_argmax,
    is_clean,
    is_elemental,
    is_uniquely_clean,
    is_weakly_clean,
    j_sets,
    jset_image,
    max_jset_size,
    predicate_win1,
    predicate_win2,
    predicate_win3,
    weak_clean_index,
    win_via_jsets,
)
from .ring import (
    ElementSet,
    RingTable,
    SubringView,
    center,
    corner_ring,
    idempotents,
    is_abelian,
    is_local,
    jacobson_radical,
    nilpotents,
    peirce_components,
    quasi_regular,
    quotient,
    subring_generated,
    units,
    verify_ring_axioms,
)

__version__ = "0.1.0"
