"""Property N_p and graded Betti tables of Veronese embeddings via Koszul cohomology."""
from .algebra import (
    DEFAULT_PRIME,
    ExactBudgetExceeded,
    ExteriorIndex,
    FieldSpec,
    GradedBasis,
    Monomial,
    SparseMatrix,
    comb_rank,
    comb_unrank,
    mono_mul,
    monomial_basis,
    rank_exact,
    rank_mod_p,
)
from .betti import (
    BettiTable,
    Holds,
    NpVerdict,
    ThresholdResult,
    betti_entry,
    betti_table,
    check_np,
    conjecture_scan,
    hilbert_check,
    np_threshold,
)
from .certificates import (
    SectionCertificate,
    SlopeReport,
    build_kernel_section,
    default_section,
    eagon_northcott_betti,
    h0_vanishing_by_slope,
    serre_duality_check,
    slope,
)
from .config import RunConfig
from .koszul import (
    BudgetExceeded,
    Certification,
    CohomologyDim,
    KoszulMatrix,
    VeroneseContext,
    h0_dim,
    h1_dim,
    h2_dim,
    koszul_homology_dim,
    koszul_map,
)

__version__ = "0.1.0"
