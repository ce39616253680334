"""Exact-arithmetic workbench for the stuffle/box algebra of formal
q-analogue multiple zeta values."""

from .words import (
    DomainError,
    LinComb,
    Word,
    WordParseError,
    WordStats,
    format_word,
    is_admissible,
    lincomb_combine,
    parse_word,
    reverse_index,
    tau,
    word_stats,
)
from .products import (
    box,
    box_index_recursive,
    depth_decompose,
    h_sum,
    psi,
    stuffle,
    stuffle_index,
)
from .compositions import (
    conjectured_basis,
    index_pairs,
    indices_of,
    kernel_generators,
    part,
    plain_basis,
    ppart,
)
from .linalg import (
    QMatrix,
    matrix_from_lincombs,
    rank_exact,
    rank_modular,
    solve_membership,
)
from .spanlab import (
    DimensionReport,
    dim_boxspan,
    identity_suite,
    kernel_dim,
    verify_conjectured_basis,
    verify_kernel_containment,
)
from .qseries import Series, check_homomorphism, check_relation_vanishes, zeta_series
from .workbench import (
    MembershipCertificate,
    dep1_reduce,
    membership_F,
    membership_bachmann,
    relation_basis,
    relation_family_S23,
    words_of_weight,
)

__version__ = "0.1.0"
