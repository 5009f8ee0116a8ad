"""Windows, the star condition, reduction certificates and Brehmer operators."""

from .brehmer import (
    BrehmerFactorization,
    BrehmerIndex,
    brehmer_operator,
    check_brehmer,
    factorize_brehmer,
    recursion_defect,
    subset_order,
    telescoping_defect,
)
from .certificate import CertificateNode, certify_regularity
from .sampled import check_regular_sampled, sample_windows, thread_cap
from .windows import (
    ConeTuple,
    build_tilde_gram,
    check_condition_star,
    double_tuple,
    reduce_step,
    window_verdict,
)

__all__ = [
    "BrehmerFactorization",
    "BrehmerIndex",
    "CertificateNode",
    "ConeTuple",
    "brehmer_operator",
    "build_tilde_gram",
    "certify_regularity",
    "check_brehmer",
    "check_condition_star",
    "check_regular_sampled",
    "double_tuple",
    "factorize_brehmer",
    "recursion_defect",
    "reduce_step",
    "sample_windows",
    "subset_order",
    "telescoping_defect",
    "thread_cap",
    "window_verdict",
]
