"""Lattice ordered groups, regular representations and finite-window dilations."""

from .dilation import (
    WindowDilation,
    check_covariant_pair,
    conjugation_alpha,
    defect_operators,
    finite_unitary_dilation,
    window_dilation,
)
from .errors import ContractError, LatregError, NumericError, StructuralError
from .positivity import (
    HermitianBlockMatrix,
    block2x2_psd_check,
    douglas_solve,
    gram_factor,
    is_psd,
    loewner_leq,
    psd_sqrt,
)
from .regularity import (
    BrehmerIndex,
    ConeTuple,
    brehmer_operator,
    build_tilde_gram,
    certify_regularity,
    check_brehmer,
    check_condition_star,
    check_regular_sampled,
    double_tuple,
    factorize_brehmer,
    reduce_step,
)
from .report import Report
from .representation import (
    Representation,
    check_nica,
    check_row_column,
    evaluate,
    evaluate_tilde,
    generate,
)
from .worked_examples import run_demo

__all__ = [
    "BrehmerIndex",
    "ConeTuple",
    "ContractError",
    "HermitianBlockMatrix",
    "LatregError",
    "NumericError",
    "Report",
    "Representation",
    "StructuralError",
    "WindowDilation",
    "block2x2_psd_check",
    "brehmer_operator",
    "build_tilde_gram",
    "certify_regularity",
    "check_brehmer",
    "check_condition_star",
    "check_covariant_pair",
    "check_nica",
    "check_regular_sampled",
    "check_row_column",
    "conjugation_alpha",
    "defect_operators",
    "double_tuple",
    "douglas_solve",
    "evaluate",
    "evaluate_tilde",
    "factorize_brehmer",
    "finite_unitary_dilation",
    "generate",
    "gram_factor",
    "is_psd",
    "loewner_leq",
    "psd_sqrt",
    "reduce_step",
    "run_demo",
    "window_dilation",
]
