"""Exact lattice ordered groups and their identities."""

from .groups import (
    Element,
    Group,
    LexGroup,
    PLGroup,
    ProductGroup,
    ZnGroup,
    element_from_json,
    group_from_spec,
    group_to_spec,
)
from .laws import LAWS, law_suite
from .ops import group_op, join_all, meet_all, meet_join, pos_neg_parts, quotient_parts

__all__ = [
    "Element",
    "Group",
    "LexGroup",
    "PLGroup",
    "ProductGroup",
    "ZnGroup",
    "LAWS",
    "element_from_json",
    "group_from_spec",
    "group_to_spec",
    "group_op",
    "join_all",
    "law_suite",
    "meet_all",
    "meet_join",
    "pos_neg_parts",
    "quotient_parts",
]
