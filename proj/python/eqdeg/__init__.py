"""Equivariant degree toolkit: python bindings over the C++ core."""

from eqdeg._core import analyze, degree, realize, verify, group_order, parse_vector_block

__all__ = [
    "analyze",
    "degree",
    "realize",
    "verify",
    "group_order",
    "parse_vector_block",
]
