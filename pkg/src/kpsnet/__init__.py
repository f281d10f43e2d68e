"""Blom-Blundo, generalized rational-function and hyperelliptic key predistribution,
a hierarchical provisioning protocol built on them, and small-instance security checks."""

from .field import (
    Field,
    FieldElement,
    Poly,
    count_irreducibles,
    enumerate_irreducibles,
    expand_seed,
    extend,
    is_irreducible,
    make_field,
    sqrt_in_ext,
    tower,
    trace_norm,
)

__version__ = "0.1.0"
