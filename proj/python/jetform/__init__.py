"""Exact computer algebra for Lagrangian multiforms on jet space.

The heavy lifting lives in the C++ extension ``_jetform``; this package
re-exports its surface and adds a couple of conveniences.
"""

from _jetform import (  # noqa: F401
    BasisExhaustedError,
    Context,
    ContextError,
    DiffPoly,
    EOMSystem,
    ExprSyntaxError,
    KForm,
    NotADivergenceError,
    NotExactError,
    SchemaError,
    SymmetryError,
    build_multiform,
    closure_check,
    commuting_check,
    corpus_case_names,
    corpus_run,
    div_decompose,
    euler,
    exterior_derivative,
    helmholtz_check,
    inv_total_derivative,
    is_null_lagrangian,
    multiform_el_equations,
    prolong_apply,
    reduce_mod_eom,
    symmetry_check,
    total_derivative,
    variational_derivative,
)

__all__ = [name for name in dir() if not name.startswith("_")]


def parse(source, context):
    """Parse an expression string in the given context."""
    return context.parse(source)
