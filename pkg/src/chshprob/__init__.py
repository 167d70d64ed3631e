"""Signed four-probability master distributions, CHSH and Bell inequality checks."""

from .errors import InvariantError, ValidationError
from .pauli import Axis, Operator2, pauli_dot, product_identity_check, projector, trace
from .quantum import (
    AxisQuadruple,
    FourProbTable,
    Symmetry,
    bell_inequality_check,
    chsh_closed_form,
    chsh_dot_form,
    chsh_master_form,
    coplanar_axes,
    delta,
    four_prob_complex,
    four_prob_symmetrized,
    marginal_pair,
    pair_prob,
    table2,
    three_prob,
)

__all__ = [
    "Axis",
    "AxisQuadruple",
    "FourProbTable",
    "InvariantError",
    "Operator2",
    "Symmetry",
    "ValidationError",
    "bell_inequality_check",
    "chsh_closed_form",
    "chsh_dot_form",
    "chsh_master_form",
    "coplanar_axes",
    "delta",
    "four_prob_complex",
    "four_prob_symmetrized",
    "marginal_pair",
    "pair_prob",
    "pauli_dot",
    "product_identity_check",
    "projector",
    "table2",
    "three_prob",
    "trace",
]
