"""Polymorphisms, weighted polymorphisms, and the improvement-row vectors.

A k-ary operation f is a polymorphism of gamma when it maps feasible column
tuples back into the feasibility relation.  A proper k-ary weighting omega
improves gamma when its support consists of polymorphisms and, for every
choice X of k feasible tuples, the weighted sum of gamma over the images
f(X) is non-positive.  Fixing a language and an arity, each pair (gamma, X)
induces a vector over the polymorphism basis, gamma[X](f) = gamma(f(X));
those vectors are the generators every cone argument in the package runs on.

``pol`` filters the full operation table with numpy (index arithmetic only;
all values stay exact rationals).  Row and basis orders are canonical:
operations by table, gammas by name, X by columnwise tuple index.
"""

from __future__ import annotations

import itertools

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    Operation,
    OperationSet,
    TupleMatrix,
    apply,
    check_op_cap,
    projections,
    tuple_index,
)
from .errors import CapExceededError
from .lp import LinearConstraint, LpFeasible, lp_feasible
from .rational import ONE, ZERO, Rat, is_inf
from .wops import Weighting, require_proper, supp
from .wrel import Language, WeightedRelation


def is_polymorphism(f: Operation, gamma: WeightedRelation) -> bool:
    """True when f maps every k-column choice of feasible tuples into Feas(gamma)."""
    if f.d != gamma.d:
        raise ValueError("domain mismatch between operation and relation")
    feas = gamma.feas_tuples()
    if not feas:
        return True
    feas_idx = {tuple_index(t, gamma.d) for t in feas}
    d = gamma.d
    table = f.table
    for cols in itertools.product(feas, repeat=f.arity):
        idx = 0
        for row in zip(*cols):
            pos = 0
            for e in row:
                pos = pos * d + e
            idx = idx * d + table[pos]
        if idx not in feas_idx:
            return False
    return True


def _all_tables(d: int, k: int) -> np.ndarray:
    """All d**(d**k) operation tables as an integer matrix, table-lex order."""
    width = d**k
    count = d**width
    idx = np.arange(count, dtype=np.int64)
    cols = []
    for pos in range(width):
        power = d ** (width - 1 - pos)
        cols.append((idx // power) % d)
    return np.stack(cols, axis=1)


def _pol_mask(language: Language, k: int, tables: np.ndarray) -> np.ndarray:
    """Boolean mask over the table matrix: rows that are polymorphisms of all relations."""
    d = language.d
    mask = np.ones(len(tables), dtype=bool)
    for name in language.names():
        gamma = language[name]
        feas = gamma.feas_tuples()
        if not feas:
            continue
        feas_flags = np.zeros(d**gamma.arity, dtype=bool)
        for t in feas:
            feas_flags[tuple_index(t, d)] = True
        radix = np.array([d ** (gamma.arity - 1 - j) for j in range(gamma.arity)], dtype=np.int64)
        for cols in itertools.product(feas, repeat=k):
            col_idx = np.fromiter(
                (tuple_index(row, d) for row in zip(*cols)), dtype=np.int64, count=gamma.arity
            )
            images = tables[:, col_idx]
            flat = images @ radix
            mask &= feas_flags[flat]
            if not mask.any():
                return mask
    return mask


def pol(language: Language, k: int, cap=None) -> OperationSet:
    """All k-ary polymorphisms of every relation in the language, canonical order."""
    if k < 1:
        raise ValueError("polymorphism arity must be at least 1")
    d = language.d
    check_op_cap(d, k, cap)
    tables = _all_tables(d, k)
    mask = _pol_mask(language, k, tables)
    ops = [Operation(d, k, tuple(int(v) for v in tables[i])) for i in np.nonzero(mask)[0]]
    return OperationSet(d, ops)


def improvement_value(omega: Weighting, gamma: WeightedRelation, x: TupleMatrix):
    """The exact left-hand side sum_{f in supp(omega)} omega(f) * gamma(f(X)).

    Requires supp(omega) inside Pol(gamma) and X made of feasible tuples, so
    every term is finite.
    """
    require_proper(omega, "improvement_value")
    if x.width != omega.arity:
        raise ValueError("X must have one column per weighting argument")
    if x.d != gamma.d or omega.d != gamma.d:
        raise ValueError("domain mismatch")
    feas = set(gamma.feas_tuples())
    for col in x.columns:
        if col not in feas:
            raise ValueError("X column %s is outside Feas(gamma)" % (col,))
    total = ZERO
    for op, w in omega.items():
        if w > 0 and not is_polymorphism(op, gamma):
            raise ValueError("support operation %s is not a polymorphism" % (op,))
        value = gamma.value(apply(op, x))
        if is_inf(value):
            raise ValueError("support operation escapes Feas(gamma)")
        total = total + w * value
    return total


def is_weighted_polymorphism(omega: Weighting, gamma: WeightedRelation) -> bool:
    """Decide whether the proper weighting improves the weighted relation."""
    require_proper(omega, "is_weighted_polymorphism")
    if omega.d != gamma.d:
        raise ValueError("domain mismatch")
    for op, w in omega.items():
        if w > 0 and not is_polymorphism(op, gamma):
            return False
    feas = gamma.feas_tuples()
    if not feas:
        return True
    terms = []
    for op, w in omega.items():
        terms.append((op, w))
    d = gamma.d
    for cols in itertools.product(feas, repeat=omega.arity):
        x = TupleMatrix(d, cols)
        total = ZERO
        for op, w in terms:
            value = gamma.value(apply(op, x))
            total = total + w * value
        if total > 0:
            return False
    return True


@dataclass(frozen=True)
class ImprovementRow:
    """The vector gamma[X] over a fixed polymorphism basis."""

    gamma_name: str
    x: TupleMatrix
    vector: tuple


def _row_vector(gamma: WeightedRelation, cols, basis_ops: Sequence[Operation]):
    d = gamma.d
    rows = tuple(zip(*cols))
    row_idx = [tuple_index(r, d) for r in rows]
    gtable = gamma.table
    values = []
    for op in basis_ops:
        t = op.table
        idx = 0
        for ri in row_idx:
            idx = idx * d + t[ri]
        values.append(gtable[idx])
    return tuple(values)


def improvement_rows(language: Language, k: int, cap=None):
    """The k-ary polymorphism basis and one row per (gamma, X) pair.

    Rows are ordered by relation name, then by the columnwise tuple indices
    of X; the basis is in canonical operation order.
    """
    basis = pol(language, k, cap)
    basis_ops = basis.of_arity(k)
    rows = []
    for name in language.names():
        gamma = language[name]
        feas = gamma.feas_tuples()
        for cols in itertools.product(feas, repeat=k):
            vector = _row_vector(gamma, cols, basis_ops)
            rows.append(ImprovementRow(name, TupleMatrix(language.d, cols), vector))
    return basis, rows


def weighted_polymorphism_constraints(basis_ops: Sequence[Operation], rows):
    """LP rows shared by every weighted-polymorphism search over the basis.

    Variables are the weights per basis operation; projections are the only
    free (sign-unrestricted) variables.  Constraints: weights sum to zero and
    every improvement row prices non-positively.
    """
    n = len(basis_ops)
    free = [j for j, op in enumerate(basis_ops) if op.is_projection()]
    constraints = [LinearConstraint((ONE,) * n, "=", ZERO)]
    for row in rows:
        constraints.append(LinearConstraint(tuple(row.vector), "<=", ZERO))
    return constraints, free


def find_weighted_polymorphism(
    language: Language,
    k: int,
    require_positive: Operation | None = None,
    cap=None,
):
    """Search for a k-ary weighted polymorphism of the language by exact LP.

    With ``require_positive`` the weighting must put weight at least 1 on
    that operation (which must be a polymorphism); returns None when no such
    weighting exists.  Without it the zero weighting is always feasible.
    """
    basis, rows = improvement_rows(language, k, cap)
    basis_ops = basis.of_arity(k)
    constraints, free = weighted_polymorphism_constraints(basis_ops, rows)
    if require_positive is not None:
        if require_positive not in basis:
            raise ValueError("require_positive operation is not a polymorphism of the language")
        target = basis_ops.index(require_positive)
        coeffs = [ZERO] * len(basis_ops)
        coeffs[target] = ONE
        constraints.append(LinearConstraint(tuple(coeffs), ">=", ONE))
    res = lp_feasible(len(basis_ops), constraints, free_vars=free)
    if not isinstance(res, LpFeasible):
        return None
    omega = Weighting(language.d, k, {op: w for op, w in zip(basis_ops, res.x) if w != 0})
    for name in language.names():
        if not is_weighted_polymorphism(omega, language[name]):
            raise AssertionError("LP returned a non-improving weighting")
    return omega
