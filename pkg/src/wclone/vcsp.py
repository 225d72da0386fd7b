"""VCSP instances, exhaustive solving, and expressibility gadgets.

An instance is a variable count plus a list of constraints, each a named
relation from an attached language applied to a scope of variable indices
(0-based).  The solver enumerates all d**n assignments exactly, guarded by a
cap, and breaks objective ties toward the lexicographically smallest
assignment so golden outputs are stable.

``gadget_project`` is the expressibility primitive: projecting an instance
onto a list of variables (repetitions allowed) defines a new weighted
relation, with the minimum over an empty assignment set taken as infinity.
"""

from __future__ import annotations

import itertools

from dataclasses import dataclass
from typing import Sequence

from .errors import CapExceededError
from .rational import INF, ZERO, ext_add, ext_lt, ext_scale, is_inf
from .wrel import Language, WeightedRelation

DEFAULT_ASSIGNMENT_CAP = 2**20


@dataclass(frozen=True)
class Constraint:
    relation: str
    scope: tuple[int, ...]


@dataclass(frozen=True)
class VcspInstance:
    """Sum-of-constraints objective over n variables."""

    n: int
    language: Language
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("instance needs at least one variable")
        for c in self.constraints:
            if c.relation not in self.language:
                raise ValueError("constraint uses unknown relation %r" % c.relation)
            rel = self.language[c.relation]
            if len(c.scope) != rel.arity:
                raise ValueError(
                    "scope length %d does not match arity %d of %r"
                    % (len(c.scope), rel.arity, c.relation)
                )
            for v in c.scope:
                if not 0 <= v < self.n:
                    raise ValueError("variable index %d out of range 0..%d" % (v, self.n - 1))

    @property
    def d(self) -> int:
        return self.language.d


def instance(n: int, language: Language, constraints) -> VcspInstance:
    """Convenience constructor accepting (name, scope) pairs."""
    return VcspInstance(
        n, language, tuple(Constraint(name, tuple(scope)) for name, scope in constraints)
    )


def _group_list(inst: VcspInstance):
    """Distinct (table, scope, scope radix, multiplicity) tuples.

    Duplicate constraints are frequent after reductions; grouping them turns a
    thousand copies into one multiplication per assignment.
    """
    d = inst.d
    counts: dict[tuple, int] = {}
    for c in inst.constraints:
        key = (c.relation, c.scope)
        counts[key] = counts.get(key, 0) + 1
    out = []
    for (name, scope), mult in counts.items():
        rel = inst.language[name]
        radix = tuple(d ** (rel.arity - 1 - j) for j in range(rel.arity))
        out.append((rel.table, scope, radix, mult))
    return out


def evaluate(inst: VcspInstance, assignment: Sequence[int]):
    """Exact objective value of one assignment."""
    if len(assignment) != inst.n:
        raise ValueError("assignment length %d, expected %d" % (len(assignment), inst.n))
    d = inst.d
    for v in assignment:
        if not 0 <= v < d:
            raise ValueError("label %r out of range for domain size %d" % (v, d))
    total = ZERO
    for table, scope, radix, mult in _group_list(inst):
        idx = 0
        for pos, r in zip(scope, radix):
            idx += assignment[pos] * r
        v = table[idx]
        if is_inf(v):
            return INF
        total = total + v * mult
    return total


def evaluate_scaled(inst: VcspInstance, scalings, assignment: Sequence[int]):
    """Objective of the scaled instance sum_i c_i * gamma_i, with 0 * inf = inf."""
    if len(scalings) != len(inst.constraints):
        raise ValueError("need one scaling per constraint")
    if len(assignment) != inst.n:
        raise ValueError("assignment length %d, expected %d" % (len(assignment), inst.n))
    total = ZERO
    d = inst.d
    for i, c in enumerate(inst.constraints):
        rel = inst.language[c.relation]
        idx = 0
        for pos in c.scope:
            idx = idx * d + assignment[pos]
        v = ext_scale(scalings[i], rel.table[idx])
        if is_inf(v):
            return INF
        total = total + v
    return total


def _check_assignment_cap(inst: VcspInstance, cap) -> None:
    limit = DEFAULT_ASSIGNMENT_CAP if cap is None else int(cap)
    count = inst.d**inst.n
    if count > limit:
        raise CapExceededError(
            "solving needs %d assignments, over the cap" % count,
            d=inst.d,
            n=inst.n,
            count=count,
            cap=limit,
        )


def solve(inst: VcspInstance, cap=None):
    """Exact optimum and its lexicographically smallest optimal assignment.

    Returns (optimum, argmin); argmin is None when the optimum is infinite.
    """
    _check_assignment_cap(inst, cap)
    groups = _group_list(inst)
    d = inst.d
    best = INF
    best_assignment = None
    for s in itertools.product(range(d), repeat=inst.n):
        total = ZERO
        for table, scope, radix, mult in groups:
            idx = 0
            for pos, r in zip(scope, radix):
                idx += s[pos] * r
            v = table[idx]
            if is_inf(v):
                total = INF
                break
            total = total + v * mult
        if ext_lt(total, best):
            best = total
            best_assignment = s
    return best, best_assignment


def delta(inst: VcspInstance, cap=None):
    """Least gap between two distinct finite objective values, or None.

    None means fewer than two distinct finite values exist, i.e. the gap is
    undefined.
    """
    _check_assignment_cap(inst, cap)
    groups = _group_list(inst)
    d = inst.d
    values = set()
    for s in itertools.product(range(d), repeat=inst.n):
        total = ZERO
        for table, scope, radix, mult in groups:
            idx = 0
            for pos, r in zip(scope, radix):
                idx += s[pos] * r
            v = table[idx]
            if is_inf(v):
                total = INF
                break
            total = total + v * mult
        if not is_inf(total):
            values.add(total)
    if len(values) < 2:
        return None
    ordered = sorted(values)
    return min(b - a for a, b in zip(ordered, ordered[1:]))


def gadget_project(inst: VcspInstance, variables: Sequence[int], cap=None) -> WeightedRelation:
    """Project the instance onto a variable list, defining a weighted relation.

    The list may repeat variables; tuples inconsistent with the repetitions
    get an empty assignment set and hence cost infinity.
    """
    if not variables:
        raise ValueError("projection needs at least one variable")
    for v in variables:
        if not 0 <= v < inst.n:
            raise ValueError("variable index %d out of range 0..%d" % (v, inst.n - 1))
    _check_assignment_cap(inst, cap)
    d = inst.d
    r = len(variables)
    groups = _group_list(inst)
    table = [INF] * d**r
    radix_out = [d ** (r - 1 - j) for j in range(r)]
    for s in itertools.product(range(d), repeat=inst.n):
        total = ZERO
        for tab, scope, radix, mult in groups:
            idx = 0
            for pos, rr in zip(scope, radix):
                idx += s[pos] * rr
            v = tab[idx]
            if is_inf(v):
                total = INF
                break
            total = total + v * mult
        if is_inf(total):
            continue
        out_idx = 0
        for pos, rr in zip(variables, radix_out):
            out_idx += s[pos] * rr
        if ext_lt(total, table[out_idx]):
            table[out_idx] = total
    return WeightedRelation(d, r, tuple(table))
