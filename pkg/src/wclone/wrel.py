"""Weighted relations over a finite domain and their closure operations.

An m-ary weighted relation assigns each m-tuple an exact rational cost or
infinity; a relation is the {c, inf}-valued special case.  Tables are dense
(length d**m in tuple_index order): at workbench scale small arities keep the
tables tiny and indexing branch-free.

The operations here are exactly the generators of a weighted relational
clone: addition with argument identification, minimisation over trailing
coordinates, non-negative scaling, constant shifts, the feasibility and
optimum relations, plus the binary equality and unary empty relations.
Everything is exact; there is no tolerance anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import all_tuples, check_domain, index_tuple, tuple_index
from .rational import (
    INF,
    ZERO,
    Rat,
    ext_add,
    ext_eq,
    ext_le,
    ext_lt,
    ext_scale,
    ext_shift,
    is_inf,
)


@dataclass(frozen=True)
class WeightedRelation:
    """An m-ary mapping from label tuples to exact rationals or infinity."""

    d: int
    arity: int
    table: tuple

    def __post_init__(self):
        check_domain(self.d)
        if self.arity < 1:
            raise ValueError("weighted relation arity must be at least 1")
        if len(self.table) != self.d**self.arity:
            raise ValueError(
                "table length %d does not match d**m = %d"
                % (len(self.table), self.d**self.arity)
            )

    def value(self, t: Sequence[int]):
        if len(t) != self.arity:
            raise ValueError("expected a %d-tuple" % self.arity)
        return self.table[tuple_index(t, self.d)]

    def feas_tuples(self) -> tuple[tuple[int, ...], ...]:
        """Finite-cost tuples in tuple_index order."""
        return tuple(
            index_tuple(i, self.arity, self.d)
            for i, v in enumerate(self.table)
            if not is_inf(v)
        )

    def min_finite(self):
        """Least finite cost, or None when every entry is infinite."""
        best = None
        for v in self.table:
            if is_inf(v):
                continue
            if best is None or v < best:
                best = v
        return best

    def max_finite(self):
        best = None
        for v in self.table:
            if is_inf(v):
                continue
            if best is None or v > best:
                best = v
        return best

    def is_relation(self) -> bool:
        """True when the finite entries all carry one constant cost."""
        return self.min_finite() == self.max_finite()

    def __repr__(self):
        return "WeightedRelation(d=%d, arity=%d, table=%s)" % (
            self.d,
            self.arity,
            tuple(str(v) for v in self.table),
        )


def wrel_from_values(d: int, arity: int, values) -> WeightedRelation:
    """Build a weighted relation, coercing ints to exact rationals."""
    table = tuple(v if is_inf(v) else Rat(v) for v in values)
    return WeightedRelation(d, arity, table)


def constant_relation(d: int, arity: int, value) -> WeightedRelation:
    v = value if is_inf(value) else Rat(value)
    return WeightedRelation(d, arity, (v,) * d**arity)


def equality_relation(d: int) -> WeightedRelation:
    """Binary equality: cost 0 on the diagonal, infinity elsewhere."""
    table = tuple(ZERO if x == y else INF for x, y in all_tuples(d, 2))
    return WeightedRelation(d, 2, table)


def empty_relation(d: int) -> WeightedRelation:
    """The unary relation with no feasible labels."""
    return WeightedRelation(d, 1, (INF,) * d)


def feas(gamma: WeightedRelation) -> WeightedRelation:
    """The feasibility relation: 0 where gamma is finite, infinity elsewhere.

    Coincides with scale(gamma, 0) under the 0*inf = inf convention.
    """
    table = tuple(INF if is_inf(v) else ZERO for v in gamma.table)
    return WeightedRelation(gamma.d, gamma.arity, table)


def opt(gamma: WeightedRelation) -> WeightedRelation:
    """The relation of minimum-cost tuples; all-infinite input stays all-infinite."""
    best = gamma.min_finite()
    if best is None:
        return WeightedRelation(gamma.d, gamma.arity, (INF,) * len(gamma.table))
    table = tuple(ZERO if (not is_inf(v) and v == best) else INF for v in gamma.table)
    return WeightedRelation(gamma.d, gamma.arity, table)


def _check_index_map(positions: Sequence[int], arity: int, r: int, label: str) -> None:
    if len(positions) != arity:
        raise ValueError("%s must list %d argument positions" % (label, arity))
    for p in positions:
        if not 0 <= p < r:
            raise ValueError("%s entry %d out of range 0..%d" % (label, p, r - 1))


def add(
    gamma1: WeightedRelation,
    sigma: Sequence[int],
    gamma2: WeightedRelation,
    tau: Sequence[int],
    r: int,
) -> WeightedRelation:
    """Pointwise sum gamma1(x[sigma]) + gamma2(x[tau]) as an r-ary relation.

    sigma and tau map each argument of gamma1 / gamma2 to a position in
    0..r-1 (repetition allowed), identifying arguments of the result.
    """
    if gamma1.d != gamma2.d:
        raise ValueError("addition requires one shared domain")
    if r < 1:
        raise ValueError("result arity must be at least 1")
    _check_index_map(sigma, gamma1.arity, r, "sigma")
    _check_index_map(tau, gamma2.arity, r, "tau")
    d = gamma1.d
    table = []
    for x in all_tuples(d, r):
        v1 = gamma1.table[tuple_index(tuple(x[p] for p in sigma), d)]
        v2 = gamma2.table[tuple_index(tuple(x[p] for p in tau), d)]
        table.append(ext_add(v1, v2))
    return WeightedRelation(d, r, tuple(table))


def minimise(gamma: WeightedRelation, over_last: int) -> WeightedRelation:
    """Minimum over the trailing ``over_last`` coordinates."""
    if over_last < 1:
        raise ValueError("must minimise over at least one coordinate")
    if over_last >= gamma.arity:
        raise ValueError(
            "cannot minimise %d of %d coordinates" % (over_last, gamma.arity)
        )
    d = gamma.d
    r = gamma.arity - over_last
    block = d**over_last
    table = []
    for i in range(d**r):
        chunk = gamma.table[i * block : (i + 1) * block]
        best = chunk[0]
        for v in chunk[1:]:
            if ext_lt(v, best):
                best = v
        table.append(best)
    return WeightedRelation(d, r, tuple(table))


def scale(gamma: WeightedRelation, c) -> WeightedRelation:
    """Entrywise c * gamma for rational c >= 0 (0 * inf = inf)."""
    factor = Rat(c)
    if factor < 0:
        raise ValueError("scale factor must be non-negative")
    table = tuple(ext_scale(factor, v) for v in gamma.table)
    return WeightedRelation(gamma.d, gamma.arity, table)


def shift(gamma: WeightedRelation, c) -> WeightedRelation:
    """Entrywise gamma + c for rational c; infinite entries stay infinite."""
    delta = Rat(c)
    table = tuple(ext_shift(v, delta) for v in gamma.table)
    return WeightedRelation(gamma.d, gamma.arity, table)


def normalize_relation(gamma: WeightedRelation) -> WeightedRelation:
    """Shift a {c, inf}-valued table to the canonical {0, inf} representative."""
    if not gamma.is_relation():
        raise ValueError("not a relation: finite costs are not constant")
    best = gamma.min_finite()
    if best is None or best == 0:
        return gamma
    return shift(gamma, -best)


def tables_equal(a: WeightedRelation, b: WeightedRelation) -> bool:
    """Exact equality of two weighted relations."""
    return (
        a.d == b.d
        and a.arity == b.arity
        and all(ext_eq(x, y) for x, y in zip(a.table, b.table))
    )


def argmin_tuples(gamma: WeightedRelation) -> tuple[tuple[int, ...], ...]:
    """Tuples attaining the least finite cost, in tuple_index order."""
    return opt(gamma).feas_tuples()


class Language:
    """A named collection of weighted relations over one domain.

    Names are unique; iteration is by sorted name so that every row and
    generator order derived from a language is reproducible.
    """

    def __init__(self, d: int, relations: dict[str, WeightedRelation] | None = None):
        check_domain(d)
        self.d = d
        rels = dict(relations or {})
        for name, rel in rels.items():
            if not isinstance(name, str) or not name:
                raise ValueError("relation names must be non-empty strings")
            if rel.d != d:
                raise ValueError(
                    "relation %r has domain %d, language has %d" % (name, rel.d, d)
                )
        self._relations = {name: rels[name] for name in sorted(rels)}

    def names(self) -> tuple[str, ...]:
        return tuple(self._relations)

    def __getitem__(self, name: str) -> WeightedRelation:
        return self._relations[name]

    def __contains__(self, name: str) -> bool:
        return name in self._relations

    def __len__(self) -> int:
        return len(self._relations)

    def items(self):
        return self._relations.items()

    def relations(self) -> tuple[WeightedRelation, ...]:
        return tuple(self._relations.values())

    def with_relation(self, name: str, rel: WeightedRelation) -> "Language":
        updated = dict(self._relations)
        updated[name] = rel
        return Language(self.d, updated)

    def __eq__(self, other):
        return (
            isinstance(other, Language)
            and self.d == other.d
            and self.names() == other.names()
            and all(tables_equal(self[n], other[n]) for n in self.names())
        )

    def __repr__(self):
        return "Language(d=%d, names=%s)" % (self.d, list(self._relations))
