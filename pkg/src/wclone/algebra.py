"""Finite operations on a fixed label domain {0, ..., d-1}.

Tuples over the domain are indexed lexicographically with the leftmost
coordinate most significant; that single convention fixes every table layout
and file format in the package.  A k-ary operation is stored as its value
table of length d**k in that order, so two operations are equal exactly when
their tables are equal, and the canonical order on operations of one arity is
the lexicographic order of tables.

Enumerating all d**(d**k) operations of an arity is guarded by a hard cap
(default 2**16, overridable per call or via WCLONE_OP_CAP) so that infeasible
requests fail loudly instead of hanging.
"""

from __future__ import annotations

import itertools
import os

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapExceededError

DEFAULT_OP_CAP = 2**16


def op_cap(override=None) -> int:
    """Resolve the operation-enumeration cap: explicit arg, env, or default."""
    if override is not None:
        return int(override)
    env = os.environ.get("WCLONE_OP_CAP")
    if env:
        return int(env)
    return DEFAULT_OP_CAP


def check_domain(d: int) -> None:
    if d < 2:
        raise ValueError("domain size must be at least 2, got %d" % d)


def tuple_index(entries: Sequence[int], d: int) -> int:
    """Lexicographic index of a label tuple, leftmost coordinate most significant."""
    idx = 0
    for e in entries:
        if not 0 <= e < d:
            raise ValueError("label %r out of range for domain size %d" % (e, d))
        idx = idx * d + e
    return idx


def index_tuple(idx: int, arity: int, d: int) -> tuple[int, ...]:
    """Inverse of tuple_index for the given arity."""
    if not 0 <= idx < d**arity:
        raise ValueError("index %d out of range for %d-tuples over %d labels" % (idx, arity, d))
    out = [0] * arity
    for pos in range(arity - 1, -1, -1):
        idx, out[pos] = divmod(idx, d)
    return tuple(out)


def all_tuples(d: int, arity: int) -> Iterator[tuple[int, ...]]:
    """All label tuples of the arity in tuple_index order."""
    return itertools.product(range(d), repeat=arity)


@dataclass(frozen=True)
class Operation:
    """A k-ary operation on {0..d-1}, stored as its full value table."""

    d: int
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        check_domain(self.d)
        if self.arity < 1:
            raise ValueError("operation arity must be at least 1")
        if len(self.table) != self.d**self.arity:
            raise ValueError(
                "table length %d does not match d**k = %d"
                % (len(self.table), self.d**self.arity)
            )
        if any(not 0 <= v < self.d for v in self.table):
            raise ValueError("table entry out of range for domain size %d" % self.d)

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise ValueError("expected %d arguments, got %d" % (self.arity, len(args)))
        return self.table[tuple_index(args, self.d)]

    def is_projection(self) -> bool:
        return self.projection_coordinate() is not None

    def projection_coordinate(self):
        """0-based coordinate i when this is the projection onto argument i, else None."""
        for i in range(self.arity):
            if self.table == projection(self.d, self.arity, i + 1).table:
                return i
        return None

    def sort_key(self):
        return (self.arity, self.table)

    def __repr__(self):
        return "Operation(d=%d, arity=%d, table=%s)" % (self.d, self.arity, self.table)


def projection(d: int, k: int, i: int) -> Operation:
    """The k-ary projection onto the i-th argument (1-based, 1 <= i <= k)."""
    if not 1 <= i <= k:
        raise ValueError("projection index %d out of range 1..%d" % (i, k))
    table = tuple(t[i - 1] for t in all_tuples(d, k))
    return Operation(d, k, table)


def projections(d: int, k: int) -> tuple[Operation, ...]:
    return tuple(projection(d, k, i) for i in range(1, k + 1))


@dataclass(frozen=True)
class TupleMatrix:
    """A sequence of k same-arity label tuples (the columns x_1..x_k).

    ``rows()`` is the transposed view: the i-th row collects the i-th entry of
    every column, giving a k-tuple per coordinate.
    """

    d: int
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        check_domain(self.d)
        if not self.columns:
            raise ValueError("tuple matrix needs at least one column")
        arity = len(self.columns[0])
        if arity < 1:
            raise ValueError("tuple arity must be at least 1")
        for col in self.columns:
            if len(col) != arity:
                raise ValueError("columns of a tuple matrix must share one arity")
            if any(not 0 <= v < self.d for v in col):
                raise ValueError("label out of range for domain size %d" % self.d)

    @property
    def width(self) -> int:
        return len(self.columns)

    @property
    def arity(self) -> int:
        return len(self.columns[0])

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.columns))


def apply(f: Operation, x: TupleMatrix) -> tuple[int, ...]:
    """Apply f coordinatewise to the k columns of x, yielding one m-tuple."""
    if f.d != x.d:
        raise ValueError("domain mismatch: operation d=%d, tuples d=%d" % (f.d, x.d))
    if f.arity != x.width:
        raise ValueError(
            "operation arity %d does not match column count %d" % (f.arity, x.width)
        )
    d = f.d
    table = f.table
    out = []
    for row in x.rows():
        idx = 0
        for e in row:
            idx = idx * d + e
        out.append(table[idx])
    return tuple(out)


def superpose(f: Operation, gs: Sequence[Operation]) -> Operation:
    """The superposition f[g_1,...,g_k]; all g_i share one arity and domain."""
    if len(gs) != f.arity:
        raise ValueError("expected %d inner operations, got %d" % (f.arity, len(gs)))
    if not gs:
        raise ValueError("superposition needs at least one inner operation")
    ell = gs[0].arity
    for g in gs:
        if g.d != f.d:
            raise ValueError("domain mismatch in superposition")
        if g.arity != ell:
            raise ValueError("inner operations must share one arity")
    d = f.d
    ftab = f.table
    gtabs = [g.table for g in gs]
    table = []
    for pos in range(d**ell):
        idx = 0
        for gt in gtabs:
            idx = idx * d + gt[pos]
        table.append(ftab[idx])
    return Operation(d, ell, tuple(table))


def op_count(d: int, k: int) -> int:
    return d ** (d**k)


def check_op_cap(d: int, k: int, cap=None) -> int:
    limit = op_cap(cap)
    count = op_count(d, k)
    if count > limit:
        raise CapExceededError(
            "enumerating all %d-ary operations on %d labels needs %d tables, over the cap"
            % (k, d, count),
            d=d,
            k=k,
            count=count,
            cap=limit,
        )
    return count


def enumerate_ops(d: int, k: int, cap=None) -> Iterator[Operation]:
    """All d**(d**k) k-ary operations in table-lexicographic order."""
    check_domain(d)
    check_op_cap(d, k, cap)
    for table in itertools.product(range(d), repeat=d**k):
        yield Operation(d, k, table)


class OperationSet:
    """A duplicate-free set of operations over one domain, canonically ordered.

    Iteration runs by arity, then by table lexicographically, so every
    consumer sees the same deterministic order.
    """

    def __init__(self, d: int, ops: Iterable[Operation] = ()):
        check_domain(d)
        self.d = d
        by_arity: dict[int, set[Operation]] = {}
        for op in ops:
            if op.d != d:
                raise ValueError("operation domain %d does not match set domain %d" % (op.d, d))
            by_arity.setdefault(op.arity, set()).add(op)
        self._by_arity = {
            k: tuple(sorted(v, key=lambda o: o.table)) for k, v in sorted(by_arity.items())
        }
        self._members = frozenset(op for ops_ in self._by_arity.values() for op in ops_)

    def arities(self) -> tuple[int, ...]:
        return tuple(self._by_arity)

    def of_arity(self, k: int) -> tuple[Operation, ...]:
        return self._by_arity.get(k, ())

    def __contains__(self, op: Operation) -> bool:
        return op in self._members

    def __iter__(self) -> Iterator[Operation]:
        for k in self._by_arity:
            yield from self._by_arity[k]

    def __len__(self) -> int:
        return len(self._members)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OperationSet)
            and self.d == other.d
            and self._members == other._members
        )

    def __hash__(self):
        return hash((self.d, self._members))

    def union(self, ops: Iterable[Operation]) -> "OperationSet":
        return OperationSet(self.d, itertools.chain(self, ops))

    def __repr__(self):
        sizes = {k: len(v) for k, v in self._by_arity.items()}
        return "OperationSet(d=%d, sizes=%s)" % (self.d, sizes)


def clone_closure(generators, max_arity: int, cap=None) -> OperationSet:
    """Least operation set containing all projections of arity <= max_arity
    and closed under superposition among members, restricted to those arities.

    Computed one target arity at a time: the arity-a slice of the generated
    clone is the closure of the a-ary projections under "apply one generator
    on top of a tuple of a-ary members", which covers every term because any
    member used as an outer operation is itself such a term.  Generators of
    arity above max_arity still participate as outer operations; only results
    are arity-capped.
    """
    if max_arity < 1:
        raise ValueError("max_arity must be at least 1")
    if isinstance(generators, OperationSet):
        d = generators.d
        gens = list(generators)
    else:
        gens = sorted(generators, key=Operation.sort_key)
        if not gens:
            raise ValueError("cannot infer the domain from an empty generator iterable; pass an OperationSet")
        d = gens[0].d
        for g in gens:
            if g.d != d:
                raise ValueError("generators must share one domain")
    limit = op_cap(cap)
    out: list[Operation] = []
    for a in range(1, max_arity + 1):
        known: set[Operation] = set(projections(d, a))
        frontier: set[Operation] = set(known)
        while frontier:
            fresh: set[Operation] = set()
            members = sorted(known, key=lambda o: o.table)
            for f in gens:
                for args in itertools.product(members, repeat=f.arity):
                    # Argument tuples not touching the frontier were exhausted
                    # in an earlier pass.
                    if not any(g in frontier for g in args):
                        continue
                    h = superpose(f, args)
                    if h not in known and h not in fresh:
                        fresh.add(h)
                        if len(known) + len(fresh) > limit:
                            raise CapExceededError(
                                "clone closure at arity %d exceeded the cap" % a,
                                d=d,
                                arity=a,
                                size=len(known) + len(fresh),
                                cap=limit,
                            )
            known |= fresh
            frontier = fresh
        out.extend(known)
    return OperationSet(d, out)
