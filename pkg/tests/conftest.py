"""Shared brute-force oracles and random-case generators.

The oracles re-implement definitions with plain loops and no reuse of the
library's evaluation paths, so tests compare two genuinely independent
computations.
"""

from __future__ import annotations

import itertools
import random

import pytest

from wclone.algebra import Operation, projections
from wclone.rational import INF, Rat, is_inf
from wclone.wops import Weighting
from wclone.wrel import Language, WeightedRelation


def op_value(op: Operation, args) -> int:
    """Direct table lookup via explicit radix arithmetic (oracle-side)."""
    idx = 0
    for a in args:
        idx = idx * op.d + a
    return op.table[idx]


def oracle_apply(op: Operation, columns):
    """Coordinatewise application, written independently of algebra.apply."""
    m = len(columns[0])
    return tuple(op_value(op, [col[i] for col in columns]) for i in range(m))


def oracle_feas(gamma: WeightedRelation):
    out = []
    for i, v in enumerate(gamma.table):
        if not is_inf(v):
            digits = []
            idx = i
            for _ in range(gamma.arity):
                digits.append(idx % gamma.d)
                idx //= gamma.d
            out.append(tuple(reversed(digits)))
    return out


def oracle_is_polymorphism(op: Operation, gamma: WeightedRelation) -> bool:
    feas = oracle_feas(gamma)
    feas_set = set(feas)
    for cols in itertools.product(feas, repeat=op.arity):
        if oracle_apply(op, cols) not in feas_set:
            return False
    return True


def oracle_is_wpol(omega: Weighting, gamma: WeightedRelation) -> bool:
    """Brute-force weighted-polymorphism test straight from the definition."""
    for op, w in omega.items():
        if w > 0 and not oracle_is_polymorphism(op, gamma):
            return False
    feas = oracle_feas(gamma)
    for cols in itertools.product(feas, repeat=omega.arity):
        total = Rat(0)
        for op, w in omega.items():
            value = gamma.value(oracle_apply(op, cols))
            if is_inf(value):
                return False
            total += w * value
        if total > 0:
            return False
    return True


def oracle_gadget(inst, variables):
    """Projection by direct enumeration of all assignments."""
    from wclone.vcsp import evaluate

    d = inst.d
    r = len(variables)
    best = {}
    for s in itertools.product(range(d), repeat=inst.n):
        value = evaluate(inst, s)
        if is_inf(value):
            continue
        key = tuple(s[v] for v in variables)
        if key not in best or value < best[key]:
            best[key] = value
    table = []
    for t in itertools.product(range(d), repeat=r):
        table.append(best.get(t, INF))
    return WeightedRelation(d, r, tuple(table))


# -- random generators --------------------------------------------------------


FINITE_POOL = [Rat(0), Rat(0), Rat(1), Rat(2), Rat(3), Rat(1, 2), Rat(-1)]


def random_wrel(rng: random.Random, d: int, arity: int, inf_prob=0.3, pool=None) -> WeightedRelation:
    pool = pool or FINITE_POOL
    table = tuple(
        INF if rng.random() < inf_prob else rng.choice(pool) for _ in range(d**arity)
    )
    return WeightedRelation(d, arity, table)


def random_language(rng: random.Random, d: int, size: int, max_arity=2, inf_prob=0.3) -> Language:
    rels = {}
    for i in range(size):
        arity = rng.randint(1, max_arity)
        rels["g%d" % i] = random_wrel(rng, d, arity, inf_prob)
    return Language(d, rels)


def random_proper_weighting(rng: random.Random, d: int, k: int, max_support=3) -> Weighting:
    """A random proper weighting: negative mass on projections, positive elsewhere."""
    projs = projections(d, k)
    all_tables = list(itertools.product(range(d), repeat=d**k))
    terms = {}
    weights = []
    for _ in range(rng.randint(1, max_support)):
        table = rng.choice(all_tables)
        op = Operation(d, k, table)
        if op.is_projection():
            continue
        w = rng.choice([Rat(1), Rat(2), Rat(1, 2)])
        terms[op] = terms.get(op, Rat(0)) + w
        weights.append(w)
    total = sum(weights, Rat(0))
    if total:
        split = rng.randint(1, len(projs))
        chosen = rng.sample(list(projs), split)
        share = total / split
        for p in chosen:
            terms[p] = terms.get(p, Rat(0)) - share
    return Weighting(d, k, terms)


@pytest.fixture
def rng():
    return random.Random(20260810)
