"""Executable counterexample families on the three-element domain.

These constructions revolve around an irrational threshold t that no exact
rational value can hit.  The workbench never materializes t: every statement
"... for the irrational t" is re-expressed as a pair of one-sided rational
statements at the endpoints of a bracket u < t < v, which is also how the
facts are consumed mathematically.  The default brackets come from
continued-fraction convergents of sqrt(2), a convenient irrational with
well-known convergents; nothing depends on that particular choice.

Two families are provided:

* unary weighted relations mu_minus(u) = (0, -1, -1-u) and
  mu_plus(v) = (0, 1, 1+v), whose simultaneous improvement forces, for every
  point x and any improving weighting, v * s_2 <= s_0 <= u * s_2 where s_a
  sums the weights of operations mapping x to a.  ``narrowing_check``
  certifies by LP infeasibility that neither one-sided bound can be violated
  strictly, and brackets nest: tighter brackets admit fewer weightings.

* a weighting family (one base weighting plus one unary and one binary
  member parameterized by the bracket) satisfying t*s_2 <= s_0 at both
  endpoints for every point, together with an escape witness: a weighting
  that improves everything the family improves yet breaks the defining
  inequality at the point x = (1).
"""

from __future__ import annotations

import itertools

from dataclasses import dataclass

from .algebra import Operation, TupleMatrix, all_tuples, projection
from .errors import CapExceededError
from .improve import improvement_rows, weighted_polymorphism_constraints
from .lp import LinearConstraint, LpFeasible, check_farkas, lp_feasible
from .rational import ONE, ZERO, Rat, is_inf
from .wops import Weighting
from .wrel import Language, WeightedRelation, add, equality_relation, wrel_from_values


@dataclass(frozen=True)
class BracketedParam:
    """A rational bracket 0 < lower < upper around an (unrepresented) irrational."""

    lower: object
    upper: object
    description: str = ""

    def __post_init__(self):
        low = Rat(self.lower)
        high = Rat(self.upper)
        if not 0 < low < high:
            raise ValueError("bracket must satisfy 0 < lower < upper")
        object.__setattr__(self, "lower", low)
        object.__setattr__(self, "upper", high)


def sqrt2_bracket(level: int) -> BracketedParam:
    """Bracket of sqrt(2) from its continued-fraction convergents.

    Level 0 is (1, 3/2); each level consumes the next below/above convergent
    pair: level 1 = (7/5, 17/12), level 2 = (41/29, 99/70), ...
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    p_prev, q_prev = 1, 1  # convergent 1/1
    p_cur, q_cur = 3, 2  # convergent 3/2
    lo, hi = Rat(1), Rat(3, 2)
    for _ in range(level):
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, 2 * p_cur + p_prev, 2 * q_cur + q_prev
        lo = Rat(p_cur, q_cur)
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, 2 * p_cur + p_prev, 2 * q_cur + q_prev
        hi = Rat(p_cur, q_cur)
    return BracketedParam(lo, hi, "sqrt(2) convergents, level %d" % level)


def mu_minus(u) -> WeightedRelation:
    """Unary (0, -1, -1-u) on the three-element domain, for rational u."""
    uu = Rat(u)
    return wrel_from_values(3, 1, (ZERO, -ONE, -ONE - uu))


def mu_plus(v) -> WeightedRelation:
    """Unary (0, 1, 1+v) on the three-element domain, for rational v."""
    vv = Rat(v)
    return wrel_from_values(3, 1, (ZERO, ONE, ONE + vv))


def slope_condition_holds(rho: WeightedRelation, t) -> bool:
    """The membership inequality rho(2)-rho(0) >= (1+t)*(rho(1)-rho(0)).

    Vacuously true unless all three values are finite.  Linear in t, so
    holding at both endpoints of a bracket covers the whole interval.
    """
    if rho.d != 3 or rho.arity != 1:
        raise ValueError("the slope condition concerns unary relations on three labels")
    a, b, c = rho.table
    if is_inf(a) or is_inf(b) or is_inf(c):
        return True
    return c - a >= (ONE + Rat(t)) * (b - a)


def gamma_family_member(bracket: BracketedParam, rhos, pairs) -> WeightedRelation:
    """Sum of unary members rho_i(x_i) plus equality constraints phi_=(x_i, x_j).

    ``pairs`` must be an equivalence relation on argument positions 0..r-1
    (reflexive pairs may be omitted; symmetry and transitivity are checked).
    Every rho_i must satisfy the slope condition at both bracket endpoints.
    """
    rhos = list(rhos)
    r = len(rhos)
    if r < 1:
        raise ValueError("need at least one unary member")
    for i, rho in enumerate(rhos):
        if rho.d != 3 or rho.arity != 1:
            raise ValueError("member %d is not unary on three labels" % i)
        for t in (bracket.lower, bracket.upper):
            if not slope_condition_holds(rho, t):
                raise ValueError(
                    "member %d violates the slope condition at endpoint %s" % (i, t)
                )
    closure = {(i, i) for i in range(r)}
    for i, j in pairs:
        if not (0 <= i < r and 0 <= j < r):
            raise ValueError("pair (%d, %d) out of range" % (i, j))
        closure.add((i, j))
        closure.add((j, i))
    # Transitive closure, then check the input named every implied pair.
    changed = True
    while changed:
        changed = False
        for (a, b), (c, dd) in itertools.product(tuple(closure), repeat=2):
            if b == c and (a, dd) not in closure:
                closure.add((a, dd))
                changed = True
    given = {(i, i) for i in range(r)} | {(i, j) for i, j in pairs} | {(j, i) for i, j in pairs}
    if closure != given:
        raise ValueError("pairs are not an equivalence relation (missing %s)"
                         % sorted(closure - given))
    # Fold gamma(x) = sum_i rho_i(x_i), then add one equality per named pair.
    gamma = rhos[0]
    for i in range(1, r):
        gamma = add(gamma, tuple(range(i)), rhos[i], (i,), i + 1)
    eq = equality_relation(3)
    identity = tuple(range(r))
    for i, j in sorted({(min(i, j), max(i, j)) for i, j in pairs if i != j}):
        gamma = add(gamma, identity, eq, (i, j), r)
    return gamma


@dataclass(frozen=True)
class NarrowingPoint:
    """Infeasibility certificates for one point x: neither strict violation is possible."""

    x: tuple
    upper_farkas: tuple  # no improving weighting has s_0 - u*s_2 >= 1
    lower_farkas: tuple  # none has v*s_2 - s_0 >= 1


@dataclass(frozen=True)
class NarrowingReport:
    bracket: BracketedParam
    k: int
    points: tuple
    verified: bool


def _improving_lp_parts(bracket: BracketedParam, k: int, cap=None):
    lang = Language(3, {"lower": mu_minus(bracket.lower), "upper": mu_plus(bracket.upper)})
    basis, rows = improvement_rows(lang, k, cap)
    basis_ops = basis.of_arity(k)
    constraints, free = weighted_polymorphism_constraints(basis_ops, rows)
    return lang, basis_ops, constraints, free


def _s_coeffs(basis_ops, x, label):
    return [ONE if op.table[_point_index(op, x)] == label else ZERO for op in basis_ops]


def _point_index(op: Operation, x) -> int:
    idx = 0
    for e in x:
        idx = idx * op.d + e
    return idx


def narrowing_check(bracket: BracketedParam, k: int = 1, cap=None) -> NarrowingReport:
    """Certify that improving both bracket relations pins s_0 between v*s_2 and u*s_2.

    For every x in D^k, two LPs ask for a proper weighting improving both
    relations with s_0 - u*s_2 >= 1 (resp. v*s_2 - s_0 >= 1); both must be
    infeasible, and each Farkas witness is re-checked independently.
    """
    u, v = bracket.lower, bracket.upper
    lang, basis_ops, base_constraints, free = _improving_lp_parts(bracket, k, cap)
    n = len(basis_ops)
    points = []
    verified = True
    for x in all_tuples(3, k):
        s0 = _s_coeffs(basis_ops, x, 0)
        s2 = _s_coeffs(basis_ops, x, 2)
        upper_row = tuple(a - u * b for a, b in zip(s0, s2))
        lower_row = tuple(v * b - a for a, b in zip(s0, s2))
        certs = []
        for row in (upper_row, lower_row):
            constraints = base_constraints + [LinearConstraint(row, ">=", ONE)]
            res = lp_feasible(n, constraints, free_vars=free)
            if isinstance(res, LpFeasible):
                raise AssertionError(
                    "a strict violation is feasible at x=%s; the bracket argument fails" % (x,)
                )
            certs.append(res.farkas)
            if not check_farkas(n, constraints, res.farkas, free_vars=free):
                verified = False
        points.append(NarrowingPoint(x, certs[0], certs[1]))
    return NarrowingReport(bracket, k, tuple(points), verified)


def improving_weightings_sample(bracket: BracketedParam, k: int = 1, cap=None):
    """One feasible improving weighting per basis operation (when one exists).

    Used to probe the feasible cone, e.g. for bracket-monotonicity tests:
    every weighting improving a tighter bracket's pair improves a looser
    one's.
    """
    from .improve import find_weighted_polymorphism

    lang, basis_ops, _, _ = _improving_lp_parts(bracket, k, cap)
    out = []
    for op in basis_ops:
        found = find_weighted_polymorphism(lang, k, require_positive=op, cap=cap)
        if found is not None:
            out.append(found)
    return out


@dataclass(frozen=True)
class OmegaFamily:
    """The bracketed weighting family and its escape witness.

    ``base`` pulls every point toward label 0; ``unary_upper`` uses the upper
    endpoint v, ``binary_lower`` the lower endpoint u.  ``escape_witness``
    improves every relation the family improves but violates the family
    inequality t*s_2 <= s_0 at x = (1) for every positive t.
    """

    bracket: BracketedParam
    const0: Operation
    mid_down: Operation
    mid_up: Operation
    top_pair: Operation
    base: Weighting
    unary_upper: Weighting
    binary_lower: Weighting
    escape_witness: Weighting
    violation_point: tuple


def family_inequality_holds(omega: Weighting, t) -> bool:
    """t * s_2(x) <= s_0(x) for every x, where s_a sums weights with f(x) = a."""
    tt = Rat(t)
    k = omega.arity
    for x in all_tuples(3, k):
        s0 = ZERO
        s2 = ZERO
        for op, w in omega.items():
            label = op.table[_point_index(op, x)]
            if label == 0:
                s0 = s0 + w
            elif label == 2:
                s2 = s2 + w
        if tt * s2 > s0:
            return False
    return True


def omega_family(bracket: BracketedParam) -> OmegaFamily:
    """Construct the family at the bracket endpoints and verify each member."""
    u, v = bracket.lower, bracket.upper
    e11 = projection(3, 1, 1)
    e12 = projection(3, 2, 1)
    e22 = projection(3, 2, 2)
    const0 = Operation(3, 1, (0, 0, 0))
    mid_down = Operation(3, 1, (0, 0, 2))
    mid_up = Operation(3, 1, (0, 2, 2))
    # Binary: 1 on (0,2), 2 on (2,2), 0 elsewhere.
    table = []
    for x, y in all_tuples(3, 2):
        if (x, y) == (0, 2):
            table.append(1)
        elif (x, y) == (2, 2):
            table.append(2)
        else:
            table.append(0)
    top_pair = Operation(3, 2, tuple(table))
    base = Weighting(3, 1, {e11: -ONE, const0: ONE})
    unary_upper = Weighting(3, 1, {e11: -(ONE + v), mid_down: v, mid_up: ONE})
    binary_lower = Weighting(3, 2, {e12: -u, e22: -ONE, top_pair: ONE + u})
    for name, member in (("base", base), ("unary_upper", unary_upper), ("binary_lower", binary_lower)):
        for t in (u, v):
            if not family_inequality_holds(member, t):
                raise AssertionError("family member %s fails the inequality at t=%s" % (name, t))
    escape = Weighting(3, 1, {e11: -ONE, mid_up: ONE})
    if family_inequality_holds(escape, u) or family_inequality_holds(escape, v):
        raise AssertionError("the escape witness unexpectedly satisfies the inequality")
    return OmegaFamily(
        bracket=bracket,
        const0=const0,
        mid_down=mid_down,
        mid_up=mid_up,
        top_pair=top_pair,
        base=base,
        unary_upper=unary_upper,
        binary_lower=binary_lower,
        escape_witness=escape,
        violation_point=(1,),
    )
