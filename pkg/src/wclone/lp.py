"""Exact-rational linear programming with self-verifying certificates.

A dense two-phase primal simplex over exact rationals, pivoting by Bland's
rule (lowest eligible index for both the entering column and, among ratio
ties, the leaving basic variable), which guarantees termination without any
tolerance machinery.  Phase 1 drives artificial variables to zero; a positive
phase-1 optimum yields a Farkas infeasibility witness read off the final cost
row.

The solver is untrusted: every answer can be re-checked by the independent
routines at the bottom (``check_feasible_point``, ``check_farkas``,
``check_cone_decision``), which share no code with the pivoting loop.
``cone_membership`` wraps the feasibility question "is the target a
non-negative combination of the generators" and re-verifies whichever branch
comes back before returning it.

Farkas convention for a constraint list over variables x (non-negative unless
listed free): the witness y has one entry per constraint with

* y_i <= 0 on "<=" rows, y_i >= 0 on ">=" rows, y_i free on "=" rows,
* sum_i y_i * a_i <= 0 entrywise on non-negative variables, = 0 on free ones,
* sum_i y_i * b_i > 0,

which makes the system visibly unsatisfiable: any feasible x would give
0 >= (sum_i y_i a_i) . x >= sum_i y_i b_i > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InternalCheckError
from .rational import ONE, ZERO, Rat


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: tuple
    sense: str
    rhs: object

    def __post_init__(self):
        if self.sense not in ("<=", "=", ">="):
            raise ValueError("constraint sense must be one of <=, =, >=")


def linear_constraint(coeffs, sense, rhs) -> LinearConstraint:
    return LinearConstraint(tuple(Rat(c) for c in coeffs), sense, Rat(rhs))


@dataclass(frozen=True)
class LpFeasible:
    x: tuple

    status = "feasible"


@dataclass(frozen=True)
class LpOptimal:
    x: tuple
    value: object

    status = "optimal"


@dataclass(frozen=True)
class LpInfeasible:
    farkas: tuple

    status = "infeasible"


@dataclass(frozen=True)
class LpUnbounded:
    x: tuple
    ray: tuple

    status = "unbounded"


class _Tableau:
    """Standard-form simplex state: rows * cols matrix, rhs >= 0, basis map."""

    def __init__(self, rows, rhs, ncols, art_start):
        self.rows = rows
        self.rhs = rhs
        self.ncols = ncols
        self.art_start = art_start
        self.basis = [-1] * len(rows)
        self.cost = [ZERO] * ncols
        self.banned = [False] * ncols

    def pivot(self, pr: int, pc: int) -> None:
        rows = self.rows
        prow = rows[pr]
        piv = prow[pc]
        if piv != ONE:
            inv = ONE / piv
            prow = [v * inv if v else v for v in prow]
            rows[pr] = prow
            self.rhs[pr] = self.rhs[pr] * inv
        prhs = self.rhs[pr]
        for i in range(len(rows)):
            if i == pr:
                continue
            f = rows[i][pc]
            if f:
                row = rows[i]
                rows[i] = [a - f * b if b else a for a, b in zip(row, prow)]
                if prhs:
                    self.rhs[i] = self.rhs[i] - f * prhs
        f = self.cost[pc]
        if f:
            self.cost = [a - f * b if b else a for a, b in zip(self.cost, prow)]
        left = self.basis[pr]
        if left >= self.art_start:
            self.banned[left] = True
        self.basis[pr] = pc

    def enter_column(self, allow) -> int | None:
        cost = self.cost
        for j in range(self.ncols):
            if cost[j] < 0 and allow(j):
                return j
        return None

    def leave_row(self, pc: int) -> int | None:
        best_ratio = None
        best_row = None
        best_var = None
        for i, row in enumerate(self.rows):
            a = row[pc]
            if a > 0:
                ratio = self.rhs[i] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < best_var)
                ):
                    best_ratio = ratio
                    best_row = i
                    best_var = self.basis[i]
        return best_row

    def run(self, allow) -> int | None:
        """Bland iterations until optimal (returns None) or unbounded (column)."""
        while True:
            pc = self.enter_column(allow)
            if pc is None:
                return None
            pr = self.leave_row(pc)
            if pr is None:
                return pc
            self.pivot(pr, pc)


def lp_feasible(
    num_vars: int,
    constraints: Sequence[LinearConstraint],
    objective=None,
    maximize: bool = False,
    free_vars: Sequence[int] = (),
):
    """Solve the constraint system exactly.

    Without an objective returns LpFeasible or LpInfeasible; with one returns
    LpOptimal, LpUnbounded, or LpInfeasible.  Variables are non-negative
    unless listed in free_vars.  Identical input (including ordering) yields
    identical output.
    """
    if num_vars < 0:
        raise ValueError("num_vars must be non-negative")
    free = set(free_vars)
    for j in free:
        if not 0 <= j < num_vars:
            raise ValueError("free variable index %d out of range" % j)
    for c in constraints:
        if len(c.coeffs) != num_vars:
            raise ValueError(
                "constraint has %d coefficients, expected %d" % (len(c.coeffs), num_vars)
            )

    # Standard-form columns: per variable one column (free: plus then minus),
    # then one slack per inequality row, then artificials.
    col_of_var = []
    ncols = 0
    for j in range(num_vars):
        if j in free:
            col_of_var.append((ncols, ncols + 1))
            ncols += 2
        else:
            col_of_var.append((ncols, None))
            ncols += 1
    nstruct = ncols
    slack_col = [None] * len(constraints)
    for i, c in enumerate(constraints):
        if c.sense != "=":
            slack_col[i] = ncols
            ncols += 1

    flips = []
    rows = []
    rhs = []
    for i, c in enumerate(constraints):
        flip = -ONE if Rat(c.rhs) < 0 else ONE
        flips.append(flip)
        row = [ZERO] * ncols
        for j, a in enumerate(c.coeffs):
            if a:
                v = flip * Rat(a)
                plus, minus = col_of_var[j]
                row[plus] = v
                if minus is not None:
                    row[minus] = -v
        if slack_col[i] is not None:
            row[slack_col[i]] = flip * (ONE if c.sense == "<=" else -ONE)
        rows.append(row)
        rhs.append(flip * Rat(c.rhs))

    # Initial basis: a slack with coefficient +1 where available, otherwise an
    # artificial column (appended below).
    art_col = [None] * len(constraints)
    art_start = ncols
    for i in range(len(constraints)):
        sc = slack_col[i]
        if sc is None or rows[i][sc] != ONE:
            art_col[i] = ncols
            ncols += 1
    for row in rows:
        row.extend([ZERO] * (ncols - len(row)))
    tab = _Tableau(rows, rhs, ncols, art_start)
    any_artificial = False
    for i in range(len(constraints)):
        if art_col[i] is not None:
            rows[i][art_col[i]] = ONE
            tab.basis[i] = art_col[i]
            any_artificial = True
        else:
            tab.basis[i] = slack_col[i]

    def allow_phase1(j: int) -> bool:
        return not tab.banned[j]

    def allow_phase2(j: int) -> bool:
        return j < art_start and not tab.banned[j]

    if any_artificial:
        # Phase-1 reduced costs: r = -sum of artificial-basic rows.
        cost = [ZERO] * ncols
        for i in range(len(constraints)):
            if art_col[i] is not None:
                cost = [a - b for a, b in zip(cost, rows[i])]
        for i in range(len(constraints)):
            if art_col[i] is not None:
                cost[art_col[i]] = ZERO
        tab.cost = cost
        unb = tab.run(allow_phase1)
        if unb is not None:
            raise InternalCheckError("phase-1 objective cannot be unbounded")
        w = ZERO
        for i in range(len(constraints)):
            if tab.basis[i] >= art_start:
                w = w + tab.rhs[i]
        if w > 0:
            # Read the standard-form duals off unit columns, map through flips.
            y = []
            for i in range(len(constraints)):
                if art_col[i] is not None:
                    yi = ONE - tab.cost[art_col[i]]
                else:
                    sc = slack_col[i]
                    sign = ONE if constraints[i].sense == "<=" else -ONE
                    yi = -(flips[i] * sign) * tab.cost[sc]
                y.append(flips[i] * yi)
            witness = tuple(y)
            if not check_farkas(num_vars, constraints, witness, free_vars=free):
                raise InternalCheckError("simplex produced an invalid Farkas witness")
            return LpInfeasible(witness)
        # Feasible: pivot surviving artificials out, drop redundant rows.
        drop = []
        for i in range(len(constraints)):
            if tab.basis[i] >= art_start:
                target = None
                for j in range(art_start):
                    if tab.rows[i][j]:
                        target = j
                        break
                if target is None:
                    drop.append(i)
                else:
                    tab.pivot(i, target)
        for i in reversed(drop):
            del tab.rows[i]
            del tab.rhs[i]
            del tab.basis[i]

    def extract_x():
        x_std = [ZERO] * ncols
        for i, b in enumerate(tab.basis):
            x_std[b] = tab.rhs[i]
        out = []
        for plus, minus in col_of_var:
            v = x_std[plus]
            if minus is not None:
                v = v - x_std[minus]
            out.append(v)
        return tuple(out)

    if objective is None:
        x = extract_x()
        if not check_feasible_point(constraints, x):
            raise InternalCheckError("simplex produced an infeasible point")
        return LpFeasible(x)

    if len(objective) != num_vars:
        raise ValueError("objective has %d coefficients, expected %d" % (len(objective), num_vars))
    sign = -ONE if maximize else ONE
    c_std = [ZERO] * ncols
    for j, cj in enumerate(objective):
        if cj:
            v = sign * Rat(cj)
            plus, minus = col_of_var[j]
            c_std[plus] = v
            if minus is not None:
                c_std[minus] = -v
    cost = list(c_std)
    value = ZERO
    for i, b in enumerate(tab.basis):
        cb = c_std[b]
        if cb:
            cost = [a - cb * r for a, r in zip(cost, tab.rows[i])]
            value = value + cb * tab.rhs[i]
    for j in range(art_start, ncols):
        cost[j] = ZERO
    tab.cost = cost
    unb = tab.run(allow_phase2)
    x = extract_x()
    if not check_feasible_point(constraints, x):
        raise InternalCheckError("simplex produced an infeasible point")
    if unb is not None:
        pc = unb
        ray_std = [ZERO] * ncols
        ray_std[pc] = ONE
        for i, b in enumerate(tab.basis):
            ray_std[b] = -tab.rows[i][pc]
        ray = []
        for plus, minus in col_of_var:
            v = ray_std[plus]
            if minus is not None:
                v = v - ray_std[minus]
            ray.append(v)
        return LpUnbounded(x, tuple(ray))
    val = ZERO
    for cj, xj in zip(objective, x):
        if cj:
            val = val + Rat(cj) * xj
    return LpOptimal(x, val)


# ---------------------------------------------------------------------------
# Trusted checkers: straight-line arithmetic, no shared state with the solver.
# ---------------------------------------------------------------------------


def check_feasible_point(constraints, x, free_vars=None) -> bool:
    """Exact constraint-by-constraint verification of a candidate point.

    When free_vars is given, also checks non-negativity of the other
    variables.
    """
    if free_vars is not None:
        free = set(free_vars)
        for j, v in enumerate(x):
            if j not in free and v < 0:
                return False
    for c in constraints:
        lhs = ZERO
        for a, v in zip(c.coeffs, x):
            if a and v:
                lhs = lhs + Rat(a) * v
        rhs = Rat(c.rhs)
        if c.sense == "<=" and not lhs <= rhs:
            return False
        if c.sense == ">=" and not lhs >= rhs:
            return False
        if c.sense == "=" and lhs != rhs:
            return False
    return True


def check_farkas(num_vars, constraints, y, free_vars=()) -> bool:
    """Verify an infeasibility witness under the documented sign convention."""
    if len(y) != len(constraints):
        return False
    free = set(free_vars)
    combo = [ZERO] * num_vars
    total = ZERO
    for yi, c in zip(y, constraints):
        if c.sense == "<=" and yi > 0:
            return False
        if c.sense == ">=" and yi < 0:
            return False
        if yi:
            for j, a in enumerate(c.coeffs):
                if a:
                    combo[j] = combo[j] + yi * Rat(a)
            total = total + yi * Rat(c.rhs)
    for j in range(num_vars):
        if j in free:
            if combo[j] != 0:
                return False
        elif combo[j] > 0:
            return False
    return total > 0


# ---------------------------------------------------------------------------
# Conic-hull membership with certificates.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeProblem:
    """Is the target in the conic hull of the generators (dimension dim)?"""

    dim: int
    generators: tuple
    target: tuple

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.dim:
                raise ValueError("generator length %d, expected %d" % (len(g), self.dim))
        if len(self.target) != self.dim:
            raise ValueError("target length %d, expected %d" % (len(self.target), self.dim))


@dataclass(frozen=True)
class ConeMember:
    coefficients: tuple

    kind = "member"


@dataclass(frozen=True)
class ConeSeparated:
    certificate: tuple

    kind = "separated"


def cone_problem(generators, target) -> ConeProblem:
    gens = tuple(tuple(Rat(v) for v in g) for g in generators)
    tgt = tuple(Rat(v) for v in target)
    dim = len(tgt)
    return ConeProblem(dim, gens, tgt)


def cone_membership(problem: ConeProblem):
    """Decide target in cone(generators); both branches are re-verified.

    Member carries coefficients that recombine to the target exactly;
    Separated carries a vector with non-positive inner product against every
    generator and positive inner product with the target.
    """
    n = len(problem.generators)
    constraints = [
        LinearConstraint(
            tuple(g[t] for g in problem.generators),
            "=",
            problem.target[t],
        )
        for t in range(problem.dim)
    ]
    res = lp_feasible(n, constraints)
    if isinstance(res, LpFeasible):
        decision = ConeMember(res.x)
    else:
        decision = ConeSeparated(res.farkas)
    if not check_cone_decision(problem, decision):
        raise InternalCheckError("cone certificate failed re-verification")
    return decision


def check_cone_decision(problem: ConeProblem, decision) -> bool:
    """Independent exact verification of either cone certificate."""
    if isinstance(decision, ConeMember):
        lam = decision.coefficients
        if len(lam) != len(problem.generators):
            return False
        if any(l < 0 for l in lam):
            return False
        for t in range(problem.dim):
            total = ZERO
            for l, g in zip(lam, problem.generators):
                if l and g[t]:
                    total = total + l * g[t]
            if total != problem.target[t]:
                return False
        return True
    if isinstance(decision, ConeSeparated):
        cert = decision.certificate
        if len(cert) != problem.dim:
            return False
        for g in problem.generators:
            dot = ZERO
            for c, v in zip(cert, g):
                if c and v:
                    dot = dot + c * v
            if dot > 0:
                return False
        dot = ZERO
        for c, v in zip(cert, problem.target):
            if c and v:
                dot = dot + c * v
        return dot > 0
    return False
