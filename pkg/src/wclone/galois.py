"""Membership in weighted relational clones and bounded weighted clones.

Given a language Gamma and a candidate rho with Feas(rho) of size k, the
decision runs entirely inside the arity-k slice: operations of arity k are in
bijection with m-tuples (m = d**k) via f |-> f(Z), where Z lists all k-tuples
in tuple_index order, so f(Z) is literally the operation's table.  The
workspace collects the polymorphism basis Pol_k(Gamma), the reachable set
F = { f(Z) }, the list R of feasible tuples of rho, and the problematic set
Q = { f : f(R) outside Feas(rho) }.

Membership is decided by two exact LP stages over the generator vectors
gamma[X] together with the constant vectors +-1 (the slack directions -chi_f
of the underlying cone argument are folded into inequality senses):

* stage (a) certifies that no weighted polymorphism of Gamma puts positive
  weight on any operation in Q, producing coefficients for a relation
  psi_0 whose gadget projection pins down Feas(rho) via Opt;
* stage (b) certifies the same for the value vector rho(f(R)), producing
  coefficients for a relation psi whose gadget projection reproduces the
  finite part of rho.

Either stage failing yields a Farkas witness which *is* a separating
weighted polymorphism of Gamma.  A Member verdict is re-expressed through
``express_from_certificate`` and compared to rho exactly before being
returned; a Separated verdict is re-verified against every relation of Gamma
and against rho.  Stage (b) is solved after shifting rho so its largest
relevant value is zero, which lets the simplex start from an almost-feasible
basis; the shift is folded back into the constant-vector coefficients, so
certificates are unaffected.

``wclone_membership`` is the mirror question for weightings: whether a
candidate lies in the weighted clone generated by a finite weighting set,
with the support clone generated up to an arity bound.
"""

from __future__ import annotations

import itertools

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    Operation,
    OperationSet,
    TupleMatrix,
    all_tuples,
    check_op_cap,
    clone_closure,
    op_cap,
    tuple_index,
)
from .errors import CapExceededError, InternalCheckError
from .improve import improvement_rows, is_weighted_polymorphism
from .lp import ConeMember, ConeProblem, LinearConstraint, LpFeasible, cone_membership, lp_feasible
from .rational import INF, ONE, ZERO
from .vcsp import Constraint, VcspInstance, gadget_project
from .wops import Weighting, proper_sum, require_proper, supp_set
from .wrel import Language, WeightedRelation, add, opt, tables_equal


@dataclass(frozen=True)
class GeneratorRef:
    """Provenance of one cone generator: a (gamma, X) row or a constant vector."""

    source: str  # "gamma" | "iota" | "minus_iota"
    gamma_name: str | None = None
    x_columns: tuple | None = None


class GaloisWorkspace:
    """Arity-k slice of the membership problem for (language, rho)."""

    def __init__(self, language: Language, rho: WeightedRelation, cap=None):
        if language.d != rho.d:
            raise ValueError("language and candidate relation must share one domain")
        self.language = language
        self.rho = rho
        self.d = language.d
        feas = rho.feas_tuples()
        self.k = len(feas)
        if self.k == 0:
            raise ValueError("workspace needs a non-empty feasibility relation")
        check_op_cap(self.d, self.k, cap)
        self.m = self.d**self.k
        # Z's rows enumerate all k-tuples in tuple_index order, so f(Z) is
        # exactly the table of f.
        z_rows = tuple(all_tuples(self.d, self.k))
        self.Z = TupleMatrix(self.d, tuple(zip(*z_rows)))
        self.R = TupleMatrix(self.d, feas)
        basis, rows = improvement_rows(language, self.k, cap)
        self.basis = basis
        self.basis_ops = basis.of_arity(self.k)
        self.rows = rows
        self.F = frozenset(op.table for op in self.basis_ops)
        feas_set = set(feas)
        r_rows = self.R.rows()
        r_idx = [tuple_index(r, self.d) for r in r_rows]
        self._fR = []
        q_ops = []
        for op in self.basis_ops:
            t = op.table
            image = tuple(t[i] for i in r_idx)
            self._fR.append(image)
            if image not in feas_set:
                q_ops.append(op)
        self.Q = OperationSet(self.d, q_ops)
        self._q_indices = tuple(
            i for i, op in enumerate(self.basis_ops) if op in self.Q
        )
        self._proj_indices = tuple(
            i for i, op in enumerate(self.basis_ops) if op.is_projection()
        )
        # Cone generators: one vector per (gamma, X) row plus the two constant
        # vectors; duplicates collapse with first-seen provenance.
        gens: list[tuple] = []
        refs: list[GeneratorRef] = []
        seen: dict[tuple, int] = {}
        for row in rows:
            vec = row.vector
            if vec not in seen:
                seen[vec] = len(gens)
                gens.append(vec)
                refs.append(GeneratorRef("gamma", row.gamma_name, row.x.columns))
        n = len(self.basis_ops)
        iota = (ONE,) * n
        minus_iota = (-ONE,) * n
        for vec, src in ((iota, "iota"), (minus_iota, "minus_iota")):
            if vec not in seen:
                seen[vec] = len(gens)
                gens.append(vec)
                refs.append(GeneratorRef(src))
        self.generators = tuple(gens)
        self.generator_refs = tuple(refs)
        self._iota_index = seen[iota]
        self._minus_iota_index = seen[minus_iota]
        # Column view: coefficient of generator g in basis row t.
        self._columns = tuple(
            tuple(g[t] for g in self.generators) for t in range(n)
        )

    def f_of_R(self, basis_index: int) -> tuple:
        return self._fR[basis_index]

    def scope(self) -> tuple[int, ...]:
        """Gadget scope: the variable index of each row of R (one per argument of rho)."""
        return tuple(tuple_index(r, self.d) for r in self.R.rows())


def construct_mu(gamma: WeightedRelation, x: TupleMatrix, workspace: GaloisWorkspace) -> WeightedRelation:
    """The m-ary relation with mu(f(Z)) = gamma(f(X)) on the basis, infinity off F."""
    if x.width != workspace.k:
        raise ValueError("X must have k columns")
    feas = set(gamma.feas_tuples())
    for col in x.columns:
        if col not in feas:
            raise ValueError("X column outside Feas(gamma)")
    d = workspace.d
    row_idx = [tuple_index(r, d) for r in x.rows()]
    table = [INF] * d**workspace.m
    for op in workspace.basis_ops:
        t = op.table
        image_idx = 0
        for ri in row_idx:
            image_idx = image_idx * d + t[ri]
        table[tuple_index(t, d)] = gamma.table[image_idx]
    return WeightedRelation(d, workspace.m, tuple(table))


def construct_iota(workspace: GaloisWorkspace):
    """Constant +1 and -1 m-ary relations supported exactly on F."""
    d = workspace.d
    plus = [INF] * d**workspace.m
    minus = [INF] * d**workspace.m
    for op in workspace.basis_ops:
        idx = tuple_index(op.table, d)
        plus[idx] = ONE
        minus[idx] = -ONE
    return (
        WeightedRelation(d, workspace.m, tuple(plus)),
        WeightedRelation(d, workspace.m, tuple(minus)),
    )


@dataclass(frozen=True)
class ImpMember:
    """Constructive membership: rho = gadget(psi) + Opt(gadget(psi_0)).

    ``lam`` and ``lam0`` are cone coefficients over ``generators`` building
    psi and psi_0 from the mu-relations; ``scope`` is the projection list of
    the gadget; ``empty`` marks the trivial all-infinite case expressed from
    the empty relation.
    """

    kind = "member"

    d: int
    arity: int
    empty: bool = False
    k: int = 0
    feas_rho: tuple = ()
    scope: tuple = ()
    generators: tuple = ()
    lam: tuple = ()
    lam0: tuple = ()


@dataclass(frozen=True)
class ImpSeparated:
    """A weighted polymorphism of the language that rho violates."""

    kind = "separated"

    omega: Weighting
    reason: str  # "support" (positive weight on Q) or "improvement" (value > 0 at R)


def _farkas_to_weighting(workspace: GaloisWorkspace, y, combined_rows=()):
    """Fold LP row duals (plus optional combined-row dual) into a weighting."""
    n = len(workspace.basis_ops)
    weights = {}
    for t in range(n):
        w = y[t]
        for indices, dual in combined_rows:
            if dual and t in indices:
                w = w + dual
        if w:
            weights[workspace.basis_ops[t]] = w
    return Weighting(workspace.d, workspace.k, weights)


def _stage_a(workspace: GaloisWorkspace):
    """Cover Q with a non-negative cone combination vanishing on projections.

    Returns (lam0, None) on success or (None, ImpSeparated) when some
    weighted polymorphism of the language puts positive weight on Q.
    """
    n = len(workspace.basis_ops)
    gens = workspace.generators
    lam0 = [ZERO] * len(gens)
    if not workspace._q_indices:
        return tuple(lam0), None
    proj = set(workspace._proj_indices)
    base_constraints = []
    for t in range(n):
        sense = "=" if t in proj else ">="
        base_constraints.append(LinearConstraint(workspace._columns[t], sense, ZERO))
    remaining = set(workspace._q_indices)
    while remaining:
        cover = [ZERO] * len(gens)
        for g_idx, g in enumerate(gens):
            s = ZERO
            for t in remaining:
                s = s + g[t]
            cover[g_idx] = s
        constraints = base_constraints + [LinearConstraint(tuple(cover), ">=", ONE)]
        res = lp_feasible(len(gens), constraints)
        if not isinstance(res, LpFeasible):
            y = res.farkas
            omega = _farkas_to_weighting(
                workspace, y[:n], combined_rows=((remaining, y[n]),)
            )
            return None, ImpSeparated(omega, "support")
        lam0 = [a + b for a, b in zip(lam0, res.x)]
        alpha0 = _combine(gens, res.x, n)
        covered = {t for t in remaining if alpha0[t] > 0}
        if not covered:
            raise InternalCheckError("stage (a) made no progress covering Q")
        remaining -= covered
    return tuple(lam0), None


def _combine(gens, lam, n):
    out = [ZERO] * n
    for coeff, g in zip(lam, gens):
        if coeff:
            for t in range(n):
                if g[t]:
                    out[t] = out[t] + coeff * g[t]
    return out


def _stage_b(workspace: GaloisWorkspace):
    """Dominate the value vector rho(f(R)) from cone(V), equality on projections.

    The candidate is shifted so the largest relevant value is zero (an
    almost-feasible simplex start); the shift folds back into the
    constant-vector coefficients.
    """
    n = len(workspace.basis_ops)
    gens = workspace.generators
    rho = workspace.rho
    d = workspace.d
    qset = set(workspace._q_indices)
    beta = []
    shiftable = []
    for t in range(n):
        if t in qset:
            beta.append(ZERO)
        else:
            value = rho.table[tuple_index(workspace.f_of_R(t), d)]
            beta.append(value)
            shiftable.append(value)
    c = max(shiftable)
    proj = set(workspace._proj_indices)
    constraints = []
    for t in range(n):
        rhs = beta[t] - c if t not in qset else ZERO
        sense = "=" if t in proj else ">="
        constraints.append(LinearConstraint(workspace._columns[t], sense, rhs))
    res = lp_feasible(len(gens), constraints)
    if not isinstance(res, LpFeasible):
        omega = _farkas_to_weighting(workspace, res.farkas[:n])
        return None, ImpSeparated(omega, "improvement")
    lam = list(res.x)
    if c > 0:
        lam[workspace._iota_index] = lam[workspace._iota_index] + c
    elif c < 0:
        lam[workspace._minus_iota_index] = lam[workspace._minus_iota_index] + (-c)
    return tuple(lam), None


def _verify_separated(workspace: GaloisWorkspace, verdict: ImpSeparated) -> None:
    omega = verdict.omega
    language = workspace.language
    for name in language.names():
        if not is_weighted_polymorphism(omega, language[name]):
            raise InternalCheckError("separating weighting does not improve %r" % name)
    if is_weighted_polymorphism(omega, workspace.rho):
        raise InternalCheckError("separating weighting improves the candidate")


def imp_membership(language: Language, rho: WeightedRelation, cap=None):
    """Decide rho in the weighted relational clone of the language.

    Returns a self-verified ImpMember (with an exact reconstruction recipe)
    or ImpSeparated (with a weighted polymorphism of the language violated
    by rho at its feasibility list R).
    """
    if language.d != rho.d:
        raise ValueError("language and candidate relation must share one domain")
    if not rho.feas_tuples():
        return ImpMember(d=rho.d, arity=rho.arity, empty=True)
    workspace = GaloisWorkspace(language, rho, cap)
    lam0, separated = _stage_a(workspace)
    if separated is not None:
        _verify_separated(workspace, separated)
        return separated
    lam, separated = _stage_b(workspace)
    if separated is not None:
        _verify_separated(workspace, separated)
        return separated
    verdict = ImpMember(
        d=rho.d,
        arity=rho.arity,
        empty=False,
        k=workspace.k,
        feas_rho=workspace.R.columns,
        scope=workspace.scope(),
        generators=workspace.generator_refs,
        lam=lam,
        lam0=lam0,
    )
    rebuilt = express_from_certificate(verdict, workspace)
    if not tables_equal(rebuilt, rho):
        raise InternalCheckError("member recipe does not reconstruct the candidate")
    return verdict


def _psi_from_lambda(workspace: GaloisWorkspace, lam) -> WeightedRelation:
    """Materialize sum lam_g * mu_g as an m-ary relation supported on F."""
    n = len(workspace.basis_ops)
    alpha = _combine(workspace.generators, lam, n)
    d = workspace.d
    table = [INF] * d**workspace.m
    for t, op in enumerate(workspace.basis_ops):
        table[tuple_index(op.table, d)] = alpha[t]
    return WeightedRelation(d, workspace.m, tuple(table))


def express_from_certificate(verdict: ImpMember, workspace: GaloisWorkspace | None = None,
                             cap=None) -> WeightedRelation:
    """Re-run the member recipe: gadget psi, gadget psi_0, add Opt, exactly.

    The empty case is expressed from the unary empty relation alone.
    """
    if verdict.empty:
        return WeightedRelation(verdict.d, verdict.arity, (INF,) * verdict.d**verdict.arity)
    if workspace is None:
        raise ValueError("a workspace is required for non-empty member recipes")
    psi = _psi_from_lambda(workspace, verdict.lam)
    psi0 = _psi_from_lambda(workspace, verdict.lam0)
    scope_all = tuple(range(workspace.m))
    lang = Language(workspace.d, {"psi": psi, "psi0": psi0})
    inst = VcspInstance(workspace.m, lang, (Constraint("psi", scope_all),))
    inst0 = VcspInstance(workspace.m, lang, (Constraint("psi0", scope_all),))
    rho_prime = gadget_project(inst, verdict.scope, cap=cap)
    rho0_prime = gadget_project(inst0, verdict.scope, cap=cap)
    identity = tuple(range(verdict.arity))
    return add(rho_prime, identity, opt(rho0_prime), identity, verdict.arity)


# ---------------------------------------------------------------------------
# Weighted-clone membership (bounded by a clone arity cap).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WCloneMember:
    """mu = sum of c_i * omega_i[g_1..g_l]: a proper-sum recipe over the set."""

    kind = "member"

    terms: tuple  # (coefficient, weighting_index, gs: tuple[Operation, ...])


@dataclass(frozen=True)
class WCloneSeparated:
    """A weighted relation improved by the whole set but not by the candidate."""

    kind = "separated"

    relation: WeightedRelation
    reason: str  # "support" (candidate support escapes the clone) or "cone"


def _indicator_relation(d: int, m: int, tables) -> WeightedRelation:
    table = [INF] * d**m
    for t in tables:
        table[tuple_index(t, d)] = ZERO
    return WeightedRelation(d, m, tuple(table))


def wclone_membership(
    omegas: Sequence[Weighting],
    mu: Weighting,
    clone_arity_cap: int | None = None,
    cap=None,
):
    """Decide mu in the weighted clone generated by the weighting set.

    The support clone is generated up to max(k, arities in the set,
    clone_arity_cap).  Member verdicts re-evaluate through proper_sum to mu
    exactly; Separated verdicts carry an m-ary weighted relation improved by
    every generator weighting but not by mu, both facts re-checked.
    """
    omegas = list(omegas)
    if not omegas:
        raise ValueError("the weighting set must be non-empty")
    d = omegas[0].d
    for om in omegas:
        if om.d != d:
            raise ValueError("weightings must share one domain")
        require_proper(om, "wclone_membership")
    if mu.d != d:
        raise ValueError("candidate weighting domain mismatch")
    require_proper(mu, "wclone_membership")
    k = mu.arity
    max_arity = max([k] + [om.arity for om in omegas] + ([clone_arity_cap] if clone_arity_cap else []))
    clone = clone_closure(supp_set(omegas), max_arity, cap)
    ck = clone.of_arity(k)
    ck_index = {op: i for i, op in enumerate(ck)}
    m = d**k
    f_set = frozenset(op.table for op in ck)

    def verify_separated(gamma: WeightedRelation, reason: str):
        for om in omegas:
            if not is_weighted_polymorphism(om, gamma):
                raise InternalCheckError("separating relation is not improved by the set")
        if is_weighted_polymorphism(mu, gamma):
            raise InternalCheckError("separating relation is improved by the candidate")
        return WCloneSeparated(gamma, reason)

    for op, w in mu.items():
        if w > 0 and op not in ck_index:
            return verify_separated(_indicator_relation(d, m, f_set), "support")

    limit = op_cap(cap)
    total = sum(len(ck) ** om.arity for om in omegas)
    if total > limit:
        raise CapExceededError(
            "weighted-clone generator enumeration is too large",
            clone_k_size=len(ck),
            generators=total,
            cap=limit,
        )
    table_index = {op.table: i for i, op in enumerate(ck)}
    gens: list[tuple] = []
    provenance: list[tuple] = []
    seen: dict[tuple, int] = {}
    for om_idx, om in enumerate(omegas):
        for gs in itertools.product(ck, repeat=om.arity):
            weights: dict[tuple, object] = {}
            for op, w in om.items():
                image = _superpose_into(op, gs, d)
                weights[image] = weights.get(image, ZERO) + w
            vec = [ZERO] * len(ck)
            for op_table, w in weights.items():
                if w:
                    vec[table_index[op_table]] = w
            vec = tuple(vec)
            if vec not in seen:
                seen[vec] = len(gens)
                gens.append(vec)
                provenance.append((om_idx, gs))
    target = [ZERO] * len(ck)
    for op, w in mu.items():
        target[ck_index[op]] = w
    decision = cone_membership(ConeProblem(len(ck), tuple(gens), tuple(target)))
    if isinstance(decision, ConeMember):
        terms = tuple(
            (coeff, provenance[i][0], provenance[i][1])
            for i, coeff in enumerate(decision.coefficients)
            if coeff != 0
        )
        rebuilt = proper_sum(
            [(c, omegas[w_idx], gs) for c, w_idx, gs in terms], d=d, arity=k
        ).weighting
        if rebuilt != mu:
            raise InternalCheckError("proper-sum recipe does not rebuild the candidate")
        return WCloneMember(terms)
    cert = decision.certificate
    table = [INF] * d**m
    for i, op in enumerate(ck):
        table[tuple_index(op.table, d)] = cert[i]
    gamma = WeightedRelation(d, m, tuple(table))
    return verify_separated(gamma, "cone")


def _superpose_into(op: Operation, gs, d: int) -> tuple:
    """Table of op[g_1..g_k] without constructing the Operation object."""
    ell = gs[0].arity
    gtabs = [g.table for g in gs]
    ftab = op.table
    out = []
    for pos in range(d**ell):
        idx = 0
        for gt in gtabs:
            idx = idx * d + gt[pos]
        out.append(ftab[idx])
    return tuple(out)
