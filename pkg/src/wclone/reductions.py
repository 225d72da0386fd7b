"""Complexity-preserving instance transformations.

Two reductions operate on normalized instances (non-negative weights):

* ``reduce_opt`` removes constraints over the argmin relation Opt(gamma) by
  replacing each with q*ceil(M/m) + 1 copies of gamma itself, where q is the
  instance's constraint count, m the least positive weight of gamma, and M
  the largest finite weight in the language.  Assignments feasible for the
  original instance keep their value (at most qM); infeasible ones either
  stay infeasible or blow past qM.

* ``reduce_scale`` eliminates non-negative rational scale factors c_i on
  constraints at the price of an epsilon-bounded absolute error: with
  b = ceil(qM/epsilon), each scaled constraint becomes floor(b*c_i) + 1
  unscaled copies, so b*I(t) <= I'(t) <= b*I(t) + qM for every feasible t
  and any optimum of I' is within epsilon of the true optimum of I.

Each transformation returns a report carrying the output instance, every
parameter used, and per-constraint provenance; ``verify_report`` recomputes
the parameters from the inputs and checks the stored values match.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rational import ONE, ZERO, Rat, ceil_rat, floor_rat, is_inf
from .vcsp import Constraint, VcspInstance
from .wrel import Language, WeightedRelation, opt, shift, tables_equal


def normalize_nonnegative(language: Language):
    """Shift every relation so its least finite weight is 0.

    All-infinite relations pass through unchanged.  Returns the new language
    and a per-relation shift log (the amount added), which lets optima be
    translated back to original scale exactly.
    """
    shifted = {}
    log = {}
    for name in language.names():
        rel = language[name]
        low = rel.min_finite()
        if low is None or low == 0:
            shifted[name] = rel
            log[name] = ZERO
        else:
            shifted[name] = shift(rel, -low)
            log[name] = -low
    return Language(language.d, shifted), log


def _require_nonnegative(language: Language, context: str) -> None:
    for name in language.names():
        low = language[name].min_finite()
        if low is not None and low < 0:
            raise ValueError(
                "%s requires non-negative weights; relation %r has minimum %s"
                % (context, name, low)
            )


@dataclass(frozen=True)
class ReductionReport:
    """Transformed instance plus the parameters and provenance that built it."""

    instance: VcspInstance
    params: dict
    provenance: tuple  # one entry per input constraint: (kind, copy_count)


def _largest_finite(language: Language, skip=()):
    best = None
    for name in language.names():
        if name in skip:
            continue
        high = language[name].max_finite()
        if high is not None and (best is None or high > best):
            best = high
    return best


def reduce_opt(
    inst: VcspInstance,
    gamma_name: str,
    opt_name: str | None = None,
    allow_identity: bool = True,
) -> ReductionReport:
    """Replace every Opt(gamma) constraint by copies of gamma.

    ``opt_name`` names the relation equal to Opt(gamma) in the instance's
    language; omitted, it is auto-detected by table equality.  When gamma is
    already a relation Opt(gamma) = Feas(gamma) and the transformation is the
    identity (one copy); set allow_identity=False to make that an error.
    """
    language = inst.language
    if gamma_name not in language:
        raise ValueError("unknown relation %r" % gamma_name)
    gamma = language[gamma_name]
    opt_rel = opt(gamma)
    if opt_name is None:
        for name in language.names():
            if name != gamma_name and tables_equal(language[name], opt_rel):
                opt_name = name
                break
        if opt_name is None:
            raise ValueError("no relation in the language equals Opt(%s)" % gamma_name)
    elif not tables_equal(language[opt_name], opt_rel):
        raise ValueError("%r is not Opt(%s)" % (opt_name, gamma_name))

    _require_nonnegative(language, "reduce_opt")
    low = gamma.min_finite()
    if low is not None and low != 0:
        raise ValueError("gamma must be normalized: its minimum weight is %s, not 0" % low)

    q = len(inst.constraints)
    m_small = None
    for v in gamma.table:
        if not is_inf(v) and v > 0 and (m_small is None or v < m_small):
            m_small = v
    big_m = _largest_finite(language, skip=(opt_name,))
    if big_m is None:
        big_m = ZERO

    if m_small is None:
        # gamma is a relation: Opt(gamma) = Feas(gamma) = gamma up to the
        # representative, so each Opt-constraint becomes one gamma copy.
        if not allow_identity:
            raise ValueError("gamma is a relation; the reduction is the identity")
        copies = 1
    else:
        copies = q * ceil_rat(big_m / m_small) + 1

    new_constraints = []
    provenance = []
    for c in inst.constraints:
        if c.relation == opt_name:
            new_constraints.extend([Constraint(gamma_name, c.scope)] * copies)
            provenance.append(("replaced", copies))
        else:
            new_constraints.append(c)
            provenance.append(("kept", 1))
    out = VcspInstance(inst.n, language, tuple(new_constraints))
    params = {
        "q": q,
        "m": m_small,
        "M": big_m,
        "copies": copies,
        "threshold": big_m * q,
        "gamma": gamma_name,
        "opt": opt_name,
    }
    return ReductionReport(out, params, tuple(provenance))


def reduce_scale(inst: VcspInstance, scalings, epsilon) -> ReductionReport:
    """Drop per-constraint scale factors at an epsilon-bounded value error.

    The instance being approximated is sum_i c_i * gamma_i; the output is an
    unscaled instance over the same language with floor(b*c_i) + 1 copies of
    constraint i, b = ceil(qM/epsilon).
    """
    eps = Rat(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if len(scalings) != len(inst.constraints):
        raise ValueError("need one scale factor per constraint")
    coeffs = [Rat(c) for c in scalings]
    if any(c < 0 for c in coeffs):
        raise ValueError("scale factors must be non-negative")
    _require_nonnegative(inst.language, "reduce_scale")
    q = len(inst.constraints)
    big_m = _largest_finite(inst.language)
    if big_m is None:
        big_m = ZERO
    b = ceil_rat(Rat(q) * big_m / eps) if big_m > 0 else 0
    new_constraints = []
    provenance = []
    for c, coeff in zip(inst.constraints, coeffs):
        copies = floor_rat(Rat(b) * coeff) + 1
        new_constraints.extend([c] * copies)
        provenance.append(("copied", copies))
    out = VcspInstance(inst.n, inst.language, tuple(new_constraints))
    params = {
        "q": q,
        "M": big_m,
        "epsilon": eps,
        "b": b,
        "scalings": tuple(coeffs),
    }
    return ReductionReport(out, params, tuple(provenance))


def verify_report(report: ReductionReport, inst: VcspInstance) -> bool:
    """Recompute the stored parameters from the inputs; True when they match."""
    params = report.params
    if "gamma" in params:
        gamma = inst.language[params["gamma"]]
        q = len(inst.constraints)
        if params["q"] != q:
            return False
        m_small = None
        for v in gamma.table:
            if not is_inf(v) and v > 0 and (m_small is None or v < m_small):
                m_small = v
        if params["m"] != m_small:
            return False
        big_m = _largest_finite(inst.language, skip=(params["opt"],)) or ZERO
        if params["M"] != big_m:
            return False
        expected = 1 if m_small is None else q * ceil_rat(big_m / m_small) + 1
        return params["copies"] == expected
    if "b" in params:
        q = len(inst.constraints)
        if params["q"] != q:
            return False
        big_m = _largest_finite(inst.language) or ZERO
        if params["M"] != big_m:
            return False
        expected_b = ceil_rat(Rat(q) * big_m / params["epsilon"]) if big_m > 0 else 0
        if params["b"] != expected_b:
            return False
        for (kind, copies), coeff in zip(report.provenance, params["scalings"]):
            if copies != floor_rat(Rat(expected_b) * coeff) + 1:
                return False
        return True
    return False
