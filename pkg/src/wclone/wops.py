"""Weightings: zero-sum rational weight assignments to same-arity operations.

A weighting is proper when negative weight sits only on projections; improper
weightings are first-class values here because sums of improper superpositions
are the standard way to build proper ones, but clone-membership boundaries
reject them.  Only nonzero terms are stored, which keeps arity-k weightings
tractable even though the ambient space has d**(d**k) coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .algebra import Operation, OperationSet, check_domain, projections, superpose
from .errors import ImproperWeightingError
from .rational import Rat, ZERO


@dataclass(frozen=True)
class WeightingReport:
    """Validation outcome for a prospective weighting."""

    errors: tuple[str, ...]
    improper_ops: tuple[Operation, ...]

    @property
    def valid(self) -> bool:
        return not self.errors

    @property
    def proper(self) -> bool:
        return self.valid and not self.improper_ops


def check_weighting(d: int, arity: int, terms: Mapping[Operation, object]) -> WeightingReport:
    """Validate shape and the zero-sum condition; list impropriety witnesses."""
    errors = []
    improper = []
    try:
        check_domain(d)
    except ValueError as exc:
        errors.append(str(exc))
    if arity < 1:
        errors.append("weighting arity must be at least 1")
    total = ZERO
    for op, w in terms.items():
        weight = Rat(w)
        if op.d != d:
            errors.append("operation domain %d does not match weighting domain %d" % (op.d, d))
            continue
        if op.arity != arity:
            errors.append(
                "operation arity %d does not match weighting arity %d" % (op.arity, arity)
            )
            continue
        total = total + weight
        if weight < 0 and not op.is_projection():
            improper.append(op)
    if total != 0:
        errors.append("weights sum to %s, expected 0" % total)
    improper.sort(key=Operation.sort_key)
    return WeightingReport(tuple(errors), tuple(improper))


class Weighting:
    """A finitely-supported zero-sum weight assignment to k-ary operations."""

    __slots__ = ("d", "arity", "_terms", "_hash")

    def __init__(self, d: int, arity: int, terms: Mapping[Operation, object]):
        cleaned = {}
        for op, w in terms.items():
            weight = Rat(w)
            if weight != 0:
                cleaned[op] = weight
        report = check_weighting(d, arity, cleaned)
        if report.errors:
            raise ValueError("invalid weighting: " + "; ".join(report.errors))
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(
            self,
            "_terms",
            tuple(sorted(cleaned.items(), key=lambda kv: kv[0].table)),
        )
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Weighting values are immutable")

    def items(self) -> tuple[tuple[Operation, object], ...]:
        return self._terms

    def weight(self, op: Operation):
        for o, w in self._terms:
            if o == op:
                return w
        return ZERO

    def operations(self) -> tuple[Operation, ...]:
        return tuple(o for o, _ in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_proper(self) -> bool:
        return all(w > 0 or op.is_projection() for op, w in self._terms)

    def improper_terms(self) -> tuple[tuple[Operation, object], ...]:
        return tuple((op, w) for op, w in self._terms if w < 0 and not op.is_projection())

    def __eq__(self, other):
        return (
            isinstance(other, Weighting)
            and self.d == other.d
            and self.arity == other.arity
            and self._terms == other._terms
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.d, self.arity, self._terms)))
        return self._hash

    def __repr__(self):
        parts = ["%s*%s" % (w, op.table) for op, w in self._terms]
        return "Weighting(d=%d, k=%d, %s)" % (self.d, self.arity, " + ".join(parts) or "0")


def zero_weighting(d: int, arity: int) -> Weighting:
    return Weighting(d, arity, {})


def weighting_from_pairs(d: int, arity: int, pairs: Iterable[tuple[Operation, object]]) -> Weighting:
    terms: dict[Operation, object] = {}
    for op, w in pairs:
        terms[op] = terms.get(op, ZERO) + Rat(w)
    return Weighting(d, arity, terms)


def is_proper(omega: Weighting) -> bool:
    return omega.is_proper()


def require_proper(omega: Weighting, context: str) -> None:
    if not omega.is_proper():
        raise ImproperWeightingError(
            "%s requires a proper weighting" % context, omega.improper_terms()
        )


def supp(omega: Weighting) -> OperationSet:
    """All arity-k projections together with the positively weighted operations."""
    require_proper(omega, "supp")
    ops = list(projections(omega.d, omega.arity))
    ops.extend(op for op, w in omega.items() if w > 0)
    return OperationSet(omega.d, ops)


def supp_set(omegas: Iterable[Weighting]) -> OperationSet:
    """Union of supports over a collection of weightings (shared domain)."""
    omegas = list(omegas)
    if not omegas:
        raise ValueError("need at least one weighting")
    d = omegas[0].d
    ops: list[Operation] = []
    for om in omegas:
        if om.d != d:
            raise ValueError("weightings must share one domain")
        ops.extend(supp(om))
    return OperationSet(d, ops)


def superpose_weighting(omega: Weighting, gs: Sequence[Operation]) -> Weighting:
    """The superposition omega[g_1..g_k]: weight mass moves to f[g_1..g_k].

    The result weights still sum to zero but properness is not guaranteed;
    callers that need it must check.
    """
    if len(gs) != omega.arity:
        raise ValueError("expected %d inner operations, got %d" % (omega.arity, len(gs)))
    if not gs:
        raise ValueError("superposition needs at least one inner operation")
    ell = gs[0].arity
    for g in gs:
        if g.d != omega.d or g.arity != ell:
            raise ValueError("inner operations must share the weighting's domain and one arity")
    terms: dict[Operation, object] = {}
    for op, w in omega.items():
        image = superpose(op, gs)
        terms[image] = terms.get(image, ZERO) + w
    return Weighting(omega.d, ell, terms)


def add_weightings(a: Weighting, b: Weighting) -> Weighting:
    if a.d != b.d or a.arity != b.arity:
        raise ValueError("can only add weightings of equal domain and arity")
    terms: dict[Operation, object] = dict(a.items())
    for op, w in b.items():
        terms[op] = terms.get(op, ZERO) + w
    return Weighting(a.d, a.arity, terms)


def scale_weighting(omega: Weighting, c) -> Weighting:
    factor = Rat(c)
    if factor < 0:
        raise ValueError("scale factor must be non-negative")
    return Weighting(omega.d, omega.arity, {op: w * factor for op, w in omega.items()})


@dataclass(frozen=True)
class ProperSumResult:
    """A proper weighting assembled as sum_i c_i * omega_i[gs_i].

    ``transcript`` records each scaled superposition (possibly improper on its
    own) so the construction can be replayed and re-verified term by term.
    """

    weighting: Weighting
    transcript: tuple[tuple[object, Weighting], ...]


def proper_sum(pairs: Sequence[tuple[object, Weighting, Sequence[Operation]]],
               d: int | None = None, arity: int | None = None) -> ProperSumResult:
    """Evaluate sum_i c_i * omega_i[gs_i] and insist the result is proper.

    An empty sequence needs explicit d and arity and yields the zero
    weighting.  An improper result raises, carrying the offending entries.
    """
    transcript = []
    total: Weighting | None = None
    for c, omega, gs in pairs:
        coeff = Rat(c)
        if coeff < 0:
            raise ValueError("proper-sum coefficients must be non-negative")
        term = scale_weighting(superpose_weighting(omega, list(gs)), coeff)
        transcript.append((coeff, term))
        total = term if total is None else add_weightings(total, term)
    if total is None:
        if d is None or arity is None:
            raise ValueError("empty proper sum needs explicit domain and arity")
        total = zero_weighting(d, arity)
    offenders = total.improper_terms()
    if offenders:
        raise ImproperWeightingError("proper_sum result is improper", offenders)
    return ProperSumResult(total, tuple(transcript))
