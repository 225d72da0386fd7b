"""JSON encodings for every value the workbench exchanges.

All rationals serialize as exact strings "p/q" (or "p" when integral),
infinity as "inf"; weighted-relation tables use a sparse entries/default
form.  Emission is deterministic: objects are built in canonical order and
dumped with sorted keys, so identical values produce byte-identical
documents.  ``dumps`` appends a trailing newline; parse errors raise
ValueError with a location where the JSON itself is malformed.
"""

from __future__ import annotations

import json

from .algebra import Operation, index_tuple, tuple_index
from .galois import GeneratorRef, ImpMember, ImpSeparated, WCloneMember, WCloneSeparated
from .lp import ConeMember, ConeSeparated
from .rational import INF, format_value, is_inf, parse_rat, parse_value
from .vcsp import Constraint, VcspInstance
from .wops import Weighting
from .wrel import Language, WeightedRelation


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str):
    return json.loads(text)


# -- operations -------------------------------------------------------------


def operation_to_json(op: Operation) -> dict:
    return {"d": op.d, "k": op.arity, "table": list(op.table)}


def operation_from_json(data) -> Operation:
    return Operation(int(data["d"]), int(data["k"]), tuple(int(v) for v in data["table"]))


# -- weighted relations -----------------------------------------------------


def wrel_to_json(rel: WeightedRelation) -> dict:
    entries = []
    for i, v in enumerate(rel.table):
        if not is_inf(v):
            entries.append(
                {"tuple": list(index_tuple(i, rel.arity, rel.d)), "value": format_value(v)}
            )
    return {"d": rel.d, "m": rel.arity, "entries": entries, "default": "inf"}


def wrel_from_json(data) -> WeightedRelation:
    d = int(data["d"])
    m = int(data["m"])
    default = parse_value(data.get("default", "inf"))
    table = [default] * d**m
    for entry in data.get("entries", ()):
        idx = tuple_index(tuple(int(x) for x in entry["tuple"]), d)
        table[idx] = parse_value(entry["value"])
    return WeightedRelation(d, m, tuple(table))


def language_to_json(language: Language) -> dict:
    return {
        "d": language.d,
        "relations": {name: wrel_to_json(language[name]) for name in language.names()},
    }


def language_from_json(data) -> Language:
    d = int(data["d"])
    rels = {name: wrel_from_json(rel) for name, rel in data.get("relations", {}).items()}
    return Language(d, rels)


# -- weightings -------------------------------------------------------------


def weighting_to_json(omega: Weighting) -> dict:
    return {
        "d": omega.d,
        "k": omega.arity,
        "terms": [
            {"op": {"table": list(op.table)}, "weight": format_value(w)}
            for op, w in omega.items()
        ],
    }


def weighting_from_json(data) -> Weighting:
    d = int(data["d"])
    k = int(data["k"])
    terms = {}
    for term in data.get("terms", ()):
        op = Operation(d, k, tuple(int(v) for v in term["op"]["table"]))
        terms[op] = parse_rat(term["weight"])
    return Weighting(d, k, terms)


def weighting_set_to_json(omegas) -> dict:
    omegas = list(omegas)
    if not omegas:
        raise ValueError("weighting set must be non-empty")
    return {"d": omegas[0].d, "weightings": [weighting_to_json(om) for om in omegas]}


def weighting_set_from_json(data) -> list[Weighting]:
    return [weighting_from_json(w) for w in data.get("weightings", ())]


# -- instances ---------------------------------------------------------------


def instance_to_json(inst: VcspInstance) -> dict:
    return {
        "n": inst.n,
        "language": language_to_json(inst.language),
        "constraints": [
            {"rel": c.relation, "scope": list(c.scope)} for c in inst.constraints
        ],
    }


def instance_from_json(data) -> VcspInstance:
    language = language_from_json(data["language"])
    constraints = tuple(
        Constraint(c["rel"], tuple(int(v) for v in c["scope"]))
        for c in data.get("constraints", ())
    )
    return VcspInstance(int(data["n"]), language, constraints)


# -- certificates and verdicts ------------------------------------------------


def cone_decision_to_json(decision) -> dict:
    if isinstance(decision, ConeMember):
        return {"kind": "member", "lambda": [format_value(v) for v in decision.coefficients]}
    if isinstance(decision, ConeSeparated):
        return {"kind": "separated", "certificate": [format_value(v) for v in decision.certificate]}
    raise TypeError("not a cone decision: %r" % (decision,))


def cone_decision_from_json(data):
    if data["kind"] == "member":
        return ConeMember(tuple(parse_rat(v) for v in data["lambda"]))
    if data["kind"] == "separated":
        return ConeSeparated(tuple(parse_rat(v) for v in data["certificate"]))
    raise ValueError("unknown cone decision kind %r" % data.get("kind"))


def _generator_ref_to_json(ref: GeneratorRef) -> dict:
    if ref.source == "gamma":
        return {
            "source": "gamma",
            "gamma": ref.gamma_name,
            "x": [list(col) for col in ref.x_columns],
        }
    return {"source": ref.source}


def _generator_ref_from_json(data) -> GeneratorRef:
    if data["source"] == "gamma":
        return GeneratorRef(
            "gamma", data["gamma"], tuple(tuple(int(v) for v in col) for col in data["x"])
        )
    return GeneratorRef(data["source"])


def imp_verdict_to_json(verdict) -> dict:
    if isinstance(verdict, ImpMember):
        out = {
            "kind": "member",
            "d": verdict.d,
            "arity": verdict.arity,
            "empty": verdict.empty,
        }
        if not verdict.empty:
            out.update(
                {
                    "k": verdict.k,
                    "feas": [list(col) for col in verdict.feas_rho],
                    "scope": list(verdict.scope),
                    "generators": [_generator_ref_to_json(r) for r in verdict.generators],
                    "lambda": [format_value(v) for v in verdict.lam],
                    "lambda0": [format_value(v) for v in verdict.lam0],
                }
            )
        return out
    if isinstance(verdict, ImpSeparated):
        return {
            "kind": "separated",
            "reason": verdict.reason,
            "weighting": weighting_to_json(verdict.omega),
        }
    raise TypeError("not a membership verdict: %r" % (verdict,))


def imp_verdict_from_json(data):
    if data["kind"] == "separated":
        return ImpSeparated(weighting_from_json(data["weighting"]), data["reason"])
    if data["kind"] != "member":
        raise ValueError("unknown verdict kind %r" % data.get("kind"))
    if data.get("empty"):
        return ImpMember(d=int(data["d"]), arity=int(data["arity"]), empty=True)
    return ImpMember(
        d=int(data["d"]),
        arity=int(data["arity"]),
        empty=False,
        k=int(data["k"]),
        feas_rho=tuple(tuple(int(v) for v in col) for col in data["feas"]),
        scope=tuple(int(v) for v in data["scope"]),
        generators=tuple(_generator_ref_from_json(r) for r in data["generators"]),
        lam=tuple(parse_rat(v) for v in data["lambda"]),
        lam0=tuple(parse_rat(v) for v in data["lambda0"]),
    )


def wclone_verdict_to_json(verdict) -> dict:
    if isinstance(verdict, WCloneMember):
        return {
            "kind": "member",
            "terms": [
                {
                    "coefficient": format_value(c),
                    "weighting": idx,
                    "ops": [list(g.table) for g in gs],
                }
                for c, idx, gs in verdict.terms
            ],
        }
    if isinstance(verdict, WCloneSeparated):
        return {
            "kind": "separated",
            "reason": verdict.reason,
            "relation": wrel_to_json(verdict.relation),
        }
    raise TypeError("not a weighted-clone verdict: %r" % (verdict,))
