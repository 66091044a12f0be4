"""Primitive ideal space assembled from maximal tails and their periodicity groups."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .action import DEFAULT_STATE_CAP, ActionAutomaton, Nucleus, nucleus_closure
from .periodicity import (HTResult, PerGroup, QueryError, _per_cache, aperiodicity_check, check_bound,
                          check_condition_cyc, cofinality_check, compute_H_T, per_on_H_T, strong_aperiodicity_check)
from .tails import (DEFAULT_MAX_VERTICES, TailDescriptor, enumerate_invariant_subsets,
                    enumerate_maximal_tails, is_maximal_tail, restrict_to, sorted_members)
from .verdicts import BOUND_QUALIFIED, CERTIFIED, VIOLATED, HypothesisError, Verdict, weakest


def require_fv(a: ActionAutomaton) -> None:
    for (gi, v), w in sorted(a.vertex_map.items()):
        if v != w:
            raise HypothesisError("(FV)", f"generator {a.group.gen_names[gi]} moves vertex {v} to {w}",
                                  {"g": a.group.gen_names[gi], "vertex": v})


@dataclass
class PrimComponent:
    tail: TailDescriptor
    torus_rank: int
    per_basis: PerGroup
    h_t: HTResult
    per_tail: PerGroup
    cyc: Verdict | None
    certification: str

    def as_dict(self, order: list[str]) -> dict:
        out = {"tail": sorted_members(self.tail.vertices, order),
               "torus_rank": self.torus_rank,
               "per": self.per_basis.as_dict(),
               "per_tail": self.per_tail.as_dict(),
               "H_T": sorted_members(self.h_t.vertices, order),
               "certification": self.certification,
               "cyc": self.cyc.as_dict() if self.cyc is not None else "assumed"}
        if self.torus_rank == 0:
            out["ideal"] = {"kind": "I(H)",
                            "H": sorted_members(set(order) - set(self.tail.vertices), order)}
        else:
            out["ideal"] = {"kind": f"torus of dimension {self.torus_rank}"}
        return out


@dataclass(frozen=True)
class RationalCharacter:
    """A torsion point of the dual torus of one component's Per group."""

    component: int
    value: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "value", tuple(Fraction(x) % 1 for x in self.value))


def character(space: "PrimSpace", index: int, value: Iterable) -> RationalCharacter:
    comp = space.components[index]
    value = tuple(value)
    if len(value) != comp.torus_rank:
        raise QueryError(f"component {index} has torus rank {comp.torus_rank}, got {len(value)} coordinates")
    return RationalCharacter(index, value)


@dataclass
class PrimSpace:
    components: list[PrimComponent]
    specialization: list[tuple[int, int]]
    strongly_aperiodic: Verdict
    hypotheses: dict = field(default_factory=dict)

    @property
    def qualified(self) -> bool:
        return any(c.certification != CERTIFIED for c in self.components)

    def as_dict(self, order: list[str]) -> dict:
        return {"components": [c.as_dict(order) for c in self.components],
                "component_count": len(self.components),
                "specialization": [list(p) for p in self.specialization],
                "strongly_aperiodic": self.strongly_aperiodic.as_dict(),
                "hypotheses": self.hypotheses,
                "qualified": self.qualified}


def _tail_data(a: ActionAutomaton, tail: TailDescriptor, bound, state_cap):
    _, a_T = restrict_to(a, tail.vertices)
    per_T = _per_cache(a_T, bound, state_cap)
    ht = compute_H_T(a_T, bound, per_T, state_cap)
    per_H = per_on_H_T(a_T, ht, bound, state_cap)
    return a_T, per_T, ht, per_H


def primitive_spectrum(a: ActionAutomaton, bound, max_vertices: int = DEFAULT_MAX_VERTICES,
                       assume_cyc: bool = False, nucleus: Nucleus | None = None,
                       state_cap: int = DEFAULT_STATE_CAP) -> PrimSpace:
    """One component per maximal tail, with torus rank from Per of ``H_T ΛT``."""
    bound = check_bound(a, bound)
    require_fv(a)
    nucleus = nucleus or nucleus_closure(a)
    comps = []
    tails = enumerate_maximal_tails(a, max_vertices)
    order = list(a.skeleton.vertices)
    tail_ranks = {}
    certs = []
    for t in tails:
        a_T, per_T, ht, per_H = _tail_data(a, t, bound, state_cap)
        cyc = None
        if not assume_cyc:
            cyc = check_condition_cyc(a_T, bound, nucleus, state_cap)
            if cyc.value == "violated":
                raise HypothesisError("(Cyc)", f"tail {sorted_members(t.vertices, order)} carries a "
                                      f"cycline triple with nontrivial group element",
                                      {"tail": sorted_members(t.vertices, order), **cyc.witness})
        cert = weakest(BOUND_QUALIFIED, ht.certification)
        t.aperiodicity = Verdict("aperiodic" if per_H.rank == 0 else "periodic",
                                 BOUND_QUALIFIED if per_H.rank == 0 else VIOLATED, bound=bound)
        comps.append(PrimComponent(t, per_H.rank, per_H, ht, per_T, cyc, cert))
        tail_ranks["+".join(sorted_members(t.vertices, order))] = per_T.rank
        certs.append(cert)
    spec = [(i, j) for i, ti in enumerate(tails) for j, tj in enumerate(tails)
            if i != j and ti.vertices <= tj.vertices]
    if any(tail_ranks.values()):
        strong = Verdict("not_strongly_aperiodic", VIOLATED, details={"ranks": tail_ranks})
    else:
        strong = Verdict("strongly_aperiodic", weakest(BOUND_QUALIFIED, *certs), bound=bound,
                         details={"ranks": tail_ranks})
    hyp = {"FV": "checked", "Cyc": "assumed by user" if assume_cyc else "checked up to the bound",
           "k_finite": True}
    return PrimSpace(comps, spec, strong, hyp)


def is_primitive_algebra(a: ActionAutomaton, bound, nucleus: Nucleus | None = None,
                         state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """Yes iff the whole vertex set is a maximal tail whose ``H_T`` side has Per = 0."""
    bound = check_bound(a, bound)
    order = list(a.skeleton.vertices)
    cond = is_maximal_tail(a, order)
    if not all(cond.values()):
        failed = [c for c, ok in cond.items() if not ok]
        return Verdict("no", CERTIFIED, witness={"failed_tail_conditions": failed},
                       note="the vertex set is not a maximal tail")
    ap = aperiodicity_check(a, bound, nucleus, state_cap)
    _, per_T, ht, per_H = _tail_data(a, TailDescriptor(frozenset(order)), bound, state_cap)
    details = {"per_rank": per_H.rank, "H_T": sorted_members(ht.vertices, order),
               "aperiodicity": ap.as_dict(), "completeness_certified": per_H.completeness_certified}
    if per_H.rank:
        z, w = sorted(per_H.witnesses.items())[0]
        return Verdict("no", VIOLATED, witness={"difference": list(z)}, details=details,
                       note="the vertex set is a periodic tail")
    if ap.value == "periodic":
        return Verdict("no", VIOLATED, witness=ap.witness, details=details,
                       note="Per is trivial but a nontrivial group element fixes a cylinder")
    if not per_H.completeness_certified or ap.value == "unknown":
        return Verdict("unknown", BOUND_QUALIFIED, bound=bound, details=details)
    return Verdict("yes", BOUND_QUALIFIED, bound=bound, details=details)


def tail_closure(a: ActionAutomaton, Y: Iterable[Iterable[str]], bound,
                 max_vertices: int = DEFAULT_MAX_VERTICES,
                 state_cap: int = DEFAULT_STATE_CAP) -> list[TailDescriptor]:
    """Maximal tails contained in the union of ``Y`` (strongly aperiodic case only)."""
    tails = enumerate_maximal_tails(a, max_vertices)
    known = {t.vertices for t in tails}
    order = list(a.skeleton.vertices)
    Y = [frozenset(y) for y in Y]
    if not Y:
        raise QueryError("the set of tails must be nonempty")
    for y in Y:
        if y not in known:
            raise QueryError(f"{sorted_members(y, order)} is not a maximal tail")
    strong = strong_aperiodicity_check(a, bound, max_vertices, state_cap)
    if strong.value != "strongly_aperiodic":
        raise HypothesisError("strong aperiodicity", "closure of tail sets is only determined for "
                              "strongly aperiodic graphs", strong.witness)
    union = frozenset().union(*Y)
    return [t for t in tails if t.vertices <= union]


def within_tail_relation(f: RationalCharacter, g: RationalCharacter) -> str:
    if f.component != g.component:
        raise QueryError("characters live on different components")
    return "contained" if f.value == g.value else "incomparable"


def in_closure(f: RationalCharacter, D: Iterable[RationalCharacter]) -> bool:
    """Finite sets are closed in the torus, so closure membership is membership."""
    D = list(D)
    if any(d.component != f.component for d in D):
        raise QueryError("characters live on different components")
    return any(d.value == f.value for d in D)


def simplicity_report(a: ActionAutomaton, bound, max_vertices: int = DEFAULT_MAX_VERTICES,
                      nucleus: Nucleus | None = None,
                      state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """Simple iff cofinal and aperiodic; cross-checked against the invariant-set lattice."""
    bound = check_bound(a, bound)
    order = list(a.skeleton.vertices)
    cof = cofinality_check(a)
    ap = aperiodicity_check(a, bound, nucleus, state_cap)
    lattice = enumerate_invariant_subsets(a, max_vertices)
    proper = [sorted_members(d.hereditary_saturated_set, order) for d in lattice
              if 0 < len(d.hereditary_saturated_set) < len(order)]
    details = {"cofinality": cof.as_dict(), "aperiodicity": ap.as_dict(),
               "invariant_subsets": [sorted_members(d.hereditary_saturated_set, order) for d in lattice],
               "amenable_group": True}
    if cof.value == "cofinal" and ap.value == "aperiodic":
        details["lattice_consistent"] = not proper
        return Verdict("simple", weakest(cof.certification, ap.certification), bound=bound,
                       details=details)
    if cof.value != "cofinal" or ap.value == "periodic":
        witness = {}
        if cof.value != "cofinal":
            witness["not_cofinal"] = cof.witness
        if ap.value == "periodic":
            witness["periodic"] = ap.witness
        if proper:
            witness["invariant_set"] = proper[0]
        return Verdict("not_simple", VIOLATED, witness=witness, details=details)
    return Verdict("unknown", BOUND_QUALIFIED, bound=bound, details=details)
