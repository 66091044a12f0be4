"""Cycline triples, periodicity groups, H_T, aperiodicity and cofinality.

A query ``(mu, g, nu)`` asks whether ``mu (g·x) == nu x`` for every infinite
path ``x`` from ``s(nu)``.  After the common prefix of degree ``d(mu) ∧ d(nu)``
is stripped, the question is decided by exploring states ``(beta, h, beta')``
where ``beta`` and ``beta'`` are the unmatched tails of the two sides and
``h`` is the current restriction.  Each step appends one edge ``e`` to the
extension and compares the leading edge of ``beta (h·e)`` with that of
``beta' e``.  Every reachable state is itself a cycline query, so the answer is
Yes exactly when the reachable set closes without a mismatch.
"""
from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass, field

from . import lattice
from .action import (DEFAULT_STATE_CAP, ActionAutomaton, Nucleus, candidate_elements,
                     fixes_all_paths, nucleus_closure)
from .groups import Elem, FiniteGroup
from .kgraph import Degree, Path, degrees_upto
from .tails import enumerate_maximal_tails, masks, restrict_to, sorted_members
from .verdicts import BOUND_QUALIFIED, CERTIFIED, VIOLATED, HypothesisError, Verdict, weakest

YES, NO, UNKNOWN = "yes", "no", "unknown"


class QueryError(ValueError):
    pass


@dataclass(frozen=True)
class CyclineResult:
    mu: Path
    g: Elem
    nu: Path

    @property
    def difference(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.mu.degree, self.nu.degree))

    def as_dict(self, a: ActionAutomaton) -> dict:
        from .kgraph import _jsonable
        return {"mu": _jsonable(self.mu), "g": a.group.encode(self.g), "nu": _jsonable(self.nu),
                "p": list(self.mu.degree), "q": list(self.nu.degree)}


class CyclineEngine:
    """Decision procedure for cycline triples with a cache shared across queries."""

    def __init__(self, a: ActionAutomaton, state_cap: int = DEFAULT_STATE_CAP):
        self.a = a
        self.sk = a.skeleton
        self.G = a.group
        self.state_cap = state_cap
        self.yes: set = set()
        self.no: dict = {}
        self.unknowns = 0

    @staticmethod
    def _key(beta: Path, h: Elem, beta2: Path):
        return (beta.edges, beta.source, h, beta2.edges, beta2.source)

    def query(self, mu: Path, g: Elem, nu: Path) -> Verdict:
        sk, a = self.sk, self.a
        if a.act_vertex(g, nu.source) != mu.source:
            raise QueryError(f"s(mu)={mu.source} is not g·s(nu)={a.act_vertex(g, nu.source)}")
        if mu.range != nu.range:
            return Verdict(NO, VIOLATED, witness=sk.vertex(nu.source), note="ranges differ")
        m = tuple(min(x, y) for x, y in zip(mu.degree, nu.degree))
        head1, rest1 = sk.factorize(mu, m)
        head2, rest2 = sk.factorize(nu, m)
        if head1.edges != head2.edges:
            return Verdict(NO, VIOLATED, witness=sk.vertex(nu.source), note="prefix mismatch")
        value, ext = self._decide(rest1, g, rest2)
        if value == YES:
            return Verdict(YES, CERTIFIED)
        if value == NO:
            return Verdict(NO, VIOLATED, witness=sk.path(ext, nu.source))
        self.unknowns += 1
        return Verdict(UNKNOWN, BOUND_QUALIFIED, note=f"state cap {self.state_cap} exceeded")

    def is_yes(self, mu: Path, g: Elem, nu: Path) -> bool:
        return self.query(mu, g, nu).value == YES

    def _decide(self, beta: Path, g: Elem, beta2: Path):
        sk, a, ident = self.sk, self.a, self.G.identity
        start = self._key(beta, g, beta2)
        if start in self.yes:
            return YES, None
        if start in self.no:
            return NO, self.no[start]
        parent = {start: None}
        states = {start: (beta, g, beta2)}
        queue = deque([start])

        def fail(key, suffix):
            # every state on the branch from start to ``key`` gets a witness
            chain = []
            while parent[key] is not None:
                prev, e = parent[key]
                chain.append((key, e))
                key = prev
            chain.reverse()
            ext = tuple(suffix)
            for node, e in reversed(chain):
                self.no[node] = ext
                ext = (e,) + ext
            self.no[start] = ext
            return NO, ext

        while queue:
            key = queue.popleft()
            b1, h, b2 = states.pop(key)
            if h == ident and b1.edges == b2.edges and b1.source == b2.source:
                continue
            w = b2.source
            for c in range(1, sk.k + 1):
                unit = sk.unit(c)
                for e in sk.edges_into(w, c):
                    e2, h2 = a.act_edge(h, e)
                    left = sk.compose(b1, sk.edge_path(e2))
                    right = sk.compose(b2, sk.edge_path(e))
                    lh, lr = sk.factorize(left, unit)
                    rh, rr = sk.factorize(right, unit)
                    if lh.edges != rh.edges:
                        return fail(key, (e,))
                    nk = self._key(lr, h2, rr)
                    if nk in self.no:
                        return fail(key, (e,) + self.no[nk])
                    if nk in self.yes or nk in parent:
                        continue
                    parent[nk] = (key, e)
                    states[nk] = (lr, h2, rr)
                    if len(parent) > self.state_cap:
                        return UNKNOWN, None
                    queue.append(nk)
        self.yes.update(parent)
        return YES, None


def engine(a: ActionAutomaton, state_cap: int = DEFAULT_STATE_CAP) -> CyclineEngine:
    eng = getattr(a, "_cycline_engine", None)
    if eng is None or eng.state_cap != state_cap:
        eng = CyclineEngine(a, state_cap)
        a._cycline_engine = eng
    return eng


def check_bound(a: ActionAutomaton, bound) -> Degree:
    bound = tuple(bound)
    if len(bound) != a.skeleton.k or any(not isinstance(b, int) or b < 0 for b in bound):
        raise QueryError(f"bound {list(bound)} must be {a.skeleton.k} nonnegative integers")
    return bound


def is_cycline(a: ActionAutomaton, mu: Path, g: Elem, nu: Path,
               state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    return engine(a, state_cap).query(mu, g, nu)


# ---------------------------------------------------------------------------
# candidate partners and searches
# ---------------------------------------------------------------------------

def candidate_partner(a: ActionAutomaton, mu: Path, g: Elem, q: Degree) -> Path | None:
    """The only ``nu`` of degree ``q`` that could make ``(mu, g, nu)`` cycline."""
    sk = a.skeleton
    u = a.act_vertex(a.group.inv(g), mu.source)
    lam = sk.some_path(u, q)
    if lam is None:
        return None
    glam, _ = a.act_on_path(g, lam)
    nu, _ = sk.factorize(sk.compose(mu, glam), q)
    if nu.source != u:
        return None
    return nu


@functools.lru_cache(maxsize=None)
def disjoint_pairs(bound: Degree) -> tuple[tuple[Degree, Degree], ...]:
    """Pairs ``(p, q)`` with disjoint supports and ``p != q``, one per unordered pair.

    Any cycline triple factors through its common prefix, so these pairs
    realize every degree difference that occurs within ``bound``.
    """
    seen = set()
    res = []
    per_coord = [[(0, 0)] + [(a, 0) for a in range(1, b + 1)] + [(0, a) for a in range(1, b + 1)]
                 for b in bound]
    for combo in itertools.product(*per_coord):
        p = tuple(c[0] for c in combo)
        q = tuple(c[1] for c in combo)
        if p == q or (q, p) in seen:
            continue
        seen.add((p, q))
        res.append((p, q))
    res.sort(key=lambda pq: (sum(pq[0]) + sum(pq[1]), pq))
    return tuple(res)


def _vertices_paths(a: ActionAutomaton, p: Degree):
    sk = a.skeleton
    for v in sk.vertices:
        yield from sk.enumerate_paths(v, p)


def search_cycline(a: ActionAutomaton, bound: Degree, allow_nontrivial_g: bool = False,
                   nucleus: Nucleus | None = None,
                   state_cap: int = DEFAULT_STATE_CAP) -> list[CyclineResult]:
    """Every certified cycline pair (and optionally triple) with degrees within ``bound``.

    Trivial pairs ``(mu, 1, mu)`` are left out.  Results are in breadth-first
    order of total degree.
    """
    bound = check_bound(a, bound)
    eng = engine(a, state_cap)
    G = a.group
    elems = [G.identity]
    if allow_nontrivial_g:
        cands, _ = candidate_elements(a, nucleus or nucleus_closure(a))
        elems += cands
    degrees = sorted(degrees_upto(tuple(bound)), key=lambda d: (sum(d), d))
    out = []
    for p in degrees:
        for q in degrees:
            for g in elems:
                if p == q and g == G.identity:
                    continue
                for mu in _vertices_paths(a, p):
                    nu = candidate_partner(a, mu, g, q)
                    if nu is not None and eng.is_yes(mu, g, nu):
                        out.append(CyclineResult(mu, g, nu))
    return out


@dataclass
class PerGroup:
    basis: list[tuple[int, ...]]
    rank: int
    search_bound: Degree
    completeness_certified: bool
    witnesses: dict = field(default_factory=dict)
    unknown_queries: int = 0

    @property
    def certification(self) -> str:
        return BOUND_QUALIFIED

    def contains(self, z) -> bool:
        return lattice.contains(self.basis, z)

    def as_dict(self, a: ActionAutomaton | None = None) -> dict:
        out = {"basis": [list(b) for b in self.basis], "rank": self.rank,
               "search_bound": list(self.search_bound),
               "completeness_certified": self.completeness_certified,
               "certification": self.certification}
        if a is not None:
            out["witnesses"] = {",".join(map(str, z)): w.as_dict(a)
                                for z, w in sorted(self.witnesses.items())}
        return out


def per_group(a: ActionAutomaton, bound: Degree,
              state_cap: int = DEFAULT_STATE_CAP) -> PerGroup:
    """Subgroup of Z^k generated by degree differences of cycline pairs within ``bound``.

    Pairs whose difference already lies in the lattice found so far are
    skipped.  ``completeness_certified`` means every remaining candidate was
    refuted with a certified No, so the lattice is exact up to the bound.
    """
    bound = check_bound(a, bound)
    eng = engine(a, state_cap)
    before = eng.unknowns
    ident = a.group.identity
    basis: list[tuple[int, ...]] = []
    witnesses = {}
    for p, q in disjoint_pairs(bound):
        z = tuple(x - y for x, y in zip(p, q))
        if basis and lattice.contains(basis, z):
            continue
        for mu in _vertices_paths(a, p):
            nu = candidate_partner(a, mu, ident, q)
            if nu is not None and eng.is_yes(mu, ident, nu):
                basis = lattice.hnf(basis + [z])
                witnesses[z] = CyclineResult(mu, ident, nu)
                break
    unknown = eng.unknowns - before
    return PerGroup(basis, len(basis), bound, unknown == 0, witnesses, unknown)


def _per_cache(a: ActionAutomaton, bound: Degree, state_cap: int) -> PerGroup:
    cache = a.__dict__.setdefault("_per_cache", {})
    key = (tuple(bound), state_cap)
    if key not in cache:
        cache[key] = per_group(a, bound, state_cap)
    return cache[key]


# ---------------------------------------------------------------------------
# H_T
# ---------------------------------------------------------------------------

@dataclass
class HTResult:
    vertices: frozenset
    per: PerGroup
    certification: str
    failures: dict = field(default_factory=dict)

    def as_dict(self, order) -> dict:
        from .kgraph import _jsonable
        return {"H_T": sorted_members(self.vertices, order), "certification": self.certification,
                "per": self.per.as_dict(), "failures": _jsonable(self.failures)}


def compute_H_T(a_T: ActionAutomaton, bound: Degree, per: PerGroup | None = None,
                state_cap: int = DEFAULT_STATE_CAP) -> HTResult:
    """Vertices where every path has a cycline partner for each lattice shift.

    ``a_T`` is the action restricted to a maximal tail.  Every ``p, q``
    within ``bound`` with ``p - q`` a nonzero element of Per is checked.
    """
    bound = check_bound(a_T, bound)
    per = per or _per_cache(a_T, bound, state_cap)
    sk = a_T.skeleton
    eng = engine(a_T, state_cap)
    before = eng.unknowns
    ident = a_T.group.identity
    degrees = list(degrees_upto(bound))
    shifts = [(p, q) for p in degrees for q in degrees
              if p != q and per.rank and per.contains(tuple(x - y for x, y in zip(p, q)))]
    keep = set()
    failures = {}
    for v in sk.vertices:
        bad = None
        for p, q in shifts:
            for mu in sk.enumerate_paths(v, p):
                nu = candidate_partner(a_T, mu, ident, q)
                if nu is None or not eng.is_yes(mu, ident, nu):
                    bad = {"p": list(p), "q": list(q), "mu": mu}
                    break
            if bad:
                break
        if bad is None:
            keep.add(v)
        else:
            failures[v] = bad
    cert = BOUND_QUALIFIED if per.rank else CERTIFIED
    if eng.unknowns != before:
        cert = BOUND_QUALIFIED
    return HTResult(frozenset(keep), per, cert, failures)


def per_on_H_T(a_T: ActionAutomaton, ht: HTResult, bound: Degree,
               state_cap: int = DEFAULT_STATE_CAP) -> PerGroup:
    """Per of the graph of paths with range in H_T (vertex set H_T)."""
    from .tails import hereditary_part
    if ht.vertices == frozenset(a_T.skeleton.vertices):
        return _per_cache(a_T, bound, state_cap)
    if not ht.vertices:
        raise HypothesisError("H_T nonempty", "no vertex of the tail admits partners for all shifts")
    _, a_H = hereditary_part(a_T, ht.vertices)
    return _per_cache(a_H, bound, state_cap)


# ---------------------------------------------------------------------------
# aperiodicity, (Cyc), strong aperiodicity
# ---------------------------------------------------------------------------

def _symmetric_candidates(a: ActionAutomaton, nucleus: Nucleus) -> tuple[list[Elem], str]:
    cands, scope = candidate_elements(a, nucleus)
    G = a.group
    allc = set(cands) | {G.inv(g) for g in cands}
    allc.discard(G.identity)
    return sorted(allc), scope


def _fixing_element(a: ActionAutomaton, cands, state_cap):
    """First ``(g, v)`` with ``g != 1`` fixing every path from ``v``."""
    unknown = False
    for g in cands:
        for v in a.skeleton.vertices:
            r = fixes_all_paths(a, g, v, state_cap)
            if r:
                return (g, v), unknown
            if r is None:
                unknown = True
    return None, unknown


def _find_triple(a: ActionAutomaton, bound: Degree, elems, eng: CyclineEngine):
    for p, q in disjoint_pairs(tuple(bound)):
        for g in elems:
            for mu in _vertices_paths(a, p):
                nu = candidate_partner(a, mu, g, q)
                if nu is not None and eng.is_yes(mu, g, nu):
                    return CyclineResult(mu, g, nu)
    return None


def aperiodicity_check(a: ActionAutomaton, bound: Degree, nucleus: Nucleus | None = None,
                       state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """Search for periodic behaviour: a cycline triple with ``d(mu) != d(nu)``
    or an element ``g != 1`` fixing every path from some vertex.

    Group elements range over the whole group when it is finite and over the
    nucleus otherwise.
    """
    bound = check_bound(a, bound)
    nucleus = nucleus or nucleus_closure(a)
    G = a.group
    cands, scope = _symmetric_candidates(a, nucleus)
    fixed, fix_unknown = _fixing_element(a, cands, state_cap)
    if fixed is not None:
        g, v = fixed
        return Verdict("periodic", VIOLATED, witness={"g": G.encode(g), "vertex": v, "p": [0] * len(bound),
                                                      "q": [0] * len(bound)},
                       note="element fixes every path from the vertex")
    eng = engine(a, state_cap)
    before = eng.unknowns
    hit = _find_triple(a, bound, [G.identity] + cands, eng)
    if hit is not None:
        return Verdict("periodic", VIOLATED, witness=hit.as_dict(a),
                       note="cycline triple with distinct degrees")
    incomplete = fix_unknown or eng.unknowns != before or (
        nucleus.cap_exceeded and not isinstance(G, FiniteGroup))
    if incomplete:
        return Verdict("unknown", BOUND_QUALIFIED, bound=bound,
                       note="state or nucleus cap reached before the search closed")
    return Verdict("aperiodic", BOUND_QUALIFIED, bound=bound,
                   note=f"no periodicity up to the bound; group elements: {scope}")


def check_condition_cyc(a: ActionAutomaton, bound: Degree, nucleus: Nucleus | None = None,
                        state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """Look for a cycline triple with ``g != 1``."""
    bound = check_bound(a, bound)
    G = a.group
    if G.is_trivial():
        return Verdict("satisfied", CERTIFIED, note="trivial group")
    nucleus = nucleus or nucleus_closure(a)
    cands, scope = _symmetric_candidates(a, nucleus)
    if not cands:
        return Verdict("satisfied", CERTIFIED, note="no nontrivial element can occur")
    fixed, fix_unknown = _fixing_element(a, cands, state_cap)
    if fixed is not None:
        g, v = fixed
        w = a.skeleton.vertex(v)
        return Verdict("violated", VIOLATED, witness=CyclineResult(w, g, w).as_dict(a))
    eng = engine(a, state_cap)
    before = eng.unknowns
    hit = _find_triple(a, bound, cands, eng)
    if hit is not None:
        return Verdict("violated", VIOLATED, witness=hit.as_dict(a))
    if fix_unknown or eng.unknowns != before or (nucleus.cap_exceeded and not isinstance(G, FiniteGroup)):
        return Verdict("unknown", BOUND_QUALIFIED, bound=bound)
    return Verdict("satisfied", BOUND_QUALIFIED, bound=bound,
                   note=f"no nontrivial triple up to the bound; group elements: {scope}")


def check_cyc_all_tails(a: ActionAutomaton, bound: Degree, max_vertices: int = 20,
                        nucleus: Nucleus | None = None,
                        state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """(Cyc) on every maximal tail; the weakest verdict wins.

    The nucleus of the whole action bounds the restricted ones, so it is
    reused as the candidate set on each tail.
    """
    bound = check_bound(a, bound)
    order = list(a.skeleton.vertices)
    nucleus = nucleus or nucleus_closure(a)
    per_tail = {}
    certs = []
    for t in enumerate_maximal_tails(a, max_vertices):
        _, a_T = restrict_to(a, t.vertices)
        v = check_condition_cyc(a_T, bound, nucleus, state_cap)
        name = "+".join(sorted_members(t.vertices, order))
        per_tail[name] = v.as_dict()
        if v.value == "violated":
            return Verdict("violated", VIOLATED, witness={"tail": sorted_members(t.vertices, order),
                                                          **v.witness}, details=per_tail)
        certs.append(v.certification)
        if v.value == "unknown":
            return Verdict("unknown", BOUND_QUALIFIED, bound=tuple(bound), details=per_tail)
    return Verdict("satisfied", weakest(*certs), bound=tuple(bound), details=per_tail)


def strong_aperiodicity_check(a: ActionAutomaton, bound: Degree, max_vertices: int = 20,
                              state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """Per of every maximal tail must be trivial."""
    bound = check_bound(a, bound)
    order = list(a.skeleton.vertices)
    ranks = {}
    certs = []
    for t in enumerate_maximal_tails(a, max_vertices):
        _, a_T = restrict_to(a, t.vertices)
        per = _per_cache(a_T, bound, state_cap)
        name = "+".join(sorted_members(t.vertices, order))
        ranks[name] = per.rank
        if per.rank:
            z, w = next(iter(sorted(per.witnesses.items())))
            return Verdict("not_strongly_aperiodic", VIOLATED,
                           witness={"tail": sorted_members(t.vertices, order), **w.as_dict(a_T)},
                           details={"ranks": ranks})
        certs.append(BOUND_QUALIFIED)
        if not per.completeness_certified:
            return Verdict("unknown", BOUND_QUALIFIED, bound=tuple(bound), details={"ranks": ranks})
    return Verdict("strongly_aperiodic", weakest(*certs), bound=tuple(bound), details={"ranks": ranks})


# ---------------------------------------------------------------------------
# cofinality
# ---------------------------------------------------------------------------

def cofinality_check(a: ActionAutomaton) -> Verdict:
    """Decide cofinality exactly by reachability on the vertex graph.

    For a vertex ``v`` let ``R`` be the vertices reachable backwards from the
    orbit ``G·v``.  An infinite path avoiding ``R`` exists iff some nonempty
    ``D`` outside ``R`` receives every color from inside ``D``; the greatest
    such ``D`` is a finite fixpoint.
    """
    M = masks(a)
    sk = a.skeleton
    for i, v in enumerate(sk.vertices):
        reach = 0
        for j in range(M.n):
            if M.orbit[i] >> j & 1:
                reach |= M.reach[j]
        D = M.full & ~reach
        while True:
            keep = 0
            for j in range(M.n):
                if D >> j & 1 and all(cm & D for cm in M.color_src[j]):
                    keep |= 1 << j
            if keep == D:
                break
            D = keep
        if D:
            avoid = sorted_members(M.to_set(D), list(sk.vertices))
            return Verdict("not_cofinal", VIOLATED,
                           witness={"vertex": v, "path_vertex": avoid[0], "avoiding_set": avoid},
                           note="infinite paths inside the avoiding set never connect to the vertex")
    return Verdict("cofinal", CERTIFIED)
