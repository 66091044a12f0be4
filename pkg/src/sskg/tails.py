"""Invariant vertex sets, maximal tails, and restricted/quotient graphs.

Vertex sets are handled as bitmasks over ``skeleton.vertices`` internally and
exposed as frozensets of vertex names.  Results are always sorted by bitmask.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .action import ActionAutomaton, validate_action
from .kgraph import Skeleton, validate_skeleton
from .verdicts import HypothesisError, Verdict

DEFAULT_MAX_VERTICES = 20
STANDARD = "standard"
LITERAL = "literal"


class SizeError(ValueError):
    pass


@dataclass(frozen=True)
class IdealDescriptor:
    hereditary_saturated_set: frozenset
    generator_count: int

    def as_dict(self, order: list[str]) -> dict:
        return {"H": sorted_members(self.hereditary_saturated_set, order),
                "generator_count": self.generator_count}


@dataclass
class TailDescriptor:
    vertices: frozenset
    aperiodicity: Verdict | None = field(default=None, compare=False)

    def as_dict(self, order: list[str]) -> dict:
        out = {"vertices": sorted_members(self.vertices, order)}
        if self.aperiodicity is not None:
            out["aperiodicity"] = self.aperiodicity.as_dict()
        return out


def sorted_members(S: Iterable[str], order: list[str]) -> list[str]:
    idx = {v: i for i, v in enumerate(order)}
    return sorted(S, key=idx.__getitem__)


class _Masks:
    """Per-vertex bitmasks used by every set test in this module."""

    def __init__(self, a: ActionAutomaton):
        sk = a.skeleton
        self.sk = sk
        self.n = len(sk.vertices)
        bit = {v: 1 << i for i, v in enumerate(sk.vertices)}
        self.bit = bit
        self.into_src = [0] * self.n        # sources of edges with range v
        self.out_rng = [0] * self.n         # ranges of edges with source v
        self.color_src = [[0] * sk.k for _ in range(self.n)]
        for e in sk.edges.values():
            r, s = sk.vertex_index[e.range], sk.vertex_index[e.source]
            self.into_src[r] |= bit[e.source]
            self.out_rng[s] |= bit[e.range]
            self.color_src[r][e.color - 1] |= bit[e.source]
        self.orbit = [0] * self.n
        G = a.group
        letters = G.letters()
        for i, v in enumerate(sk.vertices):
            seen = {v}
            stack = [v]
            while stack:
                w = stack.pop()
                for letter in letters:
                    u = a.letter_vertex(letter, w)
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            self.orbit[i] = sum(bit[u] for u in seen)
        # reach[v]: vertices w with v Λ w nonempty (w = v included)
        self.reach = [0] * self.n
        for i in range(self.n):
            m = 1 << i
            frontier = m
            while frontier:
                new = 0
                for j in _bits(frontier):
                    new |= self.into_src[j]
                frontier = new & ~m
                m |= new
            self.reach[i] = m
        self.full = (1 << self.n) - 1

    def to_mask(self, S: Iterable[str]) -> int:
        m = 0
        for v in S:
            if v not in self.bit:
                raise KeyError(f"unknown vertex {v!r}")
            m |= self.bit[v]
        return m

    def to_set(self, m: int) -> frozenset:
        return frozenset(self.sk.vertices[i] for i in _bits(m))

    # -- predicates on masks ---------------------------------------------
    def g_stable(self, m: int) -> bool:
        return all(self.orbit[i] & ~m == 0 for i in _bits(m))

    def hereditary(self, m: int) -> bool:
        return all(self.into_src[i] & ~m == 0 for i in _bits(m))

    def saturated(self, m: int, rule: str = STANDARD) -> bool:
        if rule == LITERAL:
            return all(self.out_rng[i] & ~m == 0 for i in _bits(m))
        for i in _bits(self.full & ~m):
            if any(cm & ~m == 0 for cm in self.color_src[i]):
                return False
        return True

    def tail_i(self, m: int) -> bool:
        return all(self.out_rng[i] & ~m == 0 for i in _bits(m))

    def tail_ii(self, m: int) -> bool:
        return all(cm & m for i in _bits(m) for cm in self.color_src[i])

    def tail_iii(self, m: int) -> bool:
        idx = list(_bits(m))
        return all(self.reach[a] & self.reach[b] & m for a in idx for b in idx if a < b)


def _bits(m: int):
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


_mask_cache: dict[int, _Masks] = {}


def masks(a: ActionAutomaton) -> _Masks:
    hit = _mask_cache.get(id(a))
    if hit is None or hit.sk is not a.skeleton:
        hit = _Masks(a)
        _mask_cache[id(a)] = hit
    return hit


# ---------------------------------------------------------------------------
# public predicates
# ---------------------------------------------------------------------------

def is_G_hereditary(a: ActionAutomaton, H: Iterable[str]) -> bool:
    M = masks(a)
    m = M.to_mask(H)
    return M.g_stable(m) and M.hereditary(m)


def is_G_saturated(a: ActionAutomaton, H: Iterable[str], rule: str = STANDARD) -> bool:
    M = masks(a)
    m = M.to_mask(H)
    return M.g_stable(m) and M.saturated(m, rule)


def invariant_closure(a: ActionAutomaton, S: Iterable[str], rule: str = STANDARD) -> frozenset:
    """Smallest G-stable, hereditary, saturated superset of ``S``."""
    M = masks(a)
    m = M.to_mask(S)
    while True:
        new = m
        for i in _bits(m):
            new |= M.orbit[i] | M.into_src[i]
            if rule == LITERAL:
                new |= M.out_rng[i]
        if rule == STANDARD:
            for i in _bits(M.full & ~new):
                if any(cm & ~new == 0 for cm in M.color_src[i]):
                    new |= 1 << i
        if new == m:
            return M.to_set(m)
        m = new


def _check_size(M: _Masks, max_vertices: int) -> None:
    if M.n > max_vertices:
        raise SizeError(f"{M.n} vertices exceed the enumeration bound {max_vertices}; "
                        f"raise it with --max-vertices")


def enumerate_invariant_subsets(a: ActionAutomaton, max_vertices: int = DEFAULT_MAX_VERTICES,
                                rule: str = STANDARD) -> list[IdealDescriptor]:
    """Every G-hereditary, G-saturated vertex set, sorted by bitmask.

    By the gauge/diagonal correspondence each entry labels the ideal
    generated by its vertex projections.
    """
    M = masks(a)
    _check_size(M, max_vertices)
    out = []
    for m in range(M.full + 1):
        if M.g_stable(m) and M.hereditary(m) and M.saturated(m, rule):
            out.append(IdealDescriptor(M.to_set(m), bin(m).count("1")))
    return out


def is_maximal_tail(a: ActionAutomaton, T: Iterable[str]) -> dict[str, bool]:
    M = masks(a)
    m = M.to_mask(T)
    return {"nonempty": m != 0, "i": M.tail_i(m), "ii": M.tail_ii(m), "iii": M.tail_iii(m)}


def enumerate_maximal_tails(a: ActionAutomaton,
                            max_vertices: int = DEFAULT_MAX_VERTICES) -> list[TailDescriptor]:
    M = masks(a)
    _check_size(M, max_vertices)
    out = []
    for m in range(1, M.full + 1):
        if M.tail_i(m) and M.tail_ii(m) and M.tail_iii(m):
            out.append(TailDescriptor(M.to_set(m)))
    return out


def tail_sort_key(a: ActionAutomaton, T: Iterable[str]) -> int:
    return masks(a).to_mask(T)


def restrict_to(a: ActionAutomaton, T: Iterable[str]) -> tuple[Skeleton, ActionAutomaton]:
    """The sub-k-graph of paths with source in ``T``, with the restricted action.

    ``T`` must be closed under passing to ranges, every vertex of ``T`` must
    receive an edge of each color from ``T``, and ``T`` must be G-stable.
    Maximal tails and complements of invariant sets both qualify.
    """
    M = masks(a)
    m = M.to_mask(T)
    if m == 0:
        raise HypothesisError("restriction", "empty vertex set")
    if not M.tail_i(m):
        bad = next(i for i in _bits(m) if M.out_rng[i] & ~m)
        raise HypothesisError("tail condition (i)",
                              f"an edge leaves {a.skeleton.vertices[bad]} towards a vertex outside the set",
                              a.skeleton.vertices[bad])
    if not M.tail_ii(m):
        bad = next(i for i in _bits(m) if any(not (cm & m) for cm in M.color_src[i]))
        raise HypothesisError("tail condition (ii)",
                              f"{a.skeleton.vertices[bad]} receives no edge of some color from the set",
                              a.skeleton.vertices[bad])
    if not M.g_stable(m):
        raise HypothesisError("G-invariance", "the vertex set is not stable under the group")
    sub = a.skeleton.subgraph(M.to_set(m))
    act = a.restrict(sub)
    rep = validate_skeleton(sub)
    if not rep.ok:
        raise HypothesisError("restriction", f"restricted skeleton is invalid: {rep.issues[0].message}")
    rep = validate_action(act)
    if not rep.ok:
        raise HypothesisError("restriction", f"restricted action is invalid: {rep.issues[0].message}")
    return sub, act


def hereditary_part(a: ActionAutomaton, H: Iterable[str]) -> tuple[Skeleton, ActionAutomaton]:
    """The graph ``HΛ`` of paths with range in a hereditary, G-stable set ``H``."""
    M = masks(a)
    m = M.to_mask(H)
    if m == 0:
        raise HypothesisError("restriction", "empty vertex set")
    if not M.hereditary(m):
        raise HypothesisError("hereditary", "the vertex set is not hereditary")
    if not M.g_stable(m):
        raise HypothesisError("G-invariance", "the vertex set is not stable under the group")
    sub = a.skeleton.subgraph(M.to_set(m))
    return sub, a.restrict(sub)
