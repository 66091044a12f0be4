"""Finite k-graphs presented by a colored 1-skeleton plus factorization squares.

Paths are stored in color-ascending normal form: every color-1 edge comes
first (at the range end), then every color-2 edge, and so on.  Reordering a
path uses the square tables one adjacent swap at a time.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Degree = tuple[int, ...]


class DegreeError(ValueError):
    pass


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    color: int  # 1-based
    source: str
    range: str


@dataclass(frozen=True)
class Square:
    """``i_edge . j_edge == j_then . i_then`` with color(i_edge) < color(j_edge)."""

    i_edge: str
    j_edge: str
    j_then: str
    i_then: str


@dataclass(frozen=True)
class Path:
    range: str
    source: str
    edges: tuple[str, ...]
    degree: Degree

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __str__(self) -> str:
        return "·".join(self.edges) if self.edges else f"<{self.range}>"


@dataclass
class Issue:
    kind: str
    message: str
    witness: object = None

    def as_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witness": _jsonable(self.witness)}


def _jsonable(x):
    if isinstance(x, Path):
        return list(x.edges) if x.edges else {"vertex": x.range}
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, kind: str, message: str, witness=None) -> None:
        self.issues.append(Issue(kind, message, witness))

    def kinds(self) -> set[str]:
        return {i.kind for i in self.issues}

    def as_list(self) -> list[dict]:
        return [i.as_dict() for i in self.issues]


class Skeleton:
    """A k-graph given by vertices, colored edges and square tables.

    The object is treated as immutable once built.  Square tables are stored
    in both directions so any adjacent pair of differently colored edges can
    be swapped.
    """

    def __init__(self, k: int, vertices: Iterable[str], edges: Iterable[Edge],
                 squares: Iterable[Square] = ()):
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: dict[str, Edge] = {}
        for e in edges:
            self.edges[e.id] = e
        self.squares: tuple[Square, ...] = tuple(squares)
        self.vertex_index = {v: n for n, v in enumerate(self.vertices)}
        self._into: dict[tuple[str, int], list[str]] = {
            (v, c): [] for v in self.vertices for c in range(1, k + 1)}
        for e in self.edges.values():
            self._into.setdefault((e.range, e.color), []).append(e.id)
        for key in self._into:
            self._into[key].sort()
        self._swap: dict[tuple[str, str], tuple[str, str]] = {}
        for sq in self.squares:
            self._swap[(sq.i_edge, sq.j_edge)] = (sq.j_then, sq.i_then)
            self._swap[(sq.j_then, sq.i_then)] = (sq.i_edge, sq.j_edge)
        self._fact_cache: dict = {}

    # -- basic accessors -------------------------------------------------
    def color(self, e: str) -> int:
        return self.edges[e].color

    def edges_into(self, v: str, color: int) -> list[str]:
        """Edges of the given color with range ``v`` (that is, ``v Λ^{e_color}``)."""
        return self._into.get((v, color), [])

    def unit(self, color: int) -> Degree:
        return tuple(1 if i == color - 1 else 0 for i in range(self.k))

    def zero(self) -> Degree:
        return (0,) * self.k

    def vertex(self, v: str) -> Path:
        if v not in self.vertex_index:
            raise KeyError(f"unknown vertex {v!r}")
        return Path(v, v, (), self.zero())

    def edge_path(self, e: str) -> Path:
        ed = self.edges[e]
        return Path(ed.range, ed.source, (e,), self.unit(ed.color))

    def degree_of(self, edges: Sequence[str]) -> Degree:
        d = [0] * self.k
        for e in edges:
            d[self.edges[e].color - 1] += 1
        return tuple(d)

    # -- reordering ------------------------------------------------------
    def swap(self, a: str, b: str) -> tuple[str, str]:
        try:
            return self._swap[(a, b)]
        except KeyError:
            raise CompositionError(f"no factorization square for the pair ({a}, {b})") from None

    def reorder(self, edges: Sequence[str], target_colors: Sequence[int]) -> list[str]:
        """Rewrite a composable edge string so its color word equals ``target_colors``."""
        seq = list(edges)
        col = [self.edges[e].color for e in seq]
        for t, want in enumerate(target_colors):
            if col[t] == want:
                continue
            u = t + 1
            while col[u] != want:
                u += 1
            while u > t:
                a, b = self.swap(seq[u - 1], seq[u])
                seq[u - 1], seq[u] = a, b
                col[u - 1], col[u] = col[u], col[u - 1]
                u -= 1
        return seq

    def normalize(self, edges: Sequence[str]) -> tuple[str, ...]:
        cols = sorted(self.edges[e].color for e in edges)
        return tuple(self.reorder(edges, cols))

    def path(self, edges: Sequence[str], range_vertex: str | None = None) -> Path:
        """Build the path of a composable edge string, normalizing its order."""
        edges = list(edges)
        if not edges:
            if range_vertex is None:
                raise ValueError("an empty edge string needs its vertex")
            return self.vertex(range_vertex)
        for a, b in zip(edges, edges[1:]):
            if self.edges[a].source != self.edges[b].range:
                raise CompositionError(
                    f"edges {a} and {b} are not composable: s({a})={self.edges[a].source}, "
                    f"r({b})={self.edges[b].range}")
        nf = self.normalize(edges)
        return Path(self.edges[nf[0]].range, self.edges[nf[-1]].source, nf, self.degree_of(nf))

    # -- category operations --------------------------------------------
    def compose(self, mu: Path, nu: Path) -> Path:
        if mu.source != nu.range:
            raise CompositionError(
                f"cannot compose: s(mu)={mu.source} differs from r(nu)={nu.range}")
        if not nu.edges:
            return mu
        if not mu.edges:
            return nu
        nf = self.normalize(mu.edges + nu.edges)
        return Path(mu.range, nu.source, nf, tuple(a + b for a, b in zip(mu.degree, nu.degree)))

    def factorize(self, mu: Path, p: Degree) -> tuple[Path, Path]:
        """Unique ``(alpha, beta)`` with ``mu = alpha beta`` and ``d(alpha) = p``."""
        p = tuple(p)
        if len(p) != self.k or any(a < 0 or a > b for a, b in zip(p, mu.degree)):
            raise DegreeError(f"cannot factor a path of degree {mu.degree} at {p}")
        if not mu.edges:
            return mu, mu
        key = (mu.edges, p)
        hit = self._fact_cache.get(key)
        if hit is not None:
            return hit
        if not any(p):
            out = (self.vertex(mu.range), mu)
        elif p == mu.degree:
            out = (mu, self.vertex(mu.source))
        else:
            rest = tuple(b - a for a, b in zip(p, mu.degree))
            target = [c + 1 for c in range(self.k) for _ in range(p[c])]
            target += [c + 1 for c in range(self.k) for _ in range(rest[c])]
            seq = self.reorder(mu.edges, target)
            n = sum(p)
            a_edges, b_edges = tuple(seq[:n]), tuple(seq[n:])
            mid = self.edges[a_edges[-1]].source
            out = (Path(mu.range, mid, a_edges, p), Path(mid, mu.source, b_edges, rest))
        if len(self._fact_cache) > 500_000:
            self._fact_cache.clear()
        self._fact_cache[key] = out
        return out

    def segment(self, mu: Path, p: Degree, q: Degree) -> Path:
        """The middle factor ``mu(p, q)``."""
        if any(a > b for a, b in zip(p, q)):
            raise DegreeError(f"segment needs p <= q, got {p} and {q}")
        head, _ = self.factorize(mu, q)
        _, mid = self.factorize(head, p)
        return mid

    def enumerate_paths(self, v: str, p: Degree) -> list[Path]:
        """All paths in ``v Λ^p``, in normal form, in a deterministic order."""
        if v not in self.vertex_index:
            raise KeyError(f"unknown vertex {v!r}")
        colors = [c + 1 for c in range(self.k) for _ in range(p[c])]
        out: list[Path] = []
        p = tuple(p)

        def walk(at: str, t: int, acc: list[str]) -> None:
            if t == len(colors):
                out.append(Path(v, at, tuple(acc), p))
                return
            for e in self.edges_into(at, colors[t]):
                acc.append(e)
                walk(self.edges[e].source, t + 1, acc)
                acc.pop()

        walk(v, 0, [])
        return out

    def some_path(self, v: str, p: Degree) -> Path | None:
        """One path in ``v Λ^p`` (the first in enumeration order) or None."""
        colors = [c + 1 for c in range(self.k) for _ in range(p[c])]
        acc: list[str] = []

        def walk(at: str, t: int) -> str | None:
            if t == len(colors):
                return at
            for e in self.edges_into(at, colors[t]):
                acc.append(e)
                end = walk(self.edges[e].source, t + 1)
                if end is not None:
                    return end
                acc.pop()
            return None

        end = walk(v, 0)
        if end is None:
            return None
        return Path(v, end, tuple(acc), tuple(p))

    # -- structure -------------------------------------------------------
    def subgraph(self, keep: Iterable[str]) -> "Skeleton":
        """Full sub-skeleton on a vertex subset (edges and squares inside it)."""
        keep = set(keep)
        verts = [v for v in self.vertices if v in keep]
        edges = [e for e in self.edges.values() if e.source in keep and e.range in keep]
        ids = {e.id for e in edges}
        squares = [s for s in self.squares
                   if {s.i_edge, s.j_edge, s.j_then, s.i_then} <= ids]
        return Skeleton(self.k, verts, edges, squares)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Skeleton):
            return NotImplemented
        return (self.k == other.k and set(self.vertices) == set(other.vertices)
                and self.edges == other.edges and set(self.squares) == set(other.squares))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Skeleton(k={self.k}, |V|={len(self.vertices)}, |E|={len(self.edges)})"


def degree_le(p: Degree, q: Degree) -> bool:
    return all(a <= b for a, b in zip(p, q))


def degrees_upto(bound: Degree) -> Iterator[Degree]:
    yield from itertools.product(*(range(b + 1) for b in bound))


def validate_skeleton(s: Skeleton) -> ValidationReport:
    """Check source-freeness, square bijectivity, and three-color coherence."""
    rep = ValidationReport()
    for e in s.edges.values():
        if e.source not in s.vertex_index or e.range not in s.vertex_index:
            rep.add("dangling_edge", f"edge {e.id} references an unknown vertex", e.id)
        if not 1 <= e.color <= s.k:
            rep.add("bad_color", f"edge {e.id} has color {e.color} outside 1..{s.k}", e.id)
    if rep.issues:
        return rep
    for v in s.vertices:
        for c in range(1, s.k + 1):
            if not s.edges_into(v, c):
                rep.add("source_free", f"vertex {v} receives no edge of color {c}", [v, c])

    seen_dom: set[tuple[str, str]] = set()
    seen_cod: set[tuple[str, str]] = set()
    for sq in s.squares:
        ids = (sq.i_edge, sq.j_edge, sq.j_then, sq.i_then)
        if any(x not in s.edges for x in ids):
            rep.add("square_dangling", f"square {ids} names an unknown edge", list(ids))
            continue
        e, f, f2, e2 = (s.edges[x] for x in ids)
        quad = list(ids)
        if not (e.color == e2.color and f.color == f2.color and e.color < f.color):
            rep.add("square_colors", f"square {ids} has inconsistent colors", quad)
            continue
        if e.source != f.range or f2.source != e2.range:
            rep.add("square_composable", f"square {ids} joins non-composable edges", quad)
        if f2.range != e.range or e2.source != f.source:
            rep.add("square_endpoints", f"square {ids} does not respect range/source", quad)
        if (e.id, f.id) in seen_dom:
            rep.add("square_duplicate", f"pair ({e.id}, {f.id}) has two squares", quad)
        if (f2.id, e2.id) in seen_cod:
            rep.add("square_not_injective", f"pair ({f2.id}, {e2.id}) is hit twice", quad)
        seen_dom.add((e.id, f.id))
        seen_cod.add((f2.id, e2.id))
    for e in s.edges.values():
        for c in range(e.color + 1, s.k + 1):
            for f in s.edges_into(e.source, c):
                if (e.id, f) not in seen_dom:
                    rep.add("square_missing",
                            f"composable pair ({e.id}, {f}) of colors ({e.color}, {c}) has no square",
                            [e.id, f])
    for f in s.edges.values():
        for c in range(1, f.color):
            for e in s.edges_into(f.source, c):
                if (f.id, e) not in seen_cod:
                    rep.add("square_not_surjective",
                            f"pair ({f.id}, {e}) is not the image of any square", [f.id, e])
    if rep.issues:
        return rep

    if s.k >= 3:
        for e in s.edges.values():
            for f in (x for c in range(e.color + 1, s.k + 1) for x in s.edges_into(e.source, c)):
                cf = s.color(f)
                for g in (x for c in range(cf + 1, s.k + 1) for x in s.edges_into(s.edges[f].source, c)):
                    if _coherent(s, e.id, f, g):
                        continue
                    rep.add("coherence",
                            f"tri-colored path {e.id}{f}{g} reorders inconsistently",
                            [e.id, f, g])
    return rep


def _coherent(s: Skeleton, a: str, b: str, c: str) -> bool:
    def sw(seq, t):
        seq = list(seq)
        seq[t], seq[t + 1] = s.swap(seq[t], seq[t + 1])
        return seq

    one = sw(sw(sw([a, b, c], 0), 1), 0)
    two = sw(sw(sw([a, b, c], 1), 0), 1)
    return one == two
