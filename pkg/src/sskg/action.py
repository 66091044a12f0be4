"""Self-similar group actions given by an automaton on the 1-skeleton.

Generators act on edges and vertices; every other group element acts through
its canonical word, with restrictions multiplied by the cocycle rule.
Inverse generators are derived, never supplied.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .groups import Elem, FiniteGroup, Group, Letter
from .kgraph import Degree, Path, Skeleton, ValidationReport, degree_le, degrees_upto
from .verdicts import BOUND_QUALIFIED, CERTIFIED, VIOLATED, Verdict

DEFAULT_STATE_CAP = 200_000


class ActionError(ValueError):
    pass


class ActionAutomaton:
    def __init__(self, group: Group, skeleton: Skeleton,
                 edge_map: dict[tuple[int, str], tuple[str, Elem]],
                 vertex_map: dict[tuple[int, str], str] | None = None):
        self.group = group
        self.skeleton = skeleton
        self.edge_map = dict(edge_map)
        vm = dict(vertex_map or {})
        for gi in range(len(group.gen_names)):
            for v in skeleton.vertices:
                vm.setdefault((gi, v), v)
        self.vertex_map = vm
        self._inv_edge: dict[tuple[int, str], tuple[str, Elem]] = {}
        self._inv_vertex: dict[tuple[int, str], str] = {}
        for (gi, e), (img, res) in self.edge_map.items():
            self._inv_edge.setdefault((gi, img), (e, group.inv(res)))
        for (gi, v), img in self.vertex_map.items():
            self._inv_vertex.setdefault((gi, img), v)
        self._edge_cache: dict[tuple[Elem, str], tuple[str, Elem]] = {}
        self._path_cache: dict[tuple[Elem, tuple[str, ...], str], tuple[Path, Elem]] = {}

    # -- letters ----------------------------------------------------------
    def letter_edge(self, letter: Letter, e: str) -> tuple[str, Elem]:
        gi, sign = letter
        table = self.edge_map if sign == 1 else self._inv_edge
        try:
            return table[(gi, e)]
        except KeyError:
            name = self.group.gen_names[gi] + ("" if sign == 1 else "^-1")
            raise ActionError(f"generator {name} has no image for edge {e}") from None

    def letter_vertex(self, letter: Letter, v: str) -> str:
        gi, sign = letter
        table = self.vertex_map if sign == 1 else self._inv_vertex
        try:
            return table[(gi, v)]
        except KeyError:
            raise ActionError(f"generator {self.group.gen_names[gi]} has no image for vertex {v}") from None

    # -- elements ---------------------------------------------------------
    def act_edge(self, g: Elem, e: str) -> tuple[str, Elem]:
        """``(g·e, g|_e)``."""
        key = (g, e)
        hit = self._edge_cache.get(key)
        if hit is not None:
            return hit
        parts = self.group.split(g)
        if parts is not None:
            # g = g1 g2 acts by g2 first
            mid, r2 = self.act_edge(parts[1], e)
            cur, r1 = self.act_edge(parts[0], mid)
            res = (cur, self.group.mul(r1, r2))
            self._edge_cache[key] = res
            return res
        try:
            word = self.group.word(g)
        except ValueError as exc:
            raise ActionError(str(exc)) from None
        cur, res = e, self.group.identity
        for letter in reversed(word):
            cur, r = self.letter_edge(letter, cur)
            res = self.group.mul(r, res)
        self._edge_cache[key] = (cur, res)
        return cur, res

    def act_vertex(self, g: Elem, v: str) -> str:
        parts = self.group.split(g)
        if parts is not None:
            return self.act_vertex(parts[0], self.act_vertex(parts[1], v))
        cur = v
        for letter in reversed(self.group.word(g)):
            cur = self.letter_vertex(letter, cur)
        return cur

    def act_on_path(self, g: Elem, mu: Path) -> tuple[Path, Elem]:
        """``(g·mu, g|_mu)`` computed edge by edge from the range end."""
        if not mu.edges:
            w = self.act_vertex(g, mu.range)
            return Path(w, w, (), mu.degree), g
        key = (g, mu.edges, mu.range)
        hit = self._path_cache.get(key)
        if hit is not None:
            return hit
        h = g
        out = []
        for e in mu.edges:
            e2, h = self.act_edge(h, e)
            out.append(e2)
        sk = self.skeleton
        res = (Path(sk.edges[out[0]].range, sk.edges[out[-1]].source, tuple(out), mu.degree), h)
        if len(self._path_cache) > 400_000:
            self._path_cache.clear()
        self._path_cache[key] = res
        return res

    def generator_elems(self) -> list[Elem]:
        return [self.group.letter_elem((i, 1)) for i in range(len(self.group.gen_names))]

    def restrict(self, skeleton: Skeleton) -> "ActionAutomaton":
        """The same action on a sub-skeleton (edges outside it are dropped)."""
        em = {(gi, e): v for (gi, e), v in self.edge_map.items() if e in skeleton.edges}
        vm = {(gi, v): w for (gi, v), w in self.vertex_map.items() if v in skeleton.vertex_index}
        return ActionAutomaton(self.group, skeleton, em, vm)


def trivial_action(skeleton: Skeleton, group: Group | None = None,
                   restriction_is_self: bool = False) -> ActionAutomaton:
    """Every element fixes every path; restrictions are trivial or equal to ``g``."""
    group = group or FiniteGroup.cyclic(1)
    em = {}
    for gi in range(len(group.gen_names)):
        g = group.letter_elem((gi, 1))
        for e in skeleton.edges:
            em[(gi, e)] = (e, g if restriction_is_self else group.identity)
    return ActionAutomaton(group, skeleton, em)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _check_pairs(a: ActionAutomaton) -> list[tuple[Elem, Letter]]:
    G = a.group
    if isinstance(G, FiniteGroup):
        return [(x, s) for x in G.elements() for s in G.letters()]
    elems = [G.identity] + [G.letter_elem(s) for s in G.letters()]
    return [(x, s) for x in elems for s in G.letters()]


def validate_action(a: ActionAutomaton, s: Skeleton | None = None) -> ValidationReport:
    """Check the self-similarity axioms on generators, with witnesses."""
    s = s or a.skeleton
    G = a.group
    rep = ValidationReport()
    gens = range(len(G.gen_names))
    for gi in gens:
        name = G.gen_names[gi]
        images = []
        for e in sorted(s.edges):
            if (gi, e) not in a.edge_map:
                rep.add("incomplete", f"generator {name} has no image for edge {e}", [name, e])
                continue
            img, res = a.edge_map[(gi, e)]
            if img not in s.edges:
                rep.add("incomplete", f"generator {name} sends {e} to unknown edge {img}", [name, e])
                continue
            images.append(img)
            src, dst = s.edges[e], s.edges[img]
            if src.color != dst.color:
                rep.add("color", f"{name}·{e} = {img} changes color", [name, e])
            if a.vertex_map[(gi, src.source)] != dst.source or a.vertex_map[(gi, src.range)] != dst.range:
                rep.add("endpoints", f"{name}·{e} = {img} is not source/range equivariant", [name, e])
        if len(set(images)) != len(images):
            rep.add("bijection", f"generator {name} is not injective on edges", name)
        vimg = [a.vertex_map[(gi, v)] for v in s.vertices]
        if sorted(vimg) != sorted(s.vertices):
            rep.add("bijection", f"generator {name} is not a bijection on vertices", name)
    if rep.issues:
        return rep

    for e in sorted(s.edges):
        if a.act_edge(G.identity, e) != (e, G.identity):
            rep.add("identity", f"identity does not act trivially on {e}", e)

    for letter in G.letters():
        g = G.letter_elem(letter)
        for sq in s.squares:
            one = a.act_on_path(g, s.path([sq.i_edge, sq.j_edge]))
            raw = []
            h = g
            for e in (sq.j_then, sq.i_then):
                e2, h = a.act_edge(h, e)
                raw.append(e2)
            two_path = s.path(raw)
            if one[0] != two_path or one[1] != h:
                rep.add("square_compatibility",
                        f"acting by {_lname(G, letter)} on {sq.i_edge}{sq.j_edge} = {sq.j_then}{sq.i_then} "
                        f"gives {one[0]} (restriction {G.encode(one[1])}) versus {two_path} "
                        f"(restriction {G.encode(h)})",
                        {"g": _lname(G, letter), "square": [sq.i_edge, sq.j_edge, sq.j_then, sq.i_then]})

    for x, letter in _check_pairs(a):
        y = G.letter_elem(letter)
        for e in sorted(s.edges):
            e1, r1 = a.act_edge(y, e)
            e2, r2 = a.act_edge(x, e1)
            want = (e2, G.mul(r2, r1))
            got = a.act_edge(G.mul(x, y), e)
            if got != want:
                rep.add("cocycle",
                        f"(g h)|_{e} differs from g|_(h·{e}) h|_{e} for g={G.encode(x)}, h={_lname(G, letter)}",
                        {"g": G.encode(x), "h": _lname(G, letter), "edge": e})
                break
    return rep


def _lname(G: Group, letter: Letter) -> str:
    return G.gen_names[letter[0]] + ("" if letter[1] == 1 else "^-1")


# ---------------------------------------------------------------------------
# nucleus and freeness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Nucleus:
    elements: frozenset
    cap_exceeded: bool

    def __len__(self) -> int:
        return len(self.elements)


def nucleus_closure(a: ActionAutomaton, cap: int = 1000) -> Nucleus:
    G = a.group
    start = [G.identity] + [G.letter_elem(s) for s in G.letters()]
    seen = set()
    queue = deque()
    for g in start:
        if g not in seen:
            seen.add(g)
            queue.append(g)
    edges = sorted(a.skeleton.edges)
    while queue:
        g = queue.popleft()
        for e in edges:
            _, r = a.act_edge(g, e)
            if r not in seen:
                if len(seen) >= cap:
                    return Nucleus(frozenset(seen), True)
                seen.add(r)
                queue.append(r)
    return Nucleus(frozenset(seen), False)


def candidate_elements(a: ActionAutomaton, nucleus: Nucleus) -> tuple[list[Elem], str]:
    """Nontrivial elements scanned by the freeness checks and a scope label."""
    G = a.group
    if isinstance(G, FiniteGroup):
        return [g for g in G.elements() if g != G.identity], "all group elements"
    return sorted(g for g in nucleus.elements if g != G.identity), "nucleus elements"


def is_pseudo_free(a: ActionAutomaton, s: Skeleton | None = None,
                   nucleus: Nucleus | None = None,
                   state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """Search for ``g != 1`` and a path it fixes with trivial restriction."""
    s = s or a.skeleton
    nucleus = nucleus or nucleus_closure(a)
    G = a.group
    if nucleus.cap_exceeded and not isinstance(G, FiniteGroup):
        return Verdict("unknown", BOUND_QUALIFIED, note="nucleus cap exceeded")
    cands, scope = candidate_elements(a, nucleus)
    for g in cands:
        for v in s.vertices:
            if a.act_vertex(g, v) != v:
                continue
            parent = {(g, v): None}
            queue = deque([(g, v)])
            while queue:
                h, w = queue.popleft()
                for c in range(1, s.k + 1):
                    for e in s.edges_into(w, c):
                        e2, h2 = a.act_edge(h, e)
                        if e2 != e:
                            continue
                        nxt = (h2, s.edges[e].source)
                        if nxt in parent:
                            continue
                        parent[nxt] = ((h, w), e)
                        if h2 == G.identity:
                            edges = _trace(parent, nxt)
                            mu = s.path(edges)
                            return Verdict("no", VIOLATED, witness={"g": G.encode(g), "path": mu})
                        if len(parent) > state_cap:
                            return Verdict("unknown", BOUND_QUALIFIED, note="state cap exceeded")
                        queue.append(nxt)
    return Verdict("yes", CERTIFIED, note=f"exhaustive over {scope}")


def _trace(parent, node) -> list[str]:
    edges = []
    while parent[node] is not None:
        node, e = parent[node]
        edges.append(e)
    return edges[::-1]


def fixes_all_paths(a: ActionAutomaton, g: Elem, v: str,
                    state_cap: int = DEFAULT_STATE_CAP) -> bool | None:
    """Whether ``g`` fixes every path in ``vΛ`` (None when the state cap is hit)."""
    s = a.skeleton
    if a.act_vertex(g, v) != v:
        return False
    seen = {(g, v)}
    queue = deque([(g, v)])
    while queue:
        h, w = queue.popleft()
        for c in range(1, s.k + 1):
            for e in s.edges_into(w, c):
                e2, h2 = a.act_edge(h, e)
                if e2 != e:
                    return False
                nxt = (h2, s.edges[e].source)
                if nxt not in seen:
                    if len(seen) > state_cap:
                        return None
                    seen.add(nxt)
                    queue.append(nxt)
    return True


def _moves_all(a: ActionAutomaton, g: Elem, v: str, p: Degree) -> bool:
    for mu in a.skeleton.enumerate_paths(v, p):
        if a.act_on_path(g, mu)[0] == mu:
            return False
    return True


def faithfulness_report(a: ActionAutomaton, s: Skeleton | None = None,
                        nucleus: Nucleus | None = None,
                        depth_bound: Degree | None = None) -> dict[str, Verdict]:
    s = s or a.skeleton
    nucleus = nucleus or nucleus_closure(a)
    depth_bound = tuple(depth_bound or (2,) * s.k)
    G = a.group

    moved = [(G.gen_names[gi], v) for gi in range(len(G.gen_names)) for v in s.vertices
             if a.vertex_map[(gi, v)] != v]
    fv = Verdict("yes", CERTIFIED) if not moved else Verdict("no", VIOLATED, witness=moved[0])

    cands, scope = candidate_elements(a, nucleus)
    degrees = sorted(degrees_upto(depth_bound), key=lambda p: (sum(p), p))
    lf_witness = None
    slf_witness: dict[str, list] = {}
    slf_missing = []
    slf_no = None
    for g in cands:
        for v in s.vertices:
            fixed = fixes_all_paths(a, g, v)
            if fixed:
                lf_witness = lf_witness or {"g": G.encode(g), "vertex": v}
                slf_no = slf_no or {"g": G.encode(g), "vertex": v}
                continue
            hit = next((p for p in degrees if degree_le(p, depth_bound) and _moves_all(a, g, v, p)), None)
            if hit is None:
                slf_missing.append({"g": G.encode(g), "vertex": v})
            else:
                slf_witness[f"{G.encode(g)}@{v}"] = list(hit)
    if lf_witness is not None:
        lf = Verdict("no", VIOLATED, witness=lf_witness, note=f"scope: {scope}")
    else:
        lf = Verdict("yes", CERTIFIED, note=f"scope: {scope}")
    if slf_no is not None:
        slf = Verdict("no", VIOLATED, witness=slf_no,
                      note="element fixes every path from the vertex")
    elif slf_missing:
        slf = Verdict("unknown", BOUND_QUALIFIED, witness=slf_missing[0], bound=depth_bound)
    else:
        slf = Verdict("yes", CERTIFIED, witness=slf_witness, note=f"scope: {scope}")
    return {"fv": fv, "locally_faithful": lf, "strongly_locally_faithful": slf}
