"""JSON graph specs, the odometer family, report documents and DOT export."""
from __future__ import annotations

import hashlib
import json
from typing import Any

from . import __version__
from .action import ActionAutomaton, validate_action
from .groups import FiniteGroup, FreeAbelianGroup, Group
from .kgraph import Edge, Skeleton, Square, _jsonable, validate_skeleton

TOP_KEYS = {"k", "vertices", "edges", "squares", "group", "action", "vertex_action"}
EDGE_KEYS = {"id", "color", "source", "range"}
SQUARE_KEYS = {"i_edge", "j_edge", "j_then", "i_then"}
GROUP_KEYS = {"kind", "order", "rank", "generators", "table", "names"}
ACTION_KEYS = {"g", "edge", "image", "restriction"}
VACTION_KEYS = {"g", "vertex", "image"}


class SpecError(ValueError):
    """Parse or validation failure with one diagnostic per problem."""

    def __init__(self, diagnostics: list[dict]):
        self.diagnostics = diagnostics
        first = diagnostics[0] if diagnostics else {"pointer": "", "message": "invalid spec"}
        more = f" (+{len(diagnostics) - 1} more)" if len(diagnostics) > 1 else ""
        super().__init__(f"{first['pointer'] or '/'}: {first['message']}{more}")


class _Diag:
    def __init__(self):
        self.items: list[dict] = []

    def add(self, pointer: str, message: str, kind: str = "parse", witness=None):
        d = {"pointer": pointer, "message": message, "kind": kind}
        if witness is not None:
            d["witness"] = _jsonable(witness)
        self.items.append(d)

    def keys(self, obj, allowed: set, required: set, pointer: str) -> bool:
        if not isinstance(obj, dict):
            self.add(pointer, "expected an object")
            return False
        ok = True
        for key in sorted(set(obj) - allowed):
            self.add(f"{pointer}/{key}", f"unknown key {key!r}")
            ok = False
        for key in sorted(required - set(obj)):
            self.add(pointer, f"missing key {key!r}")
            ok = False
        return ok


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _build_group(doc, d: _Diag) -> Group | None:
    if not d.keys(doc, GROUP_KEYS, {"kind"}, "/group"):
        return None
    kind = doc["kind"]
    names = doc.get("names")
    try:
        if kind == "finite":
            if "table" in doc:
                table = doc["table"]
            elif _is_int(doc.get("order")) and doc["order"] >= 1:
                n = doc["order"]
                table = [[(a + b) % n for b in range(n)] for a in range(n)]
            else:
                d.add("/group", "finite groups need a positive 'order' or a 'table'")
                return None
            if "order" in doc and len(table) != doc["order"]:
                d.add("/group/order", f"order {doc['order']} disagrees with a table of size {len(table)}")
                return None
            gens = doc.get("generators", [1] if len(table) > 1 else [])
            if names is None:
                names = [str(g) for g in gens]
            return FiniteGroup(table, gens, names)
        if kind == "free_abelian":
            rank = doc.get("rank", 1)
            if not _is_int(rank):
                d.add("/group/rank", "rank must be an integer")
                return None
            if "generators" in doc and names is None:
                names = [str(g) for g in doc["generators"]]
            return FreeAbelianGroup(rank, names)
    except ValueError as exc:
        d.add("/group", str(exc))
        return None
    d.add("/group/kind", f"unsupported group kind {kind!r}; use 'finite' or 'free_abelian'")
    return None


def _gen_index(G: Group, g, pointer: str, d: _Diag) -> int | None:
    key = str(g)
    if key in G.gen_names:
        return G.gen_names.index(key)
    if isinstance(G, FreeAbelianGroup) and _is_int(g) and 0 <= g < G.rank:
        return g
    d.add(pointer, f"unknown generator {g!r}; generators are {list(G.gen_names)}")
    return None


def parse_spec(data: bytes | str | dict, validate: bool = True) -> tuple[Skeleton, ActionAutomaton]:
    """Read a JSON spec into a validated ``(Skeleton, ActionAutomaton)``."""
    d = _Diag()
    if isinstance(data, dict):
        doc = data
    else:
        if isinstance(data, bytes):
            try:
                data = data.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise SpecError([{"pointer": "", "message": f"not UTF-8: {exc}", "kind": "parse"}])
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SpecError([{"pointer": "", "kind": "parse",
                              "message": f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"}])
    if not d.keys(doc, TOP_KEYS, {"k", "vertices", "edges"}, ""):
        raise SpecError(d.items)

    k = doc["k"]
    if not _is_int(k) or k < 1:
        d.add("/k", "k must be a positive integer")
        raise SpecError(d.items)
    vertices = doc["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        d.add("/vertices", "vertices must be a list of strings")
        raise SpecError(d.items)
    if len(set(vertices)) != len(vertices):
        d.add("/vertices", "duplicate vertex names")
    vset = set(vertices)

    edges = []
    ids = set()
    for n, e in enumerate(doc["edges"] if isinstance(doc["edges"], list) else []):
        ptr = f"/edges/{n}"
        if not d.keys(e, EDGE_KEYS, EDGE_KEYS, ptr):
            continue
        if e["id"] in ids:
            d.add(f"{ptr}/id", f"duplicate edge id {e['id']!r}")
            continue
        if not _is_int(e["color"]) or not 1 <= e["color"] <= k:
            d.add(f"{ptr}/color", f"color must be in 1..{k}")
            continue
        bad = False
        for end in ("source", "range"):
            if e[end] not in vset:
                d.add(f"{ptr}/{end}", f"unknown vertex {e[end]!r}", "dangling_id")
                bad = True
        if bad:
            continue
        ids.add(e["id"])
        edges.append(Edge(e["id"], e["color"], e["source"], e["range"]))

    squares = []
    for n, s in enumerate(doc.get("squares", [])):
        ptr = f"/squares/{n}"
        if not d.keys(s, SQUARE_KEYS, SQUARE_KEYS, ptr):
            continue
        missing = [f for f in ("i_edge", "j_edge", "j_then", "i_then") if s[f] not in ids]
        for f in missing:
            d.add(f"{ptr}/{f}", f"unknown edge {s[f]!r}", "dangling_id")
        if not missing:
            squares.append(Square(s["i_edge"], s["j_edge"], s["j_then"], s["i_then"]))

    G = _build_group(doc.get("group", {"kind": "finite", "order": 1}), d)
    if d.items or G is None:
        raise SpecError(d.items)

    edge_map = {}
    for n, row in enumerate(doc.get("action", [])):
        ptr = f"/action/{n}"
        if not d.keys(row, ACTION_KEYS, ACTION_KEYS, ptr):
            continue
        gi = _gen_index(G, row["g"], f"{ptr}/g", d)
        for f in ("edge", "image"):
            if row[f] not in ids:
                d.add(f"{ptr}/{f}", f"unknown edge {row[f]!r}", "dangling_id")
        try:
            res = G.decode(row["restriction"])
        except ValueError as exc:
            d.add(f"{ptr}/restriction", str(exc))
            continue
        if gi is None or row["edge"] not in ids or row["image"] not in ids:
            continue
        if (gi, row["edge"]) in edge_map:
            d.add(ptr, f"generator {row['g']!r} acts on {row['edge']!r} twice")
            continue
        edge_map[(gi, row["edge"])] = (row["image"], res)
    vertex_map = {}
    for n, row in enumerate(doc.get("vertex_action", [])):
        ptr = f"/vertex_action/{n}"
        if not d.keys(row, VACTION_KEYS, VACTION_KEYS, ptr):
            continue
        gi = _gen_index(G, row["g"], f"{ptr}/g", d)
        for f in ("vertex", "image"):
            if row[f] not in vset:
                d.add(f"{ptr}/{f}", f"unknown vertex {row[f]!r}", "dangling_id")
        if gi is not None and row["vertex"] in vset and row["image"] in vset:
            vertex_map[(gi, row["vertex"])] = row["image"]
    if d.items:
        raise SpecError(d.items)

    sk = Skeleton(k, vertices, edges, squares)
    a = ActionAutomaton(G, sk, edge_map, vertex_map)
    if validate:
        _validate_into(sk, a, d)
        if d.items:
            raise SpecError(d.items)
    return sk, a


def _validate_into(sk: Skeleton, a: ActionAutomaton, d: _Diag) -> None:
    rep = validate_skeleton(sk)
    for issue in rep.issues:
        d.add("/squares" if issue.kind.startswith("square") or issue.kind == "coherence" else "/edges",
              issue.message, issue.kind, issue.witness)
    if rep.ok:
        for issue in validate_action(a).issues:
            d.add("/action", issue.message, issue.kind, issue.witness)


def emit_spec(sk: Skeleton, a: ActionAutomaton) -> dict:
    G = a.group
    if isinstance(G, FiniteGroup):
        group = {"kind": "finite", "order": G.order, "generators": list(G.generators),
                 "names": list(G.gen_names), "table": G.table}
    else:
        group = {"kind": "free_abelian", "rank": G.rank, "names": list(G.gen_names)}
    action = []
    for gi, name in enumerate(G.gen_names):
        for e in sk.edges:
            if (gi, e) in a.edge_map:
                img, res = a.edge_map[(gi, e)]
                action.append({"g": name, "edge": e, "image": img, "restriction": G.encode(res)})
    vaction = [{"g": G.gen_names[gi], "vertex": v, "image": w}
               for (gi, v), w in sorted(a.vertex_map.items()) if v != w]
    doc = {
        "k": sk.k,
        "vertices": list(sk.vertices),
        "edges": [{"id": e.id, "color": e.color, "source": e.source, "range": e.range}
                  for e in sk.edges.values()],
        "squares": [{"i_edge": s.i_edge, "j_edge": s.j_edge, "j_then": s.j_then, "i_then": s.i_then}
                    for s in sk.squares],
        "group": group,
        "action": action,
    }
    if vaction:
        doc["vertex_action"] = vaction
    return doc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# odometers
# ---------------------------------------------------------------------------

def build_odometer(n: list[int] | tuple[int, ...]) -> tuple[Skeleton, ActionAutomaton]:
    """Product of odometers on one vertex with ``n[i]`` edges of color ``i+1``."""
    n = list(n)
    if not n:
        raise ValueError("need at least one factor")
    if any(not _is_int(x) or x <= 1 for x in n):
        raise ValueError(f"every n_i must be an integer > 1, got {n}")
    k = len(n)
    name = lambda i, s: f"x{i + 1}_{s}"  # noqa: E731
    edges = [Edge(name(i, s), i + 1, "v", "v") for i in range(k) for s in range(n[i])]
    squares = []
    for i in range(k):
        for j in range(i + 1, k):
            for s in range(n[i]):
                for t in range(n[j]):
                    N = s + t * n[i]
                    squares.append(Square(name(i, s), name(j, t), name(j, N % n[j]), name(i, N // n[j])))
    sk = Skeleton(k, ["v"], edges, squares)
    G = FreeAbelianGroup(1, ["1"])
    em = {}
    for i in range(k):
        for s in range(n[i]):
            em[(0, name(i, s))] = (name(i, (s + 1) % n[i]), (1,) if s == n[i] - 1 else (0,))
    return sk, ActionAutomaton(G, sk, em)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def input_digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def report(command: list[str], raw: bytes | None, bounds: dict, verdicts: dict, results: dict) -> dict:
    """Report document; bound-qualified verdicts always carry the bound used."""
    vd = {}
    for name, v in verdicts.items():
        d = v.as_dict() if hasattr(v, "as_dict") else dict(v)
        if d.get("certification") == "bound_qualified" and "bound" not in d:
            d["bound"] = bounds.get("degree")
        vd[name] = d
    return {
        "tool_version": __version__,
        "input_digest": input_digest(raw) if raw is not None else None,
        "command": list(command),
        "bounds": _jsonable(bounds),
        "verdicts": vd,
        "results": _jsonable(results),
    }


def to_dot(sk: Skeleton) -> str:
    palette = ["blue", "red", "darkgreen", "orange", "purple", "brown"]
    lines = ["digraph skeleton {", "  rankdir=LR;"]
    for v in sk.vertices:
        lines.append(f'  "{v}";')
    for e in sk.edges.values():
        color = palette[(e.color - 1) % len(palette)]
        lines.append(f'  "{e.source}" -> "{e.range}" [label="{e.id}", color={color}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
