"""Regenerate the JSON files in corpus/ from their constructions."""
import argparse
from pathlib import Path

from sskg.action import ActionAutomaton, trivial_action
from sskg.groups import FiniteGroup
from sskg.kgraph import Edge, Skeleton
from sskg.spec_io import build_odometer, dumps, emit_spec


def one_graph(vertices, edges):
    return Skeleton(1, vertices, [Edge(i, 1, s, r) for i, s, r in edges])


def e5():
    sk = one_graph(["u", "w"], [("a", "u", "u"), ("b", "w", "w"), ("c", "w", "u")])
    return sk, trivial_action(sk)


def e6():
    sk = one_graph(["u", "w"], [("xu", "u", "u"), ("yu", "u", "u"),
                                ("xw", "w", "w"), ("yw", "w", "w"), ("c", "u", "w")])
    return sk, trivial_action(sk)


def c3():
    sk = one_graph(["v0", "v1", "v2"], [("e0", "v1", "v0"), ("e1", "v2", "v1"), ("e2", "v0", "v2")])
    return sk, trivial_action(sk)


def trivial_z2():
    sk = one_graph(["v"], [("x", "v", "v"), ("y", "v", "v")])
    return sk, trivial_action(sk, FiniteGroup.cyclic(2), restriction_is_self=True)


def corpus() -> dict[str, tuple[Skeleton, ActionAutomaton]]:
    out = {"trivial_z2": trivial_z2(), "e5": e5(), "e6": e6(), "c3": c3()}
    for n in [(2,), (2, 3), (2, 4), (2, 2), (2, 4, 8)]:
        out["odometer_" + "_".join(map(str, n))] = build_odometer(n)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "corpus"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, (sk, a) in corpus().items():
        (out / f"{name}.json").write_text(dumps(emit_spec(sk, a)))
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main()
