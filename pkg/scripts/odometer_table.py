"""Print Per rank, basis and primitive-spectrum summary for a list of odometers.

    python scripts/odometer_table.py 2,3 2,4 2,4,8 --bound 2
"""
import argparse
import time

from sskg.config import SearchConfig
from sskg.periodicity import per_group
from sskg.prim import is_primitive_algebra, simplicity_report
from sskg.spec_io import build_odometer


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("odometers", nargs="+", help="comma-separated n_i, e.g. 2,3")
    ap.add_argument("--bound", type=int, default=3)
    args = ap.parse_args()
    print(f"{'n':<12}{'rank':>5}  {'basis':<28}{'primitive':<11}{'simple':<12}{'time':>7}")
    for spec in args.odometers:
        n = [int(x) for x in spec.split(",")]
        cfg = SearchConfig((args.bound,) * len(n))
        t = time.perf_counter()
        _, a = build_odometer(n)
        per = per_group(a, cfg.bound)
        prim = is_primitive_algebra(a, cfg.bound).value
        simple = simplicity_report(a, cfg.bound, cfg.max_vertices).value
        dt = time.perf_counter() - t
        print(f"{spec:<12}{per.rank:>5}  {str(per.basis):<28}{prim:<11}{simple:<12}{dt:>6.2f}s")


if __name__ == "__main__":
    main()
