"""Independent brute-force reference implementations used by the test suite.

Nothing here calls the periodicity engine or the tail/lattice code.
"""
from __future__ import annotations

import itertools
from functools import reduce

import sympy

from sskg.kgraph import degrees_upto


def cycline_brute(sk, a, mu, g, nu, depth):
    """Compare ``mu (g·lam)`` and ``nu lam`` on their common prefix for every
    ``lam`` of degree ``(depth, ..., depth)`` from ``s(nu)``.

    Returns None when they always agree, otherwise the first disagreeing ``lam``.
    Depths are tried in increasing order so a mismatch is found early;
    agreement at the largest depth implies agreement below it.
    """
    if mu.range != nu.range:
        return sk.vertex(nu.source)
    meet = tuple(min(x, y) for x, y in zip(mu.degree, nu.degree))
    if mu == nu and g == a.group.identity:
        return None  # both sides are the same expression
    for d in range(depth + 1):
        D = (d,) * sk.k
        n = tuple(m + d for m in meet)
        for lam in sk.enumerate_paths(nu.source, D):
            glam, _ = a.act_on_path(g, lam)
            left = sk.compose(mu, glam)
            right = sk.compose(nu, lam)
            if sk.factorize(left, n)[0].edges != sk.factorize(right, n)[0].edges:
                return lam
    return None


def odometer_per_rank(n):
    """Rank of {p in Z^k : prod n_i^p_i = 1} from prime exponent vectors."""
    primes = sorted(reduce(set.union, (set(sympy.factorint(x)) for x in n), set()))
    M = sympy.Matrix([[sympy.factorint(x).get(q, 0) for x in n] for q in primes])
    return len(n) - M.rank()


def smith_rank(rows):
    if not rows:
        return 0
    from sympy.matrices.normalforms import smith_normal_form
    S = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    return sum(1 for i in range(min(S.shape)) if S[i, i] != 0)


def paths_upto(sk, bound):
    for p in degrees_upto(bound):
        for v in sk.vertices:
            yield from sk.enumerate_paths(v, p)


def saturation_by_paths(sk, H, bound):
    """``{v : s(v Λ^p) ⊆ H for some p <= bound}``."""
    out = set()
    for v in sk.vertices:
        for p in degrees_upto(bound):
            if all(mu.source in H for mu in sk.enumerate_paths(v, p)):
                out.add(v)
                break
    return out


def is_tail_brute(sk, T, bound):
    T = set(T)
    if not T:
        return False
    paths = list(paths_upto(sk, bound))
    if any(mu.source in T and mu.range not in T for mu in paths):
        return False
    for v in T:
        for p in degrees_upto(bound):
            if not any(mu.source in T for mu in sk.enumerate_paths(v, p)):
                return False
    reach = {v: {mu.source for mu in paths if mu.range == v} for v in T}
    for v1, v2 in itertools.combinations(sorted(T), 2):
        if not (reach[v1] & reach[v2] & T):
            return False
    return True


def is_invariant_brute(sk, a, H, bound):
    H = set(H)
    G = a.group
    gens = [G.letter_elem(s) for s in G.letters()]
    if any(a.act_vertex(g, v) not in H for g in gens for v in H):
        return False
    for mu in paths_upto(sk, bound):
        if mu.range in H and mu.source not in H:
            return False
    return saturation_by_paths(sk, H, bound) <= H


def ideal_vertices_brute(sk, a, H, bound):
    """Vertices whose projection lies in the ideal generated by ``{p_v : v in H}``.

    Rederived from the relations: the ideal contains ``p_{s(mu)}`` whenever it
    contains ``p_{r(mu)}`` (since ``s_mu^* p_{r(mu)} s_mu = p_{s(mu)}``), is
    stable under ``u_g``, and contains ``p_v`` once it contains every
    ``p_{s(mu)}`` for ``mu`` in ``v Λ^p``.
    """
    G = a.group
    gens = [G.letter_elem(s) for s in G.letters()]
    paths = list(paths_upto(sk, bound))
    cur = set(H)
    while True:
        new = set(cur)
        new |= {mu.source for mu in paths if mu.range in cur}
        new |= {a.act_vertex(g, v) for g in gens for v in cur}
        new |= saturation_by_paths(sk, cur, bound)
        if new == cur:
            return cur
        cur = new
