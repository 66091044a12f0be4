"""Integer row lattices in Z^k: Hermite normal form, rank, membership."""
from __future__ import annotations

from typing import Iterable, Sequence

Vec = tuple[int, ...]


def hnf(rows: Iterable[Sequence[int]]) -> list[Vec]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive, entries above a pivot are reduced into ``[0, pivot)``
    and zero rows are dropped, so equal lattices give equal output.
    """
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    out: list[list[int]] = []
    col = 0
    while mat and col < ncols:
        nz = [r for r in mat if r[col] != 0]
        rest = [r for r in mat if r[col] == 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[col] != 0:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        mat = [r for r in rest if any(r)]
        col += 1
    for i, row in enumerate(out):
        c = next(j for j, a in enumerate(row) if a)
        for up in range(i):
            q = out[up][c] // row[c]
            if q:
                out[up] = [a - q * b for a, b in zip(out[up], row)]
    return [tuple(r) for r in out]


def rank(rows: Iterable[Sequence[int]]) -> int:
    return len(hnf(rows))


def contains(basis: Sequence[Sequence[int]], z: Sequence[int]) -> bool:
    if not any(z):
        return True
    return hnf(list(basis) + [z]) == hnf(basis)
