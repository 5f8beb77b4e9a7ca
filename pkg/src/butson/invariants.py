"""Equivalence invariants: Haagerup set, minor fingerprint, Smith normal form.

All three are computed exactly.  The fingerprint stores squared minor
moduli (Gaussian norms), which are ordinary integers; minors of unit-entry
matrices of order <= 8 are bounded by 8**4 = 4096 componentwise, so the
vectorized int64 tables are exact with an enormous margin.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .gaussian import GaussianInt, canonical_associate, gaussian_divmod
from .matrix import ButsonMatrix

Fingerprint = tuple[tuple[int, tuple[tuple[int, int], ...]], ...]


class OrderTooSmallError(ValueError):
    """Fingerprint requested for a matrix of order below 4."""


def haagerup(h: ButsonMatrix) -> tuple[int, ...]:
    """Sorted exponents of the chord-product set {h_ij h_kl conj(h_il) conj(h_kj)}."""
    e = np.array(h.exponents, dtype=np.int16)
    col_diff = e[:, :, None] - e[:, None, :]  # (i, j, l)
    chords = (col_diff[:, None, :, :] - col_diff[None, :, :, :]) % h.q
    return tuple(int(x) for x in np.unique(chords))


def _unit_parts(h: ButsonMatrix) -> tuple[np.ndarray, np.ndarray]:
    step = 4 // h.q
    e = np.array(h.exponents, dtype=np.int64) * step
    re = np.where(e == 0, 1, np.where(e == 2, -1, 0))
    im = np.where(e == 1, 1, np.where(e == 3, -1, 0))
    return re, im


def _minor_norm_tables(h: ButsonMatrix, top: int) -> dict[int, np.ndarray]:
    """Squared moduli of all d x d minors for d = 2 .. top.

    Level d is built from level d-1 by Laplace expansion along the last row
    of each row subset, vectorized over all column subsets at once.
    """
    n = h.n
    hre, him = _unit_parts(h)
    subsets = {d: list(combinations(range(n), d)) for d in range(1, top + 1)}
    index = {d: {s: i for i, s in enumerate(subsets[d])} for d in range(1, top + 1)}

    re = hre.copy()
    im = him.copy()  # level 1: minors are the entries themselves
    norms: dict[int, np.ndarray] = {}
    for d in range(2, top + 1):
        cols = subsets[d]
        sub = np.empty((len(cols), d), dtype=np.int64)  # col subset minus one col
        at = np.empty((len(cols), d), dtype=np.int64)  # the removed col
        for ci, cs in enumerate(cols):
            for j in range(d):
                sub[ci, j] = index[d - 1][cs[:j] + cs[j + 1 :]]
                at[ci, j] = cs[j]
        signs = np.array([(-1) ** (d - 1 + j) for j in range(d)], dtype=np.int64)
        rest = np.array([index[d - 1][rs[:-1]] for rs in subsets[d]], dtype=np.int64)
        last = np.array([rs[-1] for rs in subsets[d]], dtype=np.int64)

        a_re = hre[last[:, None, None], at[None, :, :]]
        a_im = him[last[:, None, None], at[None, :, :]]
        b_re = re[rest[:, None, None], sub[None, :, :]]
        b_im = im[rest[:, None, None], sub[None, :, :]]
        re = ((a_re * b_re - a_im * b_im) * signs).sum(axis=2)
        im = ((a_re * b_im + a_im * b_re) * signs).sum(axis=2)
        norms[d] = re * re + im * im
    return norms


def fingerprint(h: ButsonMatrix) -> Fingerprint:
    """Per degree d = 2 .. n//2, the sorted (squared modulus, multiplicity) pairs
    over all C(n,d)^2 exact d x d minors."""
    if h.n < 4:
        raise OrderTooSmallError(f"fingerprint is defined for order >= 4, got {h.n}")
    norms = _minor_norm_tables(h, h.n // 2)
    out = []
    for d in range(2, h.n // 2 + 1):
        values, counts = np.unique(norms[d], return_counts=True)
        out.append((d, tuple((int(v), int(c)) for v, c in zip(values, counts))))
    return tuple(out)


def minor_exact(h: ButsonMatrix, rows: tuple[int, ...], cols: tuple[int, ...]) -> GaussianInt:
    """One exact minor via fraction-free elimination (cross-check path)."""
    from .gaussian import det_exact

    g = h.to_gaussian()
    return det_exact([[g[r][c] for c in cols] for r in rows])


def smith_normal_form(h: ButsonMatrix) -> tuple[GaussianInt, ...]:
    """Diagonal of the Smith normal form over Z[i], as canonical associates.

    Standard pivot reduction in the norm-Euclidean domain: clear the pivot
    row and column by division with remainder, then absorb any entry the
    pivot does not divide, so the divisibility chain d1 | d2 | ... holds.
    """
    n = h.n
    a = [row[:] for row in h.to_gaussian()]
    diag: list[GaussianInt] = []
    for t in range(n):
        pivot = None
        for i in range(t, n):
            for j in range(t, n):
                if not a[i][j].is_zero() and (pivot is None or a[i][j].norm() < best):
                    pivot, best = (i, j), a[i][j].norm()
        if pivot is None:
            diag.extend([GaussianInt(0, 0)] * (n - t))
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, n):
                if a[i][t].is_zero():
                    continue
                q, r = gaussian_divmod(a[i][t], a[t][t])
                for k in range(t, n):
                    a[i][k] = a[i][k] - q * a[t][k]
                if not r.is_zero():
                    a[t], a[i] = a[i], a[t]
                    dirty = True
            # clear row t
            for j in range(t + 1, n):
                if a[t][j].is_zero():
                    continue
                q, r = gaussian_divmod(a[t][j], a[t][t])
                for row in a:
                    row[j] = row[j] - q * row[t]
                if not r.is_zero():
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                    dirty = True
            if dirty:
                continue
            # pivot must divide everything below-right; absorb a violator
            violator = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    _, r = gaussian_divmod(a[i][j], a[t][t])
                    if not r.is_zero():
                        violator = i
                        break
                if violator is not None:
                    break
            if violator is None:
                break
            for k in range(t, n):
                a[t][k] = a[t][k] + a[violator][k]
        diag.append(a[t][t])
    return tuple(canonical_associate(z) for z in diag)
