"""Deciding equivalence with explicit witnesses, and canonical forms.

Two routes are implemented independently and cross-check each other:

* ``canonical_form``: branch-and-bound orbit minimization (see ``canon``);
  equal keys <=> equivalent.
* ``are_equivalent``: witness-producing backtracking over row assignments.
  Row phases cancel out of row-difference profiles, so columns are matched
  by progressive partition refinement and phases are forced afterwards from
  the first assigned row.

Every witness returned anywhere is verified before being handed out.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import canon
from .gaussian import PhaseExponent
from .invariants import fingerprint, haagerup
from .matrix import ButsonMatrix, EquivalenceWitness

SELF_TRANSPOSE_EQUIVALENT = "self"
TRANSPOSE_PAIRED = "paired"


@dataclass(frozen=True)
class CanonicalForm:
    """Orbit minimum of a matrix: the dephased grid, its flat key, a witness."""

    matrix: ButsonMatrix
    key: tuple[int, ...]
    witness: EquivalenceWitness  # applies to the source matrix, yields ``matrix``


@lru_cache(maxsize=1 << 14)
def _canonical_key_cached(q: int, exponents) -> tuple[tuple[int, ...], ...]:
    return canon.canonical_key(exponents, q)


def canonical_key(h: ButsonMatrix) -> tuple[int, ...]:
    """Flat row-major exponent sequence of the canonical form (fast path)."""
    grid = _canonical_key_cached(h.q, h.exponents)
    return tuple(x for row in grid for x in row)


def canonical_form(h: ButsonMatrix) -> CanonicalForm:
    """Canonical matrix, key, and a verified witness from ``h`` to it."""
    grid, (row_order, col_order) = canon.canonical_transform(h.exponents, h.q)
    e = h.exponents
    q = h.q
    a, c = row_order[0], col_order[0]
    rph = tuple(PhaseExponent(-e[r][c] + e[a][c], q) for r in row_order)
    cph = tuple(PhaseExponent(-e[a][k], q) for k in col_order)
    w = EquivalenceWitness(tuple(row_order), rph, cph, tuple(col_order))
    mat = ButsonMatrix._from_trusted(q, h.n, grid)
    if h.apply_witness(w).exponents != grid:
        raise AssertionError("canonical transform failed to reproduce its own key")
    return CanonicalForm(mat, tuple(x for row in grid for x in row), w)


def verify_witness(h: ButsonMatrix, k: ButsonMatrix, w: EquivalenceWitness) -> bool:
    """True iff applying the witness to h reproduces k entrywise."""
    if (h.q, h.n) != (k.q, k.n):
        return False
    return h.apply_witness(w).exponents == k.exponents


def _shift_hist(hist: tuple[int, ...], s: int) -> tuple[int, ...]:
    q = len(hist)
    return tuple(hist[(v - s) % q] for v in range(q))


def _witness_search(h: ButsonMatrix, k: ButsonMatrix) -> EquivalenceWitness | None:
    """Backtracking row assignment with column-partition refinement.

    Looks for rp, row/col phases and cp with
    K[j][m] = rph[j] + H[rp[j]][cp[m]] + cph[m].  Subtracting the first
    assigned row removes all column phases: for j >= 1 the difference rows
    must match up to a per-row shift, which prunes via value histograms and
    progressively refines the column correspondence.
    """
    q, n = h.q, h.n
    he, ke = h.exponents, k.exponents

    def diff(rows, base, r):
        return tuple((rows[r][m] - rows[base][m]) % q for m in range(n))

    def hist(vals):
        out = [0] * q
        for v in vals:
            out[v] += 1
        return tuple(out)

    for r0 in range(n):
        # blocks: parallel (K-cols, H-cols) classes that any cp must respect
        blocks = [(tuple(range(n)), tuple(range(n)))]
        used = {r0}
        assign = [r0]

        def place(j, blocks, used, assign):
            if len(blocks) == n or j == n:
                return finish(blocks, used, assign)
            dk = diff(ke, 0, j)
            hk = hist(dk)
            for r in range(n):
                if r in used:
                    continue
                dh = diff(he, r0, r)
                for s in range(q):
                    if _shift_hist(hist(dh), s) != hk:
                        continue
                    nb = []
                    ok = True
                    for kcols, hcols in blocks:
                        kgroups: dict[int, list[int]] = {}
                        hgroups: dict[int, list[int]] = {}
                        for m in kcols:
                            kgroups.setdefault(dk[m], []).append(m)
                        for m in hcols:
                            hgroups.setdefault((dh[m] + s) % q, []).append(m)
                        if sorted(kgroups) != sorted(hgroups) or any(
                            len(kgroups[v]) != len(hgroups[v]) for v in kgroups
                        ):
                            ok = False
                            break
                        for v in sorted(kgroups):
                            nb.append((tuple(kgroups[v]), tuple(hgroups[v])))
                    if not ok:
                        continue
                    out = place(j + 1, nb, used | {r}, assign + [r])
                    if out is not None:
                        return out
            return None

        def finish(blocks, used, assign):
            # column map fixed (or all rows placed); fill the rest directly
            cp = [0] * n
            for kcols, hcols in blocks:
                for km, hm in zip(kcols, hcols):
                    cp[km] = hm
            rp = list(assign)
            rows_left = [r for r in range(n) if r not in used]
            for j in range(len(assign), n):
                dk = diff(ke, 0, j)
                found = None
                for r in rows_left:
                    dh = diff(he, r0, r)
                    s = (dk[0] - dh[cp[0]]) % q
                    if all((dh[cp[m]] + s) % q == dk[m] for m in range(n)):
                        found = r
                        break
                if found is None:
                    return None
                rows_left.remove(found)
                rp.append(found)
            cph = tuple(PhaseExponent(ke[0][m] - he[r0][cp[m]], q) for m in range(n))
            rph = tuple(
                PhaseExponent(ke[j][0] - he[rp[j]][cp[0]] - cph[0].k, q) for j in range(n)
            )
            w = EquivalenceWitness(tuple(rp), rph, cph, tuple(cp))
            return w if verify_witness(h, k, w) else None

        out = place(1, blocks, used, assign)
        if out is not None:
            return out
    return None


def are_equivalent(h: ButsonMatrix, k: ButsonMatrix) -> EquivalenceWitness | None:
    """A verified witness if h ~ k, else None.

    Invariants filter first (Haagerup set always, fingerprint for n >= 4);
    the exhaustive backtracking then decides the remaining cases.
    """
    if (h.q, h.n) != (k.q, k.n):
        raise ValueError(
            f"matrices are not comparable: BH({h.q},{h.n}) vs BH({k.q},{k.n})"
        )
    if haagerup(h) != haagerup(k):
        return None
    if h.n >= 4 and fingerprint(h) != fingerprint(k):
        return None
    return _witness_search(h, k)


def transpose_class(h: ButsonMatrix) -> str:
    """'self' when h ~ h^T, else 'paired'."""
    if are_equivalent(h, h.transpose()) is not None:
        return SELF_TRANSPOSE_EQUIVALENT
    return TRANSPOSE_PAIRED
