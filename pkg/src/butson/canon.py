"""Canonical forms of exponent grids under monomial equivalence.

The equivalence group (row/column permutations combined with q-th-root phase
diagonals) acts on a grid; its canonical form is the lexicographically least
row-major exponent sequence in the orbit.  Because dephasing absorbs all
phase freedom, every orbit element is reached as

    dephase(sigma . H . tau)

for a row anchor a (the row sent to position 1), a column anchor c, and an
ordering of the remaining rows and columns.  The minimum always has its
first row and column zero and the remaining rows sorted, so the search runs
over anchors and column orderings only.

The same machinery answers two questions:

* ``canonical_key`` / ``canonical_transform``: the orbit minimum of a full
  grid (optionally with the achieving anchor/row/column arrangement);
* ``is_partial_canonical``: whether a partial object (an implicit zero row
  plus m-1 chosen rows, sorted) is the minimum of its own orbit — the
  acceptance test of canonical-augmentation search.

Packing: a row's entries (2 bits each, entries < 4) are packed into one
integer, so lexicographic row comparison is integer comparison.

Two prunes keep the branch-and-bound small:

* anchor signatures: the sorted multiset of fully-sorted packed rows is a
  pointwise (hence lexicographic) lower bound on anything an anchor can
  produce, so anchors whose signature exceeds the current best are skipped;
* automorphism skipping: every completed arrangement that reproduces the
  current best yields a symmetry of the input; anchors in the orbit of an
  already-processed anchor under the discovered group cannot do better and
  are skipped.  Each discovered symmetry is verified (it must shift the
  grid by pure row/column phases) before use.
"""

from __future__ import annotations

import numpy as np

Grid = tuple[tuple[int, ...], ...]

_SENTINEL = 1 << 62


class _Smaller(Exception):
    """Internal: a strictly smaller orbit element was found (check mode)."""


def pack_row(row) -> int:
    v = 0
    for x in row:
        v = (v << 2) | x
    return v


def _unpack(v: int, width: int) -> tuple[int, ...]:
    out = [0] * width
    for i in range(width - 1, -1, -1):
        out[i] = v & 3
        v >>= 2
    return tuple(out)


def _anchor_tables(E: np.ndarray, q: int):
    """All dephased variants plus per-anchor sorted-row signatures.

    T[a, c, j, k] = (E[j,k] - E[j,c] - E[a,k] + E[a,c]) mod q.
    sig[a, c] = the ascending multiset of packed fully-sorted rows j != a:
    each arrangement row is bounded below by its own sorted pack, so the
    sorted multiset bounds the whole arrangement pointwise, and therefore
    lexicographically.  sig[a, c][0] is attainable (sort that row first).
    """
    m, n = E.shape
    Ei = E.astype(np.int16)
    T = (
        Ei[None, None, :, :]
        - Ei.T[None, :, :, None]
        - Ei[:, None, None, :]
        + Ei[:, :, None, None]
    ) % q
    S = np.sort(T, axis=3)
    w = 1 << (2 * np.arange(n - 1, -1, -1, dtype=np.int64))
    P = S.astype(np.int64) @ w  # leading entry is always 0, so this matches
    idx = np.arange(m)  # the (n-1)-column packing used by the search
    P[idx, :, idx] = _SENTINEL
    sig = np.sort(P, axis=2)[:, :, : m - 1]
    return T, sig


def _candidate_pack(dr: list[int], blocks) -> int:
    v = 0
    for block in blocks:
        if len(block) == 1:
            v = (v << 2) | dr[block[0]]
        else:
            for x in sorted(dr[c] for c in block):
                v = (v << 2) | x
    return v


def _refine(blocks, dr: list[int]):
    out = []
    for block in blocks:
        if len(block) == 1:
            out.append(block)
            continue
        groups: dict[int, list[int]] = {}
        for c in block:
            groups.setdefault(dr[c], []).append(c)
        if len(groups) == 1:
            out.append(block)
        else:
            for val in sorted(groups):
                out.append(tuple(groups[val]))
    return out


class _Search:
    """One orbit minimization / canonicity check over all anchors."""

    def __init__(self, E: np.ndarray, q: int, check_packed=None):
        self.E = E.tolist()
        self.q = q
        self.m, self.n = E.shape
        self.checking = check_packed is not None
        self.best = list(check_packed) if self.checking else [_SENTINEL] * (self.m - 1)
        self.achieved = self.checking
        self.dirty = False
        T, sig = _anchor_tables(E, q)
        self.T = T
        sig_list = sig.tolist()
        self.order = sorted(
            (tuple(sig_list[a][c]), a, c) for a in range(self.m) for c in range(self.n)
        )
        self.generators: list[tuple[list[int], list[int]]] = []
        if self.checking:
            self.first_completion = (list(range(self.m)), list(range(self.n)))
        else:
            self.first_completion = None
        self.result_arrangement: tuple[list[int], list[int]] | None = None

    # -- automorphism bookkeeping ------------------------------------------

    def _arrangement(self, anchor, trail, final_blocks):
        rows = [anchor[0]] + trail
        cols = [anchor[1]]
        for block in final_blocks:
            cols.extend(block)
        return rows, cols

    def _is_phase_shift(self, phi: list[int], psi: list[int]) -> bool:
        """E[phi(i)][psi(k)] - E[i][k] must be a pure row+column phase field."""
        E, q = self.E, self.q
        d00 = E[phi[0]][psi[0]] - E[0][0]
        dcol = [E[phi[0]][psi[k]] - E[0][k] - d00 for k in range(self.n)]
        for i in range(self.m):
            Ei = E[i]
            Ep = E[phi[i]]
            base = Ep[psi[0]] - Ei[0]  # row phase + d00
            for k in range(self.n):
                if (Ep[psi[k]] - Ei[k] - base - dcol[k]) % q:
                    return False
        return True

    def _note_completion(self, rows: list[int], cols: list[int]) -> None:
        """A second arrangement reproducing the current best is a symmetry."""
        if self.first_completion is None:
            self.first_completion = (rows, cols)
            return
        o1, p1 = self.first_completion
        if o1 == rows and p1 == cols:
            return
        phi = [0] * self.m
        psi = [0] * self.n
        for i in range(self.m):
            phi[o1[i]] = rows[i]
        for k in range(self.n):
            psi[p1[k]] = cols[k]
        if self._is_phase_shift(phi, psi):
            self.generators.append((phi, psi))

    def _anchor_orbit(self, a: int, c: int) -> set[tuple[int, int]]:
        orbit = {(a, c)}
        frontier = [(a, c)]
        while frontier:
            x, y = frontier.pop()
            for phi, psi in self.generators:
                img = (phi[x], psi[y])
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        return orbit

    def _redundant_sibling(self, r: int, explored: list[int], anchor, trail) -> bool:
        """Is candidate row r the image of an explored sibling under a symmetry
        fixing the anchor and every row chosen so far?  Such subtrees repeat
        already-seen values verbatim."""
        if not explored or not self.generators:
            return False
        a, c = anchor
        gens = [
            phi
            for phi, psi in self.generators
            if phi[a] == a and psi[c] == c and all(phi[t] == t for t in trail)
        ]
        if not gens:
            return False
        orbit = {r}
        frontier = [r]
        while frontier:
            x = frontier.pop()
            for phi in gens:
                img = phi[x]
                if img in explored:
                    return True
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        return False

    # -- branch and bound ---------------------------------------------------

    def _descend(self, D, rows_left, blocks, pos, trail, anchor):
        best = self.best
        cands = sorted((_candidate_pack(D[r], blocks), r) for r in rows_left)
        explored: list[int] = []
        for v, r in cands:
            bv = best[pos]
            if v > bv:
                break
            if v < bv:
                if self.checking:
                    raise _Smaller
                best[pos] = v
                for t in range(pos + 1, len(best)):
                    best[t] = _SENTINEL
                self.dirty = True  # improvement pending its completion
                self.first_completion = None
            elif self._redundant_sibling(r, explored, anchor, trail):
                explored.append(r)
                continue
            nb = _refine(blocks, D[r])
            if pos + 1 == len(best):
                rows, cols = self._arrangement(anchor, trail + [r], nb)
                if self.dirty:
                    self.dirty = False
                    self.achieved = True
                    self.result_arrangement = (rows, cols)
                    self.first_completion = (rows, cols)
                else:
                    self._note_completion(rows, cols)
            else:
                self._descend(
                    D,
                    [x for x in rows_left if x != r],
                    nb,
                    pos + 1,
                    trail + [r],
                    anchor,
                )
            explored.append(r)

    def run(self):
        best = self.best
        processed: set[tuple[int, int]] = set()
        for sig, a, c in self.order:
            lsig = list(sig)
            if self.checking:
                if lsig > best:
                    break  # anchors sorted by signature; the rest are worse
                if lsig[0] < best[0]:
                    return False  # attainable first row below the object's own
            elif self.achieved and lsig >= best:
                if lsig > best:
                    break
                continue  # can only tie an already-achieved minimum
            if self._anchor_orbit(a, c) & processed:
                processed.add((a, c))
                continue
            processed.add((a, c))
            D = self.T[a, c].tolist()
            rows = [j for j in range(self.m) if j != a]
            blocks = [tuple(k for k in range(self.n) if k != c)]
            try:
                self._descend(D, rows, blocks, 0, [], (a, c))
            except _Smaller:
                return False
        if self.checking:
            return True
        return best, self.result_arrangement


def canonical_key(grid: Grid, q: int) -> Grid:
    """The canonical (orbit-least, dephased, row-sorted) exponent grid."""
    E = np.array(grid, dtype=np.int16)
    n = E.shape[0]
    if n == 1:
        return ((0,),)
    best, _ = _Search(E, q).run()
    zero = (0,) * n
    return (zero,) + tuple((0,) + _unpack(v, n - 1) for v in best)


def canonical_transform(grid: Grid, q: int):
    """Canonical grid plus the (row_order, col_order) arrangement reaching it.

    The canonical grid equals the dephasing of the input with rows taken in
    ``row_order`` and columns in ``col_order`` (anchors first in each).
    """
    E = np.array(grid, dtype=np.int16)
    n = E.shape[0]
    if n == 1:
        return ((0,),), ([0], [0])
    best, arrangement = _Search(E, q).run()
    zero = (0,) * n
    key = (zero,) + tuple((0,) + _unpack(v, n - 1) for v in best)
    return key, arrangement


def is_partial_canonical(rows: list[tuple[int, ...]], q: int, n: int) -> bool:
    """Canonicity of an implicit-zero-row object with the given sorted rows."""
    if not rows:
        return True
    E = np.zeros((len(rows) + 1, n), dtype=np.int16)
    for i, r in enumerate(rows):
        E[i + 1] = r
    packed = [pack_row(r[1:]) for r in rows]
    return _Search(E, q, check_packed=packed).run()
