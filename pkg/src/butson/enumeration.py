"""Exhaustive generation and classification of BH(q,n) matrices, n <= 8.

The search space is the orthogonality graph over all dephased candidate
rows (leading exponent 0, orthogonal to the all-ones row); a matrix is a
clique of n-1 rows, taken in increasing lexicographic order.  Isomorph
rejection is canonical augmentation: a partial matrix is extended only if
it is the canonical representative of its own orbit, which guarantees every
equivalence class surfaces exactly once.  A safe mode keeps only the cheap
level-2 restriction and relies on full deduplication by canonical form; the
two modes must produce identical catalogs.
"""

from __future__ import annotations

import multiprocessing
import sys
from dataclasses import dataclass, replace
from itertools import product
from typing import Callable, Iterator

import numpy as np

from . import canon
from .equivalence import are_equivalent
from .families import families_for_order
from .gaussian import GaussianInt
from .invariants import Fingerprint, fingerprint, haagerup, smith_normal_form
from .matrix import ButsonMatrix

SELF_TRANSPOSE_EQUIVALENT = "self"
TRANSPOSE_PAIRED = "paired"


@dataclass(frozen=True)
class FamilyTag:
    family: str
    params: tuple[int, ...]


@dataclass(frozen=True)
class ClassRecord:
    """One equivalence class: canonical representative plus its invariants."""

    id: int
    representative: ButsonMatrix
    haagerup: tuple[int, ...]
    fingerprint: Fingerprint
    snf: tuple[GaussianInt, ...]
    transpose_class: str
    transpose_partner_id: int | None
    family_tags: tuple[FamilyTag, ...]


def _check_supported(q: int, n: int) -> None:
    if q not in (1, 2, 4):
        raise ValueError(f"unsupported root order q={q}")
    if n == 1:
        return
    if q == 1 or n < 1 or n > 8 or n % 2:
        raise ValueError(f"unsupported order n={n} for q={q} (need n = 1 or even n <= 8)")


_UNIT_RE = {0: 1, 1: 0, 2: -1, 3: 0}
_UNIT_IM = {0: 0, 1: 1, 2: 0, 3: -1}


def candidate_rows(q: int, n: int) -> list[tuple[int, ...]]:
    """All dephased rows orthogonal to the all-ones row, in lexicographic order."""
    step = 4 // q
    rows = []
    for tail in product(range(q), repeat=n - 1):
        re = 1 + sum(_UNIT_RE[t * step] for t in tail)
        im = sum(_UNIT_IM[t * step] for t in tail)
        if re == 0 and im == 0:
            rows.append((0,) + tail)
    return rows


_tables_cache: dict[tuple[int, int], tuple[list[tuple[int, ...]], list[int], list[int]]] = {}


def _search_tables(q: int, n: int):
    """Candidate rows, orthogonality bitmasks, and higher-index masks."""
    key = (q, n)
    if key in _tables_cache:
        return _tables_cache[key]
    rows = candidate_rows(q, n)
    m = len(rows)
    step = 4 // q
    r = np.array(rows, dtype=np.int16)
    diff = (r[:, None, :] - r[None, :, :]) % q
    re_lut = np.array([_UNIT_RE[v * step] for v in range(q)], dtype=np.int16)
    im_lut = np.array([_UNIT_IM[v * step] for v in range(q)], dtype=np.int16)
    orth = (re_lut[diff].sum(axis=2) == 0) & (im_lut[diff].sum(axis=2) == 0)
    adj = [int.from_bytes(np.packbits(orth[i], bitorder="little").tobytes(), "little") for i in range(m)]
    above = [((1 << m) - 1) ^ ((1 << (i + 1)) - 1) for i in range(m)]
    _tables_cache[key] = (rows, adj, above)
    return _tables_cache[key]


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _canonical_start_rows(q: int, n: int) -> list[int]:
    rows, _, _ = _search_tables(q, n)
    return [i for i, r in enumerate(rows) if canon.is_partial_canonical([r], q, n)]


def _expand(q, n, rows, adj, chosen_rows, allowed, prune) -> Iterator[tuple]:
    """Depth-first clique extension; ``prune`` applies full canonicity checks."""
    depth = len(chosen_rows)
    if depth == n - 1:
        yield tuple(chosen_rows)
        return
    for i in _iter_bits(allowed):
        new_rows = chosen_rows + [rows[i]]
        if prune and not canon.is_partial_canonical(new_rows, q, n):
            continue
        yield from _expand(q, n, rows, adj, new_rows, allowed & adj[i], prune)


def _subtree_classified(args) -> dict:
    """Worker: expand one level-2 subtree and deduplicate it locally."""
    q, n, start, prune = args
    rows, adj, above = _search_tables(q, n)
    keys = set()
    count = 0
    for leaf in _expand(q, n, rows, adj, [rows[start]], adj[start] & above[start], prune):
        keys.add(canon.canonical_key(((0,) * n,) + leaf, q))
        count += 1
    return {"start": start, "keys": keys, "count": count}


def generate_dephased(q: int, n: int, mode: str = "pruned") -> Iterator[ButsonMatrix]:
    """Stream dephased BH(q,n) matrices covering every equivalence class.

    mode="pruned": canonical augmentation at every level; the stream is one
    matrix per class (the canonical representative).
    mode="safe": only the level-2 restriction; classes appear many times and
    the caller deduplicates.
    """
    if mode not in ("pruned", "safe"):
        raise ValueError(f"unknown mode {mode!r}")
    _check_supported(q, n)
    if n == 1:
        yield ButsonMatrix.from_exponents(q, 1, [[0]])
        return
    rows, adj, above = _search_tables(q, n)
    prune = mode == "pruned"
    for start in _canonical_start_rows(q, n):
        for leaf in _expand(q, n, rows, adj, [rows[start]], adj[start] & above[start], prune):
            yield ButsonMatrix._from_trusted(q, n, ((0,) * n,) + leaf)


def classify(
    q: int,
    n: int,
    mode: str = "pruned",
    jobs: int = 1,
    progress: Callable[[str], None] | None = None,
) -> list[ClassRecord]:
    """The complete catalog of BH(q,n) equivalence classes.

    Generates, deduplicates by canonical form, sorts by canonical key, and
    attaches invariants, transpose pairing and family tags.
    """
    _check_supported(q, n)
    say = progress or (lambda msg: None)
    keys: set[tuple] = set()
    if n == 1:
        keys.add(((0,),))
    elif jobs > 1:
        starts = _canonical_start_rows(q, n)
        with multiprocessing.Pool(jobs) as pool:
            for result in pool.imap_unordered(
                _subtree_classified, [(q, n, s, mode == "pruned") for s in starts]
            ):
                keys.update(result["keys"])
                say(f"subtree {result['start']}: {len(keys)} classes so far")
    else:
        count = 0
        for h in generate_dephased(q, n, mode):
            keys.add(canon.canonical_key(h.exponents, q))
            count += 1
            if count % 5000 == 0:
                say(f"{count} matrices generated, {len(keys)} classes so far")
        say(f"{count} dephased matrices generated, {len(keys)} classes")
    ordered = sorted(keys)
    id_by_key = {key: i + 1 for i, key in enumerate(ordered)}
    reps = [ButsonMatrix.from_exponents(q, n, key) for key in ordered]

    records = []
    for i, rep in enumerate(reps):
        partner = id_by_key[canon.canonical_key(rep.transpose().exponents, q)]
        records.append(
            ClassRecord(
                id=i + 1,
                representative=rep,
                haagerup=haagerup(rep),
                fingerprint=fingerprint(rep) if n >= 4 else (),
                snf=smith_normal_form(rep),
                transpose_class=(
                    SELF_TRANSPOSE_EQUIVALENT if partner == i + 1 else TRANSPOSE_PAIRED
                ),
                transpose_partner_id=None if partner == i + 1 else partner,
                family_tags=(),
            )
        )
    say("attaching family tags")
    return _attach_family_tags(q, n, records)


def _attach_family_tags(q: int, n: int, records: list[ClassRecord]) -> list[ClassRecord]:
    """Tag each class with the least parameter tuple reaching it, per family.

    Transposed-family tags (suffix ^T) are added only for classes no direct
    evaluation reaches.
    """
    if q != 4:
        return records
    from .families import eval_exponents

    id_by_key = {rec.representative.exponents: rec.id for rec in records}
    tags: dict[int, list[FamilyTag]] = {rec.id: [] for rec in records}
    for spec in families_for_order(n):
        direct: dict[int, tuple[int, ...]] = {}
        via_t: dict[int, tuple[int, ...]] = {}
        for values in product(range(4), repeat=len(spec.params)):
            grid = eval_exponents(spec, values)
            cid = id_by_key[canon.canonical_key(grid, 4)]
            if cid not in direct:
                direct[cid] = values
            tid = id_by_key[canon.canonical_key(tuple(zip(*grid)), 4)]
            if tid not in via_t:
                via_t[tid] = values
        for cid, values in direct.items():
            tags[cid].append(FamilyTag(spec.name, values))
        for cid, values in via_t.items():
            if cid not in direct:
                tags[cid].append(FamilyTag(spec.name + "^T", values))
    return [replace(rec, family_tags=tuple(tags[rec.id])) for rec in records]


def brute_force_classify(q: int, n: int) -> list[ClassRecord]:
    """Oracle classification for n <= 4: scan all q^((n-1)^2) dephased grids.

    Every interior grid is visited and filtered by the Hadamard condition;
    survivors are partitioned by pairwise ``are_equivalent``.  Nothing here
    depends on the canonical-form machinery, so the result independently
    validates ``classify``.  Identification fields are filled; family tags
    are left empty.
    """
    _check_supported(q, n)
    if n > 4:
        raise ValueError("brute force oracle is limited to n <= 4")
    reps: list[ButsonMatrix] = []
    if n == 1:
        reps.append(ButsonMatrix.from_exponents(q, 1, [[0]]))
    else:
        tails = list(product(range(q), repeat=n - 1))
        step = 4 // q

        def orth(u: tuple[int, ...], v: tuple[int, ...]) -> bool:
            re = im = 0
            for a, b in zip(u, v):
                t = ((a - b) % q) * step
                re += _UNIT_RE[t]
                im += _UNIT_IM[t]
            return re == 0 and im == 0

        ones = (0,) * n
        for combo in product(tails, repeat=n - 1):
            rows = [ones] + [(0,) + t for t in combo]
            if all(orth(rows[i], rows[j]) for i in range(n) for j in range(i + 1, n)):
                h = ButsonMatrix._from_trusted(q, n, tuple(rows))
                if all(are_equivalent(h, r) is None for r in reps):
                    reps.append(h)

    records = []
    for i, rep in enumerate(reps):
        partner = None
        for j, other in enumerate(reps):
            if are_equivalent(rep.transpose(), other) is not None:
                partner = j + 1
                break
        records.append(
            ClassRecord(
                id=i + 1,
                representative=rep,
                haagerup=haagerup(rep),
                fingerprint=fingerprint(rep) if n >= 4 else (),
                snf=smith_normal_form(rep),
                transpose_class=(
                    SELF_TRANSPOSE_EQUIVALENT if partner == i + 1 else TRANSPOSE_PAIRED
                ),
                transpose_partner_id=None if partner == i + 1 else partner,
                family_tags=(),
            )
        )
    return records


def print_progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)
