"""Affine parametric families of complex Hadamard matrices.

A family stores, per entry, a constant phase exponent plus an integer
exponent vector over its parameters (negative exponents are conjugates),
i.e. entry = i^s * a^i1 * b^i2 * ...  Orthogonality of such a family is a
property of the exponent algebra alone: in every row-pair inner product the
terms sharing a parameter monomial must cancel as Gaussian integers, which
``check_symbolic_orthogonality`` verifies identically, independent of any
parameter values.

The five built-in families of order 4, 6 and 8 ship as .fam data files and
are validated on load.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import product

from . import canon
from .gaussian import GaussianInt, PhaseExponent
from .matrix import ButsonMatrix

Entry = tuple[int, tuple[int, ...]]  # (constant phase exponent, exponent per parameter)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    n: int
    q: int
    params: tuple[str, ...]
    entries: tuple[tuple[Entry, ...], ...]


@dataclass(frozen=True)
class ScanHit:
    class_id: int
    params: tuple[int, ...]
    via_transpose: bool


@dataclass(frozen=True)
class ScanReport:
    family_name: str
    tuples_scanned: int
    hadamard_tuples: int
    classes_hit: tuple[ScanHit, ...]
    includes_transpose: bool

    def class_ids(self) -> set[int]:
        return {hit.class_id for hit in self.classes_hit}


def eval_exponents(spec: FamilySpec, values: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Exponent grid at parameter phases i^values (values are exponents mod q)."""
    if len(values) != len(spec.params):
        raise ValueError(f"{spec.name} takes {len(spec.params)} parameters, got {len(values)}")
    q = spec.q
    return tuple(
        tuple((s + sum(e * v for e, v in zip(exps, values))) % q for s, exps in row)
        for row in spec.entries
    )


def eval_family(spec: FamilySpec, values) -> ButsonMatrix:
    """Evaluate at a root-of-unity tuple; the result must be Hadamard.

    Values may be plain exponents or PhaseExponents of modulus q.  A
    non-Hadamard evaluation of a checked family cannot happen, so failure
    here signals a corrupted family definition.
    """
    ints = tuple(v.k if isinstance(v, PhaseExponent) else int(v) for v in values)
    return ButsonMatrix.from_exponents(spec.q, spec.n, eval_exponents(spec, ints))


def check_symbolic_orthogonality(spec: FamilySpec) -> None:
    """Verify that every row-pair inner product cancels identically.

    Groups each product row_u[k] * conj(row_v[k]) by its parameter monomial;
    distinct monomials are linearly independent over the unimodular torus, so
    each group's constant-phase sum must vanish exactly in Z[i].
    """
    q = spec.q
    step = 4 // q
    units = [GaussianInt(1, 0), GaussianInt(0, 1), GaussianInt(-1, 0), GaussianInt(0, -1)]
    for u in range(spec.n):
        for v in range(spec.n):
            if u == v:
                continue
            groups: dict[tuple[int, ...], GaussianInt] = {}
            for (su, eu), (sv, ev) in zip(spec.entries[u], spec.entries[v]):
                mono = tuple(a - b for a, b in zip(eu, ev))
                unit = units[((su - sv) % q) * step]
                groups[mono] = groups.get(mono, GaussianInt(0, 0)) + unit
            for mono, total in groups.items():
                if not total.is_zero():
                    raise ValueError(
                        f"{spec.name}: rows {u + 1},{v + 1} do not cancel on monomial {mono}"
                    )


def all_tuples(spec: FamilySpec):
    return product(range(spec.q), repeat=len(spec.params))


def scan_family(spec: FamilySpec, catalog, with_transpose: bool = False) -> ScanReport:
    """Evaluate every root-of-unity tuple and map the results to catalog classes.

    ``catalog`` is any object with ``q``, ``n`` and ``records`` (each record
    carrying ``id`` and a canonical ``representative``), or a plain record
    list.  Each class keeps the first (lexicographically least) hitting
    tuple, direct hits preferred over transposed ones.
    """
    records = getattr(catalog, "records", catalog)
    cat_n = getattr(catalog, "n", records[0].representative.n if records else spec.n)
    if cat_n != spec.n:
        raise ValueError(f"catalog is for order {cat_n}, family {spec.name} has order {spec.n}")
    key_to_id = {rec.representative.exponents: rec.id for rec in records}
    hits: dict[int, ScanHit] = {}
    hadamard = 0
    count = 0
    for values in all_tuples(spec):
        count += 1
        grid = eval_exponents(spec, values)
        hadamard += 1  # affine families are Hadamard at every tuple (checked symbolically)
        sides = [(grid, False)]
        if with_transpose:
            sides.append((tuple(zip(*grid)), True))
        for g, via_t in sides:
            key = canon.canonical_key(g, spec.q)
            cid = key_to_id.get(key)
            if cid is None:
                raise LookupError(
                    f"{spec.name}{values} maps outside the catalog; the catalog is incomplete"
                )
            prev = hits.get(cid)
            if prev is None or (prev.via_transpose, prev.params) > (via_t, values):
                hits[cid] = ScanHit(cid, values, via_t)
    ordered = tuple(sorted(hits.values(), key=lambda h: h.class_id))
    return ScanReport(spec.name, count, hadamard, ordered, with_transpose)


def coverage_union(reports) -> set[int]:
    """Union of the class ids hit by several scan reports."""
    out: set[int] = set()
    for rep in reports:
        out |= rep.class_ids()
    return out


def self_cognate_check(spec: FamilySpec) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Tuples t, t' with eval(t)^T equal to eval(t') entrywise.

    A family closed under transposition reports one partner per tuple.
    """
    by_grid = {eval_exponents(spec, values): values for values in all_tuples(spec)}
    pairs = []
    for values in all_tuples(spec):
        transposed = tuple(zip(*eval_exponents(spec, values)))
        partner = by_grid.get(transposed)
        if partner is not None:
            pairs.append((values, partner))
    return pairs


# ---------------------------------------------------------------------------
# .fam file format


def format_fam(spec: FamilySpec) -> str:
    lines = [f"{spec.name} {spec.n} {spec.q} params={','.join(spec.params)}"]
    for row in spec.entries:
        cells = []
        for s, exps in row:
            cell = f"p^{s}"
            for name, e in zip(spec.params, exps):
                if e:
                    cell += f"*{name}^{e}"
            cells.append(cell)
        lines.append(", ".join(cells))
    return "\n".join(lines) + "\n"


def parse_fam(text: str) -> FamilySpec:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    head = lines[0].split()
    if len(head) != 4 or not head[3].startswith("params="):
        raise ValueError("malformed family header")
    name, n, q = head[0], int(head[1]), int(head[2])
    params = tuple(p for p in head[3][len("params=") :].split(",") if p)
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} entry rows, found {len(lines) - 1}")
    entries = []
    for ln in lines[1:]:
        row = []
        cells = [c.strip() for c in ln.split(",")]
        if len(cells) != n:
            raise ValueError(f"expected {n} entries per row, found {len(cells)}")
        for cell in cells:
            factors = [f.strip() for f in cell.split("*")]
            if not factors[0].startswith("p^"):
                raise ValueError(f"entry must start with a constant phase: {cell!r}")
            s = int(factors[0][2:]) % q
            exps = [0] * len(params)
            for factor in factors[1:]:
                base, _, power = factor.partition("^")
                if base not in params:
                    raise ValueError(f"unknown parameter {base!r} in {cell!r}")
                exps[params.index(base)] += int(power) if power else 1
            row.append((s, tuple(exps)))
        entries.append(tuple(row))
    spec = FamilySpec(name, n, q, params, tuple(entries))
    check_symbolic_orthogonality(spec)
    return spec


_BUILTIN_FILES = {
    "H4": "h4.fam",
    "D6": "d6.fam",
    "F8_5": "f8_5.fam",
    "S8_4": "s8_4.fam",
    "D8B_5": "d8b_5.fam",
}

_cache: dict[str, FamilySpec] = {}


def builtin_family(name: str) -> FamilySpec:
    """One of the bundled families: H4, D6, F8_5, S8_4, D8B_5."""
    if name not in _BUILTIN_FILES:
        raise KeyError(f"no built-in family {name!r}; choose from {sorted(_BUILTIN_FILES)}")
    if name not in _cache:
        text = resources.files("butson.data").joinpath(_BUILTIN_FILES[name]).read_text("utf-8")
        _cache[name] = parse_fam(text)
    return _cache[name]


def builtin_families() -> dict[str, FamilySpec]:
    return {name: builtin_family(name) for name in _BUILTIN_FILES}


def families_for_order(n: int) -> list[FamilySpec]:
    return [spec for spec in builtin_families().values() if spec.n == n]
