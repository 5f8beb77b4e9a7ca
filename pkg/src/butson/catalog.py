"""Catalog persistence, reporting and identification.

The catalog JSON holds only integers: exponent grids, exponent lists,
squared minor moduli with multiplicities, and Gaussian integers as [re, im]
pairs.  Loading revalidates every representative (Hadamard property and
canonicality), so a tampered file cannot round-trip silently.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

from . import __version__, canon
from .enumeration import ClassRecord, FamilyTag
from .equivalence import canonical_form
from .gaussian import GaussianInt
from .matrix import ButsonMatrix, EquivalenceWitness


class CatalogError(ValueError):
    """Malformed or corrupted catalog file."""


class NotInCatalogError(LookupError):
    """A valid matrix whose class is missing from the catalog.

    Against a complete catalog this means the input is not what it claims
    to be; against a freshly enumerated one it would signal an enumeration
    gap, which is release-blocking at n <= 8.
    """


@dataclass(frozen=True)
class Catalog:
    q: int
    n: int
    records: tuple[ClassRecord, ...]
    tool_version: str = __version__
    generation_mode: str = "pruned"

    def record(self, class_id: int) -> ClassRecord:
        return self.records[class_id - 1]


def make_catalog(q, n, records, mode="pruned") -> Catalog:
    return Catalog(q, n, tuple(records), __version__, mode)


def _record_to_json(rec: ClassRecord) -> dict:
    return {
        "id": rec.id,
        "grid": [list(row) for row in rec.representative.exponents],
        "haagerup": list(rec.haagerup),
        "fingerprint": [[d, [list(pair) for pair in pairs]] for d, pairs in rec.fingerprint],
        "snf": [[z.re, z.im] for z in rec.snf],
        "transpose": {"class": rec.transpose_class, "partnerId": rec.transpose_partner_id},
        "familyTags": [{"family": t.family, "params": list(t.params)} for t in rec.family_tags],
    }


def save_catalog(cat: Catalog, path) -> None:
    doc = {
        "q": cat.q,
        "n": cat.n,
        "toolVersion": cat.tool_version,
        "generationMode": cat.generation_mode,
        "records": [_record_to_json(rec) for rec in cat.records],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_catalog(path) -> Catalog:
    """Load and revalidate; raises CatalogError naming the offending record."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"not valid JSON: {exc}") from None
    try:
        q, n = int(doc["q"]), int(doc["n"])
        version = doc["toolVersion"]
        mode = doc["generationMode"]
        raw_records = doc["records"]
    except (KeyError, TypeError) as exc:
        raise CatalogError(f"missing catalog field: {exc}") from None
    if version != __version__:
        warnings.warn(
            f"catalog written by version {version}, reading with {__version__}",
            stacklevel=2,
        )
    records = []
    for raw in raw_records:
        rid = raw["id"]
        try:
            rep = ButsonMatrix.from_exponents(q, n, raw["grid"])
        except ValueError as exc:
            raise CatalogError(f"record {rid}: invalid representative: {exc}") from None
        if canon.canonical_key(rep.exponents, q) != rep.exponents:
            raise CatalogError(f"record {rid}: representative is not in canonical form")
        records.append(
            ClassRecord(
                id=rid,
                representative=rep,
                haagerup=tuple(raw["haagerup"]),
                fingerprint=tuple(
                    (d, tuple((v, m) for v, m in pairs)) for d, pairs in raw["fingerprint"]
                ),
                snf=tuple(GaussianInt(re, im) for re, im in raw["snf"]),
                transpose_class=raw["transpose"]["class"],
                transpose_partner_id=raw["transpose"]["partnerId"],
                family_tags=tuple(
                    FamilyTag(t["family"], tuple(t["params"])) for t in raw["familyTags"]
                ),
            )
        )
    ids = [rec.id for rec in records]
    if ids != list(range(1, len(records) + 1)):
        raise CatalogError("record ids are not consecutive ranks")
    keys = [rec.representative.exponents for rec in records]
    if keys != sorted(keys):
        raise CatalogError("records are not sorted by canonical key")
    return Catalog(q, n, tuple(records), version, mode)


def _plural(count: int, word: str) -> str:
    return f"{count} {word}" + ("" if count == 1 else "s")


def _modulus_label(norm_sq: int) -> str:
    root = math.isqrt(norm_sq)
    return str(root) if root * root == norm_sq else f"√{norm_sq}"


def fingerprint_summary(rec: ClassRecord) -> str:
    """Distinct minor moduli per degree, e.g. 'd2:0,2 d3:0,4 d4:0,8,16'."""
    parts = []
    for d, pairs in rec.fingerprint:
        parts.append(f"d{d}:" + ",".join(_modulus_label(v) for v, _ in pairs))
    return " ".join(parts)


def _snf_label(rec: ClassRecord) -> str:
    out = []
    for z in rec.snf:
        out.append(str(z.re) if z.im == 0 else f"{z.re}+{z.im}i")
    return "(" + ", ".join(out) + ")"


def _tags_label(rec: ClassRecord) -> str:
    return " ".join(f"{t.family}({','.join(map(str, t.params))})" for t in rec.family_tags)


def report(cat: Catalog) -> str:
    """Human-readable class table plus summary counts; stable across runs."""
    header = ["id", "transpose", "haagerup", "snf", "fingerprint moduli", "families"]
    rows = [header]
    for rec in cat.records:
        tclass = (
            "self"
            if rec.transpose_class == "self"
            else f"paired<->{rec.transpose_partner_id}"
        )
        rows.append(
            [
                str(rec.id),
                tclass,
                "{" + ",".join(str(x) for x in rec.haagerup) + "}",
                _snf_label(rec),
                fingerprint_summary(rec),
                _tags_label(rec),
            ]
        )
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = [f"BH({cat.q},{cat.n}) classification ({cat.generation_mode} mode)"]
    lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    lines.append("-" * len(lines[-1]))
    for r in rows[1:]:
        lines.append("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
    total = len(cat.records)
    self_t = sum(1 for rec in cat.records if rec.transpose_class == "self")
    pairs = (total - self_t) // 2
    fps = len({rec.fingerprint for rec in cat.records})
    snfs = len({rec.snf for rec in cat.records})
    lines.append(
        f"{total} {'class' if total == 1 else 'classes'}; "
        f"{self_t} self-transpose; "
        f"{_plural(pairs, 'transpose pair')}; "
        f"{_plural(fps, 'fingerprint')}; "
        f"{_plural(snfs, 'SNF')}"
    )
    return "\n".join(lines) + "\n"


def identify(h: ButsonMatrix, cat: Catalog) -> tuple[int, EquivalenceWitness]:
    """Class id of h plus a witness from the stored representative to h."""
    if (h.q, h.n) != (cat.q, cat.n):
        raise ValueError(
            f"matrix is BH({h.q},{h.n}) but the catalog holds BH({cat.q},{cat.n})"
        )
    form = canonical_form(h)
    for rec in cat.records:
        if rec.representative.exponents == form.matrix.exponents:
            # rec.representative == canonical form of h; invert the witness
            witness = form.witness.inverse()
            if rec.representative.apply_witness(witness).exponents != h.exponents:
                raise AssertionError("witness inversion failed")
            return rec.id, witness
    raise NotInCatalogError(
        f"BH({h.q},{h.n}) matrix not found in catalog of {len(cat.records)} classes"
    )
