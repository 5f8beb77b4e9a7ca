"""Exact classification of Butson-type complex Hadamard matrices BH(q,n).

Supported scope: root orders q in {1, 2, 4} and matrix orders n <= 8.  All
arithmetic is exact over the Gaussian integers; nothing in the library (or
in its persisted files) is a float.
"""

__version__ = "0.1.0"

from .gaussian import (
    GaussianInt,
    PhaseExponent,
    UnsupportedOrderError,
    canonical_associate,
    det_exact,
    gaussian_gcd,
    phase_to_gaussian,
)
from .matrix import (
    ButsonMatrix,
    EquivalenceWitness,
    NotHadamardError,
    format_bhm,
    parse_bhm,
    read_bhm,
    recognize_butson_order,
    write_bhm,
)
from .invariants import OrderTooSmallError, fingerprint, haagerup, smith_normal_form
from .equivalence import (
    SELF_TRANSPOSE_EQUIVALENT,
    TRANSPOSE_PAIRED,
    CanonicalForm,
    are_equivalent,
    canonical_form,
    canonical_key,
    transpose_class,
    verify_witness,
)
from .enumeration import (
    ClassRecord,
    FamilyTag,
    brute_force_classify,
    candidate_rows,
    classify,
    generate_dephased,
)
from .families import (
    FamilySpec,
    ScanHit,
    ScanReport,
    builtin_families,
    builtin_family,
    check_symbolic_orthogonality,
    coverage_union,
    eval_family,
    parse_fam,
    format_fam,
    scan_family,
    self_cognate_check,
)
from .catalog import (
    Catalog,
    CatalogError,
    NotInCatalogError,
    identify,
    load_catalog,
    make_catalog,
    report,
    save_catalog,
)

__all__ = [
    "GaussianInt",
    "PhaseExponent",
    "UnsupportedOrderError",
    "canonical_associate",
    "det_exact",
    "gaussian_gcd",
    "phase_to_gaussian",
    "ButsonMatrix",
    "EquivalenceWitness",
    "NotHadamardError",
    "format_bhm",
    "parse_bhm",
    "read_bhm",
    "recognize_butson_order",
    "write_bhm",
    "OrderTooSmallError",
    "fingerprint",
    "haagerup",
    "smith_normal_form",
    "SELF_TRANSPOSE_EQUIVALENT",
    "TRANSPOSE_PAIRED",
    "CanonicalForm",
    "are_equivalent",
    "canonical_form",
    "canonical_key",
    "transpose_class",
    "verify_witness",
    "ClassRecord",
    "FamilyTag",
    "brute_force_classify",
    "candidate_rows",
    "classify",
    "generate_dephased",
    "FamilySpec",
    "ScanHit",
    "ScanReport",
    "builtin_families",
    "builtin_family",
    "check_symbolic_orthogonality",
    "coverage_union",
    "eval_family",
    "parse_fam",
    "format_fam",
    "scan_family",
    "self_cognate_check",
    "Catalog",
    "CatalogError",
    "NotInCatalogError",
    "identify",
    "load_catalog",
    "make_catalog",
    "report",
    "save_catalog",
]
