"""Exact arithmetic over Z[i] and the roots of unity of order 1, 2 and 4.

Everything in this module is immutable and computed with Python integers,
so there is no rounding and no overflow anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

SUPPORTED_ORDERS = (1, 2, 4)


class UnsupportedOrderError(ValueError):
    """Raised for root-of-unity orders outside {1, 2, 4}."""


@dataclass(frozen=True)
class GaussianInt:
    """A Gaussian integer re + im*i."""

    re: int
    im: int

    def __add__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> GaussianInt:
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conjugate(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        """The field norm re**2 + im**2 (a nonnegative rational integer)."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __str__(self) -> str:
        return f"{self.re}{self.im:+d}i"


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)

# The four units of Z[i], indexed by quarter turns.
UNITS = (ONE, I, GaussianInt(-1, 0), GaussianInt(0, -1))


@dataclass(frozen=True)
class PhaseExponent:
    """The root of unity exp(2*pi*i*k/q), stored as the reduced exponent k mod q."""

    k: int
    q: int

    def __post_init__(self) -> None:
        if self.q not in SUPPORTED_ORDERS:
            raise UnsupportedOrderError(f"root order {self.q} not in {SUPPORTED_ORDERS}")
        object.__setattr__(self, "k", self.k % self.q)

    def __add__(self, other: PhaseExponent) -> PhaseExponent:
        if self.q != other.q:
            raise ValueError(f"mixed root orders {self.q} and {other.q}")
        return PhaseExponent(self.k + other.k, self.q)

    def __sub__(self, other: PhaseExponent) -> PhaseExponent:
        return self + (-other)

    def __neg__(self) -> PhaseExponent:
        return PhaseExponent(-self.k, self.q)

    def __str__(self) -> str:
        return f"i^{self.k * (4 // self.q)}" if self.q > 1 else "1"


def phase_to_gaussian(p: PhaseExponent) -> GaussianInt:
    """The exact value of a phase exponent as a unit of Z[i]."""
    return UNITS[p.k * (4 // p.q)]


def canonical_associate(z: GaussianInt) -> GaussianInt:
    """The unique unit multiple of z with re > 0 and im >= 0 (0 stays 0).

    Picking one element per unit orbit makes gcds and Smith diagonals
    comparable as plain values.
    """
    if z.is_zero():
        return ZERO
    for u in UNITS:
        w = z * u
        if w.re > 0 and w.im >= 0:
            return w
    raise AssertionError("unit orbit has no canonical member")  # unreachable


def _nearest_div(a: int, b: int) -> int:
    """Round a/b to a nearest integer (b > 0); ties resolved upward."""
    return (2 * a + b) // (2 * b)


def gaussian_divmod(a: GaussianInt, b: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Norm-Euclidean division: a = q*b + r with norm(r) <= norm(b)/2."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero in Z[i]")
    n = b.norm()
    t = a * b.conjugate()
    q = GaussianInt(_nearest_div(t.re, n), _nearest_div(t.im, n))
    return q, a - b * q

def gaussian_gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    """A greatest common divisor of a and b, as the canonical associate."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero():
        _, r = gaussian_divmod(a, b)
        a, b = b, r
    return canonical_associate(a)


def _exact_div(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    """a / b when b exactly divides a (internal; used by fraction-free elimination)."""
    n = b.norm()
    t = a * b.conjugate()
    q, r_re = divmod(t.re, n)
    p, r_im = divmod(t.im, n)
    if r_re or r_im:
        raise ArithmeticError(f"{a} is not divisible by {b}")
    return GaussianInt(q, p)


def det_exact(m: list[list[GaussianInt]]) -> GaussianInt:
    """Exact determinant of a square Gaussian-integer matrix.

    Fraction-free (Bareiss) elimination: every intermediate value is a minor
    of the input, so divisions are exact and the result is bit-exact.
    """
    d = len(m)
    if d == 0 or any(len(row) != d for row in m):
        raise ValueError("matrix must be square and nonempty")
    a = [list(row) for row in m]
    sign = 1
    prev = ONE
    for k in range(d - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, d):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = a[k][k]
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                a[i][j] = _exact_div(a[i][j] * pivot - a[i][k] * a[k][j], prev)
        prev = pivot
    out = a[d - 1][d - 1]
    return -out if sign < 0 else out
