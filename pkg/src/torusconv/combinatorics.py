"""Exact combinatorics: Stirling numbers, Bernoulli data, graded rational coefficients.

All quantities here are exact (Python ints / fractions).  Floating point enters
only when a caller realizes a :class:`GradedRational` numerically, substituting
the constant -2*pi*i for the grading symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .torus import DELTA_Z


# ---------------------------------------------------------------------------
# Stirling numbers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _stirling_first_row(n: int) -> tuple[int, ...]:
    # row[k-1] = s(n, k); recurrence s(n+1, k) = s(n, k-1) - n*s(n, k)
    if n == 1:
        return (1,)
    prev = _stirling_first_row(n - 1)
    row = [0] * n
    for k in range(1, n + 1):
        above = prev[k - 2] if 2 <= k <= n else 0
        right = prev[k - 1] if k <= n - 1 else 0
        row[k - 1] = above - (n - 1) * right
    return tuple(row)


@lru_cache(maxsize=None)
def _stirling_second_row(n: int) -> tuple[int, ...]:
    # row[k-1] = S(n, k); recurrence S(n, k) = k*S(n-1, k) + S(n-1, k-1)
    if n == 1:
        return (1,)
    prev = _stirling_second_row(n - 1)
    row = [0] * n
    for k in range(1, n + 1):
        above = prev[k - 2] if 2 <= k <= n else 0
        right = prev[k - 1] if k <= n - 1 else 0
        row[k - 1] = k * right + above
    return tuple(row)


def _check_range(n: int, k: int) -> None:
    if n < 1 or not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n with n >= 1, got n={n}, k={k}")


def stirling_first(n: int, k: int) -> int:
    """Signed Stirling number s(n, k): (m-1)...(m-n+1) = sum_k s(n,k) m^(k-1)."""
    _check_range(n, k)
    return _stirling_first_row(n)[k - 1]


def stirling_second(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k)."""
    _check_range(n, k)
    return _stirling_second_row(n)[k - 1]


# ---------------------------------------------------------------------------
# Bernoulli numbers and the normalized Bernoulli-type polynomials
# ---------------------------------------------------------------------------

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli_number(n: int) -> Fraction:
    """B_n with B_0 = 1, B_1 = -1/2, and sum_{l<k} C(k,l) B_l = 0 for k >= 2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    while len(_BERNOULLI) <= n:
        k = len(_BERNOULLI) + 1  # solving the k-th relation for B_{k-1}
        acc = sum(comb(k, ell) * _BERNOULLI[ell] for ell in range(k - 1))
        _BERNOULLI.append(Fraction(-acc, k))
    return _BERNOULLI[n]


@lru_cache(maxsize=None)
def bernoulli_poly_paper(n: int) -> "RationalPolynomial":
    """Normalized Bernoulli-type polynomial with B_0(z) = 1, B_1(z) = z.

    For k >= 1 the next polynomial is
        B_{k+1}(z) = z^(k+1)/(k+1) - z^k/2 + sum_{m=2}^{k+1} C(k+1, m) B_m z^(k+1-m)
    (B_m the Bernoulli numbers), which forces the forward-difference identity
    B_{n+1}(z+1) - B_{n+1}(z) = z^n exactly.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return RationalPolynomial((Fraction(1),))
    if n == 1:
        return RationalPolynomial((Fraction(0), Fraction(1)))
    k = n - 1
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1, n)
    coeffs[k] += Fraction(-1, 2)
    for m in range(2, n + 1):
        coeffs[n - m] += comb(n, m) * bernoulli_number(m)
    return RationalPolynomial(tuple(coeffs))


# ---------------------------------------------------------------------------
# Exact coefficient containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedRational:
    """Exact rational multiplied by an integer power of the grading constant.

    The grading symbol realizes numerically to -2*pi*i; sums are only defined
    between equal powers (or with an exact zero).
    """

    coeff: Fraction
    dz_power: int

    def __post_init__(self) -> None:
        if self.dz_power < 0:
            raise ValueError("dz_power must be non-negative")
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    def __add__(self, other: "GradedRational") -> "GradedRational":
        if not isinstance(other, GradedRational):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.dz_power != other.dz_power:
            raise ValueError(
                f"cannot add grades {self.dz_power} and {other.dz_power} exactly"
            )
        return GradedRational(self.coeff + other.coeff, self.dz_power)

    def __neg__(self) -> "GradedRational":
        return GradedRational(-self.coeff, self.dz_power)

    def __sub__(self, other: "GradedRational") -> "GradedRational":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GradedRational):
            return GradedRational(self.coeff * other.coeff, self.dz_power + other.dz_power)
        if isinstance(other, (int, Fraction)):
            return GradedRational(self.coeff * other, self.dz_power)
        return NotImplemented

    __rmul__ = __mul__

    def numeric(self) -> complex:
        """Realize the grading: coeff * (-2*pi*i)**dz_power."""
        return float(self.coeff) * DELTA_Z ** self.dz_power

    def __str__(self) -> str:
        if self.dz_power == 0:
            return str(self.coeff)
        return f"{self.coeff}*dZ^{self.dz_power}"


GR_ZERO = GradedRational(Fraction(0), 0)
GR_ONE = GradedRational(Fraction(1), 0)


class RationalPolynomial:
    """Dense univariate polynomial with exact Fraction coefficients (index = degree)."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients) -> None:
        coeffs = [Fraction(c) for c in coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [Fraction(0)]
        self.coefficients = tuple(coeffs)

    # -- ring operations ----------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPolynomial) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return self.coefficients == (Fraction(0),)

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return RationalPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        )

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial([-c for c in self.coefficients])

    def __sub__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RationalPolynomial):
            out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
            for i, a in enumerate(self.coefficients):
                if a == 0:
                    continue
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
            return RationalPolynomial(out)
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial([c * other for c in self.coefficients])
        return NotImplemented

    __rmul__ = __mul__

    # -- calculus and substitution -------------------------------------------

    def derivative(self) -> "RationalPolynomial":
        if self.degree == 0:
            return RationalPolynomial((Fraction(0),))
        return RationalPolynomial(
            [i * c for i, c in enumerate(self.coefficients)][1:]
        )

    def evaluate(self, x):
        """Horner evaluation; x may be an int/Fraction (exact) or float/complex."""
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            acc = self.coefficients[-1]
            for c in reversed(self.coefficients[:-1]):
                acc = acc * x + c
            return acc
        acc = complex(self.coefficients[-1])
        for c in reversed(self.coefficients[:-1]):
            acc = acc * x + complex(c)
        return acc

    def compose_linear(self, a, b) -> "RationalPolynomial":
        """Return p(a + b*x) expanded exactly."""
        a, b = Fraction(a), Fraction(b)
        acc = RationalPolynomial((self.coefficients[-1],))
        lin = RationalPolynomial((a, b))
        for c in reversed(self.coefficients[:-1]):
            acc = acc * lin + RationalPolynomial((c,))
        return acc

    def deflate(self, root) -> "RationalPolynomial":
        """Divide by (x - root); raises if the remainder is nonzero."""
        root = Fraction(root)
        out = []
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * root + c
            out.append(acc)
        rem = out.pop()
        if rem != 0:
            raise ValueError(f"{root} is not an exact root (remainder {rem})")
        # out currently holds quotient coefficients from high to low, shifted by the
        # synthetic-division accumulation; rebuild in ascending order
        quotient = list(reversed(out))
        return RationalPolynomial(quotient)

    def __str__(self) -> str:
        terms = [f"{c}*x^{i}" for i, c in enumerate(self.coefficients) if c != 0]
        return " + ".join(terms) if terms else "0"
