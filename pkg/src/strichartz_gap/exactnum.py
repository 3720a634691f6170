"""Exact integers, rationals, dense rational polynomials and Gamma moments.

Rationals are :class:`fractions.Fraction`, which already keeps the reduced
canonical form after every operation.  Everything here is immutable.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence, Union

Rational = Fraction
RatMatrix = list  # list[list[Fraction]], square
Number = Union[int, Fraction]


@lru_cache(maxsize=None)
def factorial(k: int) -> int:
    if k < 0:
        raise ValueError(f"factorial of negative integer {k}")
    # iterative on purpose: the cache fills bottom-up without deep recursion
    result = 1
    for i in range(2, k + 1):
        result *= i
    return result


def central_binomial(p: int) -> int:
    if p < 0:
        raise ValueError(f"central_binomial needs p >= 0, got {p}")
    return comb(2 * p, p)


def render_rational(r: Number) -> str:
    """Render as ``"num/den"``; the sign lives on the numerator."""
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


class RatPoly:
    """Dense univariate polynomial with :class:`Fraction` coefficients.

    ``coeffs[k]`` is the coefficient of ``x**k``; trailing zeros are trimmed so
    the zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Number) -> "RatPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "RatPoly":
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RatPoly({self.render()!r})"

    def render(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = render_rational(c)
            if k == 0:
                terms.append(cs)
            elif k == 1:
                terms.append(f"{cs}*{var}")
            else:
                terms.append(f"{cs}*{var}^{k}")
        return " + ".join(terms)

    @staticmethod
    def _coerce(other) -> "RatPoly":
        if isinstance(other, RatPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RatPoly.constant(other)
        raise TypeError(f"cannot combine RatPoly with {type(other).__name__}")

    def __add__(self, other) -> "RatPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "RatPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            return RatPoly(c * other for c in self.coeffs)
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "RatPoly":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = RatPoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def scale_arg(self, s: Number) -> "RatPoly":
        """Return the polynomial ``x -> p(s*x)``."""
        s = Fraction(s)
        out = []
        power = Fraction(1)
        for c in self.coeffs:
            out.append(c * power)
            power *= s
        return RatPoly(out)

    def divmod_linear(self, r: Number) -> tuple["RatPoly", Fraction]:
        """Synthetic division by ``(x - r)``: returns ``(quotient, remainder)``."""
        r = Fraction(r)
        if not self.coeffs:
            return RatPoly(), Fraction(0)
        n = len(self.coeffs)
        q = [Fraction(0)] * (n - 1)
        acc = Fraction(0)
        for k in range(n - 1, -1, -1):
            acc = acc * r + self.coeffs[k]
            if k > 0:
                q[k - 1] = acc
        return RatPoly(q), acc

    def derivative(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)


def exp_moment_integrate(p: RatPoly) -> Fraction:
    """Exact ``int_0^inf p(x) e^{-x} dx``, using the moments ``k!``."""
    return sum((c * factorial(k) for k, c in enumerate(p.coeffs)), Fraction(0))


def exp_moment_integrate_weighted(p: RatPoly, nu: int) -> Fraction:
    """Exact ``int_0^inf p(x) x^nu e^{-x} dx / nu!`` for integer ``nu >= 0``."""
    if nu < 0 or int(nu) != nu:
        raise ValueError(f"weight exponent must be a nonnegative integer, got {nu}")
    nf = factorial(nu)
    return sum(
        (c * Fraction(factorial(k + nu), nf) for k, c in enumerate(p.coeffs)),
        Fraction(0),
    )


# -- dense rational matrices (lists of lists of Fraction) ------------------

def mat_identity(n: int) -> RatMatrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_transpose(m: Sequence[Sequence[Fraction]]) -> RatMatrix:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> RatMatrix:
    bt = mat_transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def is_symmetric(m: Sequence[Sequence[Fraction]]) -> bool:
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def common_denominator(m: Sequence[Sequence[Fraction]]) -> int:
    from math import lcm

    d = 1
    for row in m:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d


def to_float_matrix(m: Sequence[Sequence[Fraction]]):
    """Nearest-double conversion of every entry (one rounding per entry)."""
    import numpy as np

    return np.array([[float(x) for x in row] for row in m], dtype=float)
