"""Exact generalized Laguerre polynomials and the identities built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .exactnum import RatPoly, exp_moment_integrate


@dataclass(frozen=True)
class LaguerreBasisElement:
    n: int
    nu: int
    poly: RatPoly


@dataclass(frozen=True)
class PsiNormTable:
    nu: int
    norms: dict = field(default_factory=dict)


@lru_cache(maxsize=None)
def _laguerre_poly(n: int, nu: int) -> RatPoly:
    # lru_cache is safe under threads here: a race recomputes the same value
    if n == 0:
        return RatPoly.constant(1)
    x = RatPoly.x()
    if n == 1:
        return RatPoly([1 + nu, -1])
    k = n - 1
    return ((2 * k + 1 + nu - x) * _laguerre_poly(k, nu)
            - _laguerre_poly(k - 1, nu) * (k + nu)) * Fraction(1, k + 1)


def laguerre(n: int, nu: int = 0) -> LaguerreBasisElement:
    """L_n^nu via the three-term recurrence, seeded by 1 and 1 + nu - x."""
    if n < 0 or nu < 0:
        raise ValueError(f"need n, nu >= 0, got n={n}, nu={nu}")
    # warm the cache bottom-up so large n never recurses deeply
    for k in range(n + 1):
        _laguerre_poly(k, nu)
    return LaguerreBasisElement(n, nu, _laguerre_poly(n, nu))


@lru_cache(maxsize=None)
def laguerre_half(n: int) -> RatPoly:
    """Coefficients of x -> L_n(x/2)."""
    return laguerre(n, 0).poly.scale_arg(Fraction(1, 2))


def connection_coefficients(a: int, b: int) -> list[Fraction]:
    """p_m(a, b) with L_a(x/2) L_b(x/2) = sum_m p_m(a, b) L_m(x), m = 0..a+b.

    Each p_m is the weighted inner product against L_m, which has unit norm
    for the weight e^{-x}.
    """
    pair = laguerre_half(a) * laguerre_half(b)
    return [exp_moment_integrate(pair * laguerre(m, 0).poly) for m in range(a + b + 1)]


def _bivariate_grid(size: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * size for _ in range(size)]


def check_summation_formula(S: int) -> bool:
    """Check L^1_S(x + y) == sum_{n=0}^S L_n(x) L_{S-n}(y) coefficient-wise."""
    if S < 0:
        raise ValueError("S must be nonnegative")
    size = S + 1
    lhs = _bivariate_grid(size)
    for k, c in enumerate(laguerre(S, 1).poly.coeffs):
        for i in range(k + 1):
            lhs[i][k - i] += c * comb(k, i)

    rhs = _bivariate_grid(size)
    for n in range(S + 1):
        px = laguerre(n, 0).poly.coeffs
        py = laguerre(S - n, 0).poly.coeffs
        for i, ci in enumerate(px):
            for j, cj in enumerate(py):
                rhs[i][j] += ci * cj
    return lhs == rhs


def psi_norm(n: int, nu: int) -> Fraction:
    """Squared L^2(R^d) norm of Psi_n^nu, d = 2 nu + 2."""
    if nu not in (0, 1):
        raise ValueError(f"unsupported dimension parameter nu={nu}; only 0 (d=2) and 1 (d=4)")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Fraction(comb(n + nu, n), 2 ** (nu + 1))


def psi_norm_table(nu: int, n_max: int) -> PsiNormTable:
    return PsiNormTable(nu, {n: psi_norm(n, nu) for n in range(n_max + 1)})
