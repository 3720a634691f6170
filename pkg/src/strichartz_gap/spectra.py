"""Exact characteristic polynomials, eigenvalue certificates and spectral gaps.

Exact results never depend on the float eigensolver; it is only a cross-check.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exactnum import RatPoly, central_binomial, common_denominator, render_rational, to_float_matrix
from .qcore import build_q_matrix

DS_TOL = 1e-12
SLACK = 1e-9
CLUSTER_TOL = 1e-9


@dataclass(frozen=True)
class CharPoly:
    S: int
    poly: RatPoly
    provenance: str  # "division_free" | "fraction_free"


@dataclass
class SpectralReport:
    S: int
    char_poly: list
    conjectured_eigs: list
    multiplicities: dict
    zero_multiplicity: int
    gap_exact: Optional[Fraction]
    gap_float: float
    passed: bool
    failure: Optional[dict] = None
    elapsed_ms: int = 0

    def to_json(self) -> dict:
        return {
            "S": self.S,
            "char_poly": [render_rational(c) for c in self.char_poly],
            "eigs": [{"value": render_rational(v), "multiplicity": self.multiplicities.get(v, 0)}
                     for v in self.conjectured_eigs],
            "zero_multiplicity": self.zero_multiplicity,
            "gap_exact": None if self.gap_exact is None else render_rational(self.gap_exact),
            "gap_float": self.gap_float,
            "passed": self.passed,
            "elapsed_ms": self.elapsed_ms,
        }


def _berkowitz(A: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of det(xI - A), highest degree first, ring operations only."""
    n = len(A)
    if n == 0:
        return [1]
    poly = [1, -A[0][0]]
    for r in range(1, n):
        row = A[r][:r]
        col = [A[i][r] for i in range(r)]
        toeplitz = [1, -A[r][r]]
        vec = list(row)
        for _ in range(r):
            toeplitz.append(-sum(x * y for x, y in zip(vec, col)))
            vec = [sum(vec[i] * A[i][j] for i in range(r)) for j in range(r)]
        new = []
        for i in range(r + 2):
            acc = 0
            for j in range(max(0, i - r - 1), min(i, r) + 1):
                acc += toeplitz[i - j] * poly[j]
            new.append(acc)
        poly = new
    return poly


def _faddeev_leverrier(A: Sequence[Sequence[int]]) -> list[int]:
    """Same output as _berkowitz; the divisions by k are exact over the integers."""
    n = len(A)
    coeffs = [1]
    M = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[-1]
        M = [[sum(A[i][t] * M[t][j] for t in range(n)) + (c_prev if i == j else 0)
              for j in range(n)] for i in range(n)]
        trace = sum(sum(A[i][t] * M[t][i] for t in range(n)) for i in range(n))
        q, rem = divmod(-trace, k)
        if rem:
            raise ArithmeticError("non-exact division in Faddeev-LeVerrier")
        coeffs.append(q)
    return coeffs


def char_poly(M: Sequence[Sequence[Fraction]], method: str = "berkowitz") -> CharPoly:
    """det(x I - M) exactly.  Denominators are cleared first: with D M integral
    and q its characteristic polynomial, p(x) = q(D x) / D^n."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    D = common_denominator(M)
    A = [[int(Fraction(x) * D) for x in row] for row in M]
    if method == "berkowitz":
        high_first, provenance = _berkowitz(A), "division_free"
    elif method == "faddeev":
        high_first, provenance = _faddeev_leverrier(A), "fraction_free"
    else:
        raise ValueError(f"unknown method {method!r}")
    q = high_first[::-1]  # ascending
    coeffs = [Fraction(c * D ** k, D ** n) for k, c in enumerate(q)]
    return CharPoly(n - 1, RatPoly(coeffs), provenance)


def conjectured_eigenvalue(n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Fraction(central_binomial(n) ** 2, 16 ** n)


def psd_certificate(p: CharPoly | RatPoly) -> bool:
    """Weak sign alternation of a real-rooted monic polynomial <=> roots >= 0."""
    poly = p.poly if isinstance(p, CharPoly) else p
    d = poly.degree
    return all((-1) ** (d - k) * c >= 0 for k, c in enumerate(poly.coeffs))


def _gap_from_moduli(moduli: Sequence[float], tol: float = CLUSTER_TOL) -> float:
    ms = sorted((float(m) for m in moduli), reverse=True)
    top = ms[0]
    for m in ms[1:]:
        if top - m > tol:
            return top - m
    return 0.0


def spectral_gap_float(M) -> float:
    A = to_float_matrix(M) if not isinstance(M, np.ndarray) else M
    return _gap_from_moduli(np.abs(np.linalg.eigvalsh(A)))


def _exact_gap(values: Sequence[Fraction]) -> Fraction:
    ms = sorted({abs(v) for v in values}, reverse=True)
    return ms[0] - ms[1] if len(ms) > 1 else Fraction(0)


def _root_multiplicity(poly: RatPoly, root: Fraction) -> tuple[int, RatPoly]:
    mult = 0
    while poly.degree >= 1:
        q, rem = poly.divmod_linear(root)
        if rem != 0:
            break
        poly, mult = q, mult + 1
    return mult, poly


def verify_eig_conjecture(S: int, Q=None) -> SpectralReport:
    """Certify Eig(Q_S) = {lambda(0..S//2)} u {0} with the conjectured multiplicities.

    Each lambda(n) is divided out of p_S; the division must be exact once and
    the quotient must not vanish at lambda(n) again.  Then x^ceil(S/2) must
    divide what is left, leaving exactly the constant 1.
    """
    if S < 1:
        raise ValueError("the eigenvalue statement starts at S = 1")
    t0 = time.perf_counter()
    Q = build_q_matrix(S) if Q is None else Q
    cp = char_poly(Q.entries)
    eigs = [conjectured_eigenvalue(n) for n in range(S // 2 + 1)]
    zero_expected = S - S // 2
    multiplicities: dict = {}
    failure = None
    rest = cp.poly
    for lam in eigs:
        mult, rest = _root_multiplicity(rest, lam)
        multiplicities[lam] = mult
        if mult != 1 and failure is None:
            failure = {"root": render_rational(lam), "expected_multiplicity": 1, "found": mult}
    zero_mult, rest = _root_multiplicity(rest, Fraction(0))
    if failure is None and zero_mult != zero_expected:
        failure = {"root": "0/1", "expected_multiplicity": zero_expected, "found": zero_mult}
    if failure is None and rest != RatPoly.constant(1):
        failure = {"residual": rest.render("l")}
    passed = failure is None
    gap_exact = _exact_gap(eigs + [Fraction(0)]) if passed else None
    report = SpectralReport(
        S=S,
        char_poly=list(cp.poly.coeffs),
        conjectured_eigs=eigs,
        multiplicities=multiplicities,
        zero_multiplicity=zero_mult,
        gap_exact=gap_exact,
        gap_float=spectral_gap_float(Q.entries),
        passed=passed,
        failure=failure,
    )
    report.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return report


# -- float lemmas on doubly stochastic matrices ----------------------------

def _require_doubly_stochastic(A: np.ndarray, tol: float = DS_TOL) -> None:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if np.any(A < -tol):
        raise ValueError("matrix has negative entries")
    ones = np.ones(A.shape[0])
    if (np.max(np.abs(A @ ones - 1)) > tol) or (np.max(np.abs(A.T @ ones - 1)) > tol):
        raise ValueError("matrix is not doubly stochastic within tolerance")


def dist_sq_to_ones(v: np.ndarray) -> float:
    v = np.asarray(v, dtype=complex)
    n = v.shape[0]
    return float(np.vdot(v, v).real - abs(v.sum()) ** 2 / n)


def check_ds_contraction(A, v, mu: Optional[float] = None) -> bool:
    """|<Av, v>| <= |v|^2 - mu Dist(v, span 1)^2 (+1e-9) with mu = n min a_ij > 0."""
    A = np.asarray(A, dtype=float)
    _require_doubly_stochastic(A)
    n = A.shape[0]
    floor = n * float(A.min())
    if mu is None:
        mu = floor
    if not mu > 0:
        raise ValueError("lemma requires mu = n * min entry > 0")
    if mu > floor + DS_TOL:
        raise ValueError(f"mu={mu} exceeds n * min entry = {floor}")
    v = np.asarray(v, dtype=complex)
    lhs = abs(np.vdot(v, A @ v))
    rhs = np.vdot(v, v).real - mu * dist_sq_to_ones(v)
    return bool(lhs <= rhs + SLACK)


def check_sg_contraction(A, v) -> bool:
    """|<Av, v>| <= |v|^2 - SG(A) Dist(v, span 1)^2 (+1e-9)."""
    A = np.asarray(A, dtype=float)
    _require_doubly_stochastic(A)
    if np.max(np.abs(A - A.T)) > DS_TOL:
        raise ValueError("matrix must be symmetric")
    if not A.min() > 0:
        raise ValueError("lemma requires strictly positive entries")
    v = np.asarray(v, dtype=complex)
    sg = spectral_gap_float(A)
    lhs = abs(np.vdot(v, A @ v))
    rhs = np.vdot(v, v).real - sg * dist_sq_to_ones(v)
    return bool(lhs <= rhs + SLACK)


def random_symmetric_doubly_stochastic(n: int, rng: np.random.Generator,
                                       tol: float = DS_TOL, max_sweeps: int = 10_000) -> np.ndarray:
    """Sinkhorn-normalize a positive random matrix, then symmetrize.

    (A + A^T)/2 keeps row and column sums of a doubly stochastic A, so one
    symmetrization after convergence preserves the tolerance.
    """
    A = rng.uniform(0.05, 1.0, size=(n, n))
    for _ in range(max_sweeps):
        A /= A.sum(axis=1, keepdims=True)
        A /= A.sum(axis=0, keepdims=True)
        if np.max(np.abs(A.sum(axis=1) - 1)) < tol / 4:
            break
    else:
        raise RuntimeError("Sinkhorn did not converge")
    return (A + A.T) / 2
