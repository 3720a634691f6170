"""The quartic Laguerre integrals Q(a,b,c,d) and the block matrices Q_S."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .exactnum import (
    RatMatrix,
    central_binomial,
    exp_moment_integrate,
    factorial,
    render_rational,
)
from .laguerre import laguerre_half

# One-sided rational bounds on pi and pi^2.  A claim "x * pi >= c" is certified
# by "x * PI_LOWER >= c"; the upper bounds are reported alongside for audit.
PI_LOWER = Fraction(314159265358979, 10**14)
PI_UPPER = Fraction(355, 113)
PI_SQ_LOWER = Fraction(98696044, 10**7)
PI_SQ_UPPER = Fraction(98696045, 10**7)


def pi_bounds_record() -> dict:
    return {
        "pi_lower": render_rational(PI_LOWER),
        "pi_upper": render_rational(PI_UPPER),
        "pi_sq_lower": render_rational(PI_SQ_LOWER),
        "pi_sq_upper": render_rational(PI_SQ_UPPER),
    }


@dataclass(frozen=True)
class QEntry:
    a: int
    b: int
    c: int
    d: int
    value: Fraction


@dataclass(frozen=True)
class QMatrix:
    S: int
    entries: RatMatrix  # entries[a][c] = Q(a, S-a, c, S-c)

    @property
    def size(self) -> int:
        return self.S + 1


@dataclass(frozen=True)
class CheckResult:
    """A boolean verdict plus whatever witness explains a failure."""

    ok: bool
    witness: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.ok


def q_coefficient(a: int, b: int, c: int, d: int) -> Fraction:
    """int_0^inf L_a(x/2) L_b(x/2) L_c(x/2) L_d(x/2) e^{-x} dx, exactly."""
    if min(a, b, c, d) < 0:
        raise ValueError("indices must be nonnegative")
    poly = laguerre_half(a) * laguerre_half(b) * laguerre_half(c) * laguerre_half(d)
    return exp_moment_integrate(poly)


def q_entry(a: int, b: int, c: int, d: int) -> QEntry:
    return QEntry(a, b, c, d, q_coefficient(a, b, c, d))


@lru_cache(maxsize=None)
def _pair_product(a: int, b: int):
    return laguerre_half(a) * laguerre_half(b)


def _moment_pairing(p, q) -> Fraction:
    # exp_moment_integrate(p * q) without materializing the product
    total = Fraction(0)
    pc, qc = p.coeffs, q.coeffs
    for k, qk in enumerate(qc):
        if qk == 0:
            continue
        inner = sum((pj * factorial(j + k) for j, pj in enumerate(pc)), Fraction(0))
        total += inner * qk
    return total


@lru_cache(maxsize=64)
def _q_matrix_entries(S: int) -> tuple:
    n = S + 1
    half = S // 2
    pairs = [_pair_product(a, S - a) for a in range(n)]
    rows: list[list] = [[None] * n for _ in range(n)]
    # Rows a and S-a coincide (L_a L_{S-a} is symmetric in the pair), and
    # Q_S is symmetric, so rows 0..S/2 restricted to columns 0..S/2 suffice.
    for a in range(half + 1):
        for c in range(a, half + 1):
            v = _moment_pairing(pairs[a], pairs[c])
            for i in {a, S - a}:
                for j in {c, S - c}:
                    rows[i][j] = v
                    rows[j][i] = v
    return tuple(tuple(r) for r in rows)


def build_q_matrix(S: int) -> QMatrix:
    if S < 0:
        raise ValueError("S must be nonnegative")
    return QMatrix(S, [list(r) for r in _q_matrix_entries(S)])


def verify_doubly_stochastic(M: Sequence[Sequence[Fraction]]) -> CheckResult:
    """Exact check: nonnegative entries and all row and column sums equal 1."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(n):
            if M[i][j] < 0:
                return CheckResult(False, {"kind": "negative_entry", "index": [i, j],
                                           "value": render_rational(M[i][j])})
    for i in range(n):
        s = sum(M[i], Fraction(0))
        if s != 1:
            return CheckResult(False, {"kind": "row", "index": i, "sum": render_rational(s)})
    for j in range(n):
        s = sum((M[i][j] for i in range(n)), Fraction(0))
        if s != 1:
            return CheckResult(False, {"kind": "column", "index": j, "sum": render_rational(s)})
    return CheckResult(True)


def min_entry(Q: QMatrix | Sequence[Sequence[Fraction]]) -> tuple[list[tuple[int, int]], Fraction]:
    """Global minimum of the matrix and every position attaining it."""
    entries = Q.entries if isinstance(Q, QMatrix) else Q
    value = min(min(row) for row in entries)
    positions = [(i, j) for i, row in enumerate(entries) for j, x in enumerate(row) if x == value]
    return positions, value


def first_column_formula(a: int, b: int) -> Fraction:
    """Closed form of Q(a, b, a+b, 0)."""
    return Fraction(central_binomial(a) * central_binomial(b), 4 ** (a + b))


def verify_first_column_bound(a: int, b: int, pi_lower: Fraction = PI_LOWER) -> bool:
    """Certify Q(a, b, a+b, 0) >= 2 / (pi (a+b+1)) using a lower bound for pi."""
    return first_column_formula(a, b) * pi_lower * (a + b + 1) >= 2


def check_min_entry_conjecture(Q: QMatrix) -> dict:
    """Does the minimum of Q_S sit at the middle row of the first column?"""
    S = Q.S
    positions, value = min_entry(Q)
    expected = q_coefficient(S // 2, S - S // 2, S, 0)
    return {
        "value": render_rational(value),
        "expected": render_rational(expected),
        "attaining_positions": len(positions),
        "middle_row_first_column_attains": (S // 2, 0) in positions,
        "passed": value == expected and (S // 2, 0) in positions,
    }


def matrix_to_csv(entries: Sequence[Sequence[Fraction]]) -> str:
    return "".join(",".join(render_rational(x) for x in row) + "\n" for row in entries)


def matrix_to_json(S: int, entries: Sequence[Sequence[Fraction]]) -> dict:
    return {"S": S, "entries": [[render_rational(x) for x in row] for row in entries]}


def dump_matrix(S: int, entries, fmt: str = "json") -> str:
    if fmt == "csv":
        return matrix_to_csv(entries)
    if fmt == "json":
        return json.dumps(matrix_to_json(S, entries))
    raise ValueError(f"unknown format {fmt!r}")
