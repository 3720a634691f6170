"""The kernel matrix kappa_S, the connection matrix P_S and their identities.

kappa_{m,n} = int_0^inf L_m(x) K_S(L_n)(x) e^{-x} dx has a closed form as a
convolution of central binomials (the production route) and an integral
representation over t in [0, pi/2] that is evaluated exactly with rational
Wallis values (the test oracle).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactnum import (
    RatMatrix,
    RatPoly,
    central_binomial,
    exp_moment_integrate,
    factorial,
    is_symmetric,
    mat_mul,
    mat_transpose,
    render_rational,
    to_float_matrix,
)
from .laguerre import connection_coefficients, laguerre, laguerre_half
from .qcore import PI_LOWER, PI_SQ_LOWER, CheckResult, build_q_matrix, verify_doubly_stochastic

DEFAULT_CROSS_CHECK_CEILING = 12


class KernelMismatch(AssertionError):
    """The two kappa routes disagree; carries the offending entry."""


@dataclass(frozen=True)
class KappaMatrix:
    S: int
    entries: RatMatrix


@dataclass(frozen=True)
class ConnectionMatrix:
    S: int
    entries: RatMatrix  # entries[a][m] = p_m(a, S-a)


def kappa_binomial(S: int, m: int, n: int) -> Fraction:
    """Sum of C(2i,i)C(2j,j)C(2u,u)C(2v,v) over i+j=S-n, u+v=n, j+v=m, over 4^S."""
    if not (0 <= m <= S and 0 <= n <= S):
        raise ValueError(f"need 0 <= m, n <= S, got S={S}, m={m}, n={n}")
    total = 0
    for j in range(max(0, m - n), min(m, S - n) + 1):
        i, v = S - n - j, m - j
        u = n - v
        total += (central_binomial(i) * central_binomial(j)
                  * central_binomial(u) * central_binomial(v))
    return Fraction(total, 4 ** S)


def wallis(u: int, v: int) -> Fraction:
    """(2/pi) int_0^{pi/2} cos^{2u} t sin^{2v} t dt."""
    return Fraction(factorial(2 * u) * factorial(2 * v),
                    4 ** (u + v) * factorial(u) * factorial(v) * factorial(u + v))


def kappa_integral(S: int, m: int, n: int) -> Fraction:
    """kappa_{m,n} from K_S(L_n)(x) = avg_t L_{S-n}(x sin^2 t) L_n(x cos^2 t).

    Expands L_{S-n}(x sin^2 t) L_n(x cos^2 t) L_m(x) into monomials
    x^k cos^{2u} t sin^{2v} t, integrates x by k! and t by the Wallis value.
    """
    if not (0 <= m <= S and 0 <= n <= S):
        raise ValueError(f"need 0 <= m, n <= S, got S={S}, m={m}, n={n}")
    sin_part = laguerre(S - n, 0).poly.coeffs   # power v of x sin^2 t
    cos_part = laguerre(n, 0).poly.coeffs       # power u of x cos^2 t
    lm = laguerre(m, 0).poly.coeffs
    # integrate L_m against x^k once per k
    x_moment = [sum((c * factorial(k + w) for w, c in enumerate(lm)), Fraction(0))
                for k in range(len(sin_part) + len(cos_part))]
    total = Fraction(0)
    for v, cv in enumerate(sin_part):
        for u, cu in enumerate(cos_part):
            total += cv * cu * wallis(u, v) * x_moment[u + v]
    return total


def kernel_apply(S: int, f: RatPoly) -> RatPoly:
    """K_S(f)(x) = int K_S(x, y) f(y) e^{-y} dy with
    K_S(x, y) = sum_{m+n=S} L_n(x/2) L_m(x/2) L_m(y/2) L_n(y/2)."""
    out = RatPoly()
    for m in range(S + 1):
        pair = laguerre_half(m) * laguerre_half(S - m)
        weight = exp_moment_integrate(pair * f)
        if weight:
            out = out + pair * weight
    return out


def kappa_vanishing_check(S: int, n: int, max_m: int) -> bool:
    """True iff <L_m, K_S(L_n)> = 0 for every m <= max_m (requires n > S)."""
    if n <= S:
        raise ValueError(f"vanishing only applies to n > S, got n={n}, S={S}")
    image = kernel_apply(S, laguerre(n, 0).poly)
    return all(exp_moment_integrate(laguerre(m, 0).poly * image) == 0 for m in range(max_m + 1))


@lru_cache(maxsize=64)
def _kappa_entries(S: int) -> tuple:
    rows = [[None] * (S + 1) for _ in range(S + 1)]
    for m in range(S + 1):
        for n in range(m, S + 1):
            rows[m][n] = rows[n][m] = kappa_binomial(S, m, n)
    return tuple(tuple(r) for r in rows)


def build_kappa(S: int, cross_check_ceiling: int = DEFAULT_CROSS_CHECK_CEILING) -> KappaMatrix:
    """kappa_S from the binomial route; below the ceiling every entry is also
    recomputed through kappa_integral and a mismatch raises KernelMismatch."""
    if S < 0:
        raise ValueError("S must be nonnegative")
    entries = [list(r) for r in _kappa_entries(S)]
    if S <= cross_check_ceiling:
        for m in range(S + 1):
            for n in range(S + 1):
                other = kappa_integral(S, m, n)
                if other != entries[m][n]:
                    raise KernelMismatch(
                        f"kappa route mismatch at S={S}, (m,n)=({m},{n}): "
                        f"{entries[m][n]} != {other}")
    return KappaMatrix(S, entries)


def build_connection(S: int) -> ConnectionMatrix:
    if S < 0:
        raise ValueError("S must be nonnegative")
    return ConnectionMatrix(S, [connection_coefficients(a, S - a) for a in range(S + 1)])


def verify_step3_bridge(S: int) -> bool:
    """Q_S^2 == P kappa_S P^T exactly."""
    q = build_q_matrix(S).entries
    p = build_connection(S).entries
    k = build_kappa(S, cross_check_ceiling=-1).entries
    return mat_mul(q, q) == mat_mul(mat_mul(p, k), mat_transpose(p))


def verify_kappa_entry_bound(S: int, pi_sq_lower: Fraction = PI_SQ_LOWER) -> CheckResult:
    """Certify kappa_{m,n} >= 4 / (pi^2 (S+1)) for every entry.

    Since pi^2 > pi_sq_lower, min_entry * (S+1) * pi_sq_lower >= 4 suffices.
    """
    if S < 1:
        raise ValueError("entry bound is stated for S >= 1")
    k = _kappa_entries(S)
    value = min(min(row) for row in k)
    pos = next((i, j) for i, row in enumerate(k) for j, x in enumerate(row) if x == value)
    scaled = value * (S + 1)
    return CheckResult(scaled * pi_sq_lower >= 4, {
        "min_entry": render_rational(value),
        "position": list(pos),
        "min_entry_times_S_plus_1": render_rational(scaled),
    })


def verify_stirling_bound(max_p: int, pi_lower: Fraction = PI_LOWER) -> bool:
    """Certify C(2p,p)/4^p >= 1/sqrt(pi (p + 1/2)) for all p <= max_p (squared form)."""
    for p in range(max_p + 1):
        ratio = Fraction(central_binomial(p), 4 ** p)
        if ratio * ratio * pi_lower * (p + Fraction(1, 2)) < 1:
            return False
    return True


def connection_rows_sum_to_one(P: ConnectionMatrix) -> bool:
    return all(sum(row, Fraction(0)) == 1 for row in P.entries)


def kappa_structure(K: KappaMatrix) -> dict:
    ds = verify_doubly_stochastic(K.entries)
    ones = [sum(row, Fraction(0)) for row in K.entries]
    return {
        "symmetric": is_symmetric(K.entries),
        "doubly_stochastic": ds.ok,
        "fixes_ones_vector": all(x == 1 for x in ones),
        "witness": ds.witness,
    }


def power_convergence_profile(S: int, k_max: int = 12) -> dict:
    """Deviation of kappa_S^k from the uniform matrix 1/(S+1), k = 1..k_max.

    ``exact`` holds the exact maxima; ``theta`` is the float second singular
    value plus 1e-9, and ``constant`` the smallest C with dev_k <= C theta^k
    over the computed range.
    """
    K = build_kappa(S, cross_check_ceiling=-1).entries
    target = Fraction(1, S + 1)
    power = K
    exact = []
    for k in range(1, k_max + 1):
        if k > 1:
            power = mat_mul(power, K)
        exact.append(max(abs(x - target) for row in power for x in row))
    moduli = np.sort(np.abs(np.linalg.eigvalsh(to_float_matrix(K))))[::-1]
    sigma2 = float(moduli[1]) if len(moduli) > 1 else 0.0
    theta = sigma2 + 1e-9
    constant = max(float(d) / theta ** k for k, d in enumerate(exact, start=1))
    return {"exact": exact, "theta": theta, "sigma2": sigma2, "constant": constant}
