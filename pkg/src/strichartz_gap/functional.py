"""The sharpened inequality evaluated on truncated Laguerre coefficients.

Initial data g(x, y) = sum phi(m, n) Psi_m(x) Psi_n(y) is represented by its
finitely supported coefficient map phi.  Exact Q_S entries are rounded to
doubles once, entry by entry; everything downstream is float.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactnum import to_float_matrix
from .qcore import build_q_matrix

GAMMA_PROVEN = 4 / math.pi ** 2
GAMMA_CONJECTURED = 0.75
NUMERICAL_ZERO = 1e-9


@dataclass
class CoeffSeq:
    """Finitely supported phi: (m, n) -> complex."""

    support: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (m, n), z in self.support.items():
            m, n = int(m), int(n)
            if m < 0 or n < 0:
                raise ValueError(f"negative index ({m}, {n})")
            clean[(m, n)] = complex(z)
        self.support = clean

    @classmethod
    def basis(cls, m: int, n: int) -> "CoeffSeq":
        return cls({(m, n): 1.0})

    @property
    def max_S(self) -> int:
        return max((m + n for m, n in self.support), default=-1)

    @property
    def norm_sq(self) -> float:
        return float(sum(abs(z) ** 2 for z in self.support.values()))

    def block(self, S: int) -> np.ndarray:
        """P_S(phi) as a vector indexed by m, with n = S - m."""
        v = np.zeros(S + 1, dtype=complex)
        for (m, n), z in self.support.items():
            if m + n == S:
                v[m] = z
        return v

    def blocks(self) -> dict[int, np.ndarray]:
        return {S: self.block(S) for S in sorted({m + n for m, n in self.support})}

    def to_json(self) -> dict:
        return {"entries": [{"m": m, "n": n, "re": z.real, "im": z.imag}
                            for (m, n), z in sorted(self.support.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "CoeffSeq":
        support: dict = {}
        for e in data["entries"]:
            key = (int(e["m"]), int(e["n"]))
            support[key] = support.get(key, 0) + complex(float(e["re"]), float(e.get("im", 0.0)))
        return cls(support)

    @classmethod
    def load(cls, path) -> "CoeffSeq":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


@dataclass
class InequalityVerdict:
    lhs: float
    norm_sq: float
    dist_sq: float
    gamma: float
    margin: float
    spacetime_lhs: float
    mass_rhs: float
    r4_dist_sq: float

    def to_json(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=None)
def q_matrix_float(S: int) -> np.ndarray:
    # write-once per S; a racing duplicate computes identical values
    A = to_float_matrix(build_q_matrix(S).entries)
    A.setflags(write=False)
    return A


def _block_form(S: int, v: np.ndarray) -> float:
    return float(np.vdot(v, q_matrix_float(S) @ v).real)


def _block_dist_sq(v: np.ndarray) -> float:
    return float(np.sum(np.abs(v - v.mean()) ** 2))


def quadratic_form(phi: CoeffSeq) -> float:
    """<phi, Q phi>, summed over antidiagonal blocks."""
    return sum((_block_form(S, v) for S, v in phi.blocks().items()), 0.0)


def dist_to_grad(phi: CoeffSeq) -> float:
    """Squared distance to sequences constant on every antidiagonal."""
    return sum((_block_dist_sq(v) for v in phi.blocks().values()), 0.0)


def evaluate(phi: CoeffSeq, gamma: float = GAMMA_PROVEN) -> InequalityVerdict:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    lhs = quadratic_form(phi)
    norm_sq = phi.norm_sq
    dist_sq = dist_to_grad(phi)
    return InequalityVerdict(
        lhs=lhs,
        norm_sq=norm_sq,
        dist_sq=dist_sq,
        gamma=gamma,
        margin=norm_sq - gamma * dist_sq - lhs,
        spacetime_lhs=lhs / 16,
        mass_rhs=norm_sq / 16,
        r4_dist_sq=dist_sq / 4,
    )


def tensor_coeffs(f_coeffs: Sequence[complex]) -> CoeffSeq:
    """phi(m, n) = f_m f_n for g = f (x) f."""
    f = [complex(z) for z in f_coeffs]
    return CoeffSeq({(m, n): fm * fn for m, fm in enumerate(f) for n, fn in enumerate(f)
                     if fm != 0 and fn != 0})


def strichartz_margin_for_f(f_coeffs: Sequence[complex], gamma: float = GAMMA_PROVEN) -> tuple[float, float]:
    """Fourth powers of both sides of the sharpened radial Strichartz bound.

    Returns (||u||_{L^4}^4, (1/4) ||f||^4 [1 - gamma Dist^2(f(x)f, rad) / ||f||^4]),
    using ||f||^2_{L^2(R^2)} = sum |f_n|^2 / 2.
    """
    verdict = evaluate(tensor_coeffs(f_coeffs), gamma)
    f_norm_sq = 0.5 * sum(abs(complex(z)) ** 2 for z in f_coeffs)
    f_norm_4 = f_norm_sq ** 2
    if f_norm_4 == 0:
        return verdict.spacetime_lhs, 0.0
    rhs = 0.25 * f_norm_4 * (1 - gamma * verdict.r4_dist_sq / f_norm_4)
    return verdict.spacetime_lhs, rhs


# -- batched evaluation for random campaigns --------------------------------

def evaluate_blocks_batch(blocks: dict[int, np.ndarray], gamma: float) -> dict[str, np.ndarray]:
    """Vectorized evaluate(): ``blocks[S]`` has shape (N, S+1), one row per sample."""
    lhs = norm_sq = dist_sq = 0.0
    for S, V in blocks.items():
        QV = V @ q_matrix_float(S)  # Q_S symmetric
        lhs = lhs + np.real(np.sum(np.conj(V) * QV, axis=1))
        norm_sq = norm_sq + np.sum(np.abs(V) ** 2, axis=1)
        dist_sq = dist_sq + np.sum(np.abs(V - V.mean(axis=1, keepdims=True)) ** 2, axis=1)
    return {"lhs": lhs, "norm_sq": norm_sq, "dist_sq": dist_sq,
            "margin": norm_sq - gamma * dist_sq - lhs}


def random_blocks(rng: np.random.Generator, n_samples: int, max_S: int) -> dict[int, np.ndarray]:
    """Random phi with support in m + n <= max_S.

    Each sample draws its own top antidiagonal; each lower block is switched on
    with probability 1/2, and one sample in eight is made antidiagonal-constant
    so the equality case is exercised too.
    """
    top = rng.integers(0, max_S + 1, size=n_samples)
    flat = rng.random(n_samples) < 0.125
    blocks = {}
    for S in range(max_S + 1):
        V = rng.standard_normal((n_samples, S + 1)) + 1j * rng.standard_normal((n_samples, S + 1))
        const = rng.standard_normal(n_samples) + 1j * rng.standard_normal(n_samples)
        V[flat] = const[flat, None]
        active = (S <= top) & (rng.random(n_samples) < 0.5)
        V[~active] = 0
        blocks[S] = V
    return blocks


def blocks_row_to_coeffseq(blocks: dict[int, np.ndarray], i: int) -> CoeffSeq:
    return CoeffSeq({(m, S - m): complex(V[i, m]) for S, V in blocks.items()
                     for m in range(S + 1) if V[i, m] != 0})


def margin_campaign(n_samples: int, max_S: int, gamma: float, seed: int,
                    chunk: int = 20_000) -> dict:
    """Worst margin over seeded random phi; the witness is serialized if negative."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    witness = None
    done = 0
    violations = 0
    while done < n_samples:
        size = min(chunk, n_samples - done)
        blocks = random_blocks(rng, size, max_S)
        res = evaluate_blocks_batch(blocks, gamma)
        i = int(np.argmin(res["margin"]))
        violations += int(np.sum(res["margin"] < -NUMERICAL_ZERO))
        if res["margin"][i] < worst:
            worst = float(res["margin"][i])
            if worst < -NUMERICAL_ZERO:
                witness = blocks_row_to_coeffseq(blocks, i).to_json()
        done += size
    return {
        "samples": n_samples,
        "max_S": max_S,
        "gamma": gamma,
        "seed": seed,
        "min_margin": worst,
        "violations": violations,
        "passed": violations == 0,
        "witness": witness,
    }
