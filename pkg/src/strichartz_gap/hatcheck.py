"""Brute-force hat-check counts, an oracle independent of the Laguerre stack.

Guests from four clubs (sizes a, b, c, d) pick hats at random.  An event
records which club's insignia each guest ends up wearing.  The signed count
is (#events with an even number of wrong-club hats) minus (#odd events); it
should equal 2^(a+b+c+d) Q(a, b, c, d).  Counting labelled permutations instead
multiplies the tally by a! b! c! d!.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from .qcore import PI_LOWER, q_coefficient

DEFAULT_CEILING = 10
HARD_CEILING = 12


@dataclass(frozen=True)
class ClubPartition:
    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) != 4 or min(sizes) < 0:
            raise ValueError(f"need four nonnegative club sizes, got {self.sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def block_of(self) -> tuple:
        return tuple(club for club, size in enumerate(self.sizes) for _ in range(size))


def _count_with_first(sizes: tuple, block_of: tuple, first: int) -> int:
    """Signed tally over insignia assignments giving guest 0 a hat of club ``first``.

    Hats of one club are interchangeable, so an event is the sequence of clubs
    on the guests' heads.  Depth-first over guests, parity carried along.
    """
    n = len(block_of)
    left = list(sizes)
    if left[first] == 0:
        return 0
    left[first] -= 1

    def walk(guest: int, parity: int) -> int:
        if guest == n:
            return 1 - 2 * parity
        total = 0
        mine = block_of[guest]
        for club in range(4):
            if left[club]:
                left[club] -= 1
                total += walk(guest + 1, parity ^ (club != mine))
                left[club] += 1
        return total

    return walk(1, int(first != block_of[0]))


def _task(args):
    return _count_with_first(*args)


def _check_size(p: ClubPartition, ceiling: int) -> None:
    if ceiling > HARD_CEILING:
        raise ValueError(f"ceiling {ceiling} above hard limit {HARD_CEILING}")
    if p.n > ceiling:
        raise ValueError(f"n = {p.n} exceeds enumeration ceiling {ceiling}")


def signed_count(p: ClubPartition, ceiling: int = DEFAULT_CEILING, jobs: int = 1) -> int:
    """#events with an even number of wrong-club hats minus #odd events."""
    _check_size(p, ceiling)
    if p.n == 0:
        return 1
    tasks = [(p.sizes, p.block_of, club) for club in range(4)]
    if jobs > 1 and p.n >= 10:
        with ProcessPoolExecutor(max_workers=min(jobs, 4)) as pool:
            return sum(pool.map(_task, tasks))
    return sum(map(_task, tasks))


def signed_permutation_count(p: ClubPartition, ceiling: int = DEFAULT_CEILING) -> int:
    """Same tally with every hat distinguishable: all n! permutations.

    Equals a! b! c! d! * signed_count(p).
    """
    _check_size(p, ceiling)
    block_of = p.block_of
    total = 0
    for perm in permutations(range(p.n)):
        wrong = sum(block_of[h] != block_of[g] for g, h in enumerate(perm))
        total += 1 - 2 * (wrong & 1)
    return total


def hatcheck_record(a: int, b: int, c: int, d: int, ceiling: int = DEFAULT_CEILING) -> dict:
    p = ClubPartition((a, b, c, d))
    count = signed_count(p, ceiling)
    scaled = 2 ** p.n * q_coefficient(a, b, c, d)
    integral = scaled.denominator == 1
    return {
        "a": a, "b": b, "c": c, "d": d,
        "signed_count": count,
        "two_pow_n_times_Q": int(scaled) if integral else f"{scaled.numerator}/{scaled.denominator}",
        "match": integral and count == scaled,
    }


def tuples_up_to(max_n: int):
    for sizes in product(range(max_n + 1), repeat=4):
        if sum(sizes) <= max_n:
            yield sizes


def verify_hatcheck_identity(max_n: int, ceiling: int = DEFAULT_CEILING) -> tuple[bool, list, dict | None]:
    """Exhaustive check of signed_count == 2^n Q(a,b,c,d) and positivity.

    Returns (ok, records, first failing record or None).
    """
    if max_n > ceiling:
        raise ValueError(f"max_n = {max_n} exceeds enumeration ceiling {ceiling}")
    records = []
    witness = None
    for sizes in tuples_up_to(max_n):
        rec = hatcheck_record(*sizes, ceiling=ceiling)
        rec["positive"] = rec["signed_count"] > 0
        records.append(rec)
        if witness is None and not (rec["match"] and rec["positive"]):
            witness = rec
    return witness is None, records, witness


def verify_hatcheck_lower_bound(max_n: int, ceiling: int = DEFAULT_CEILING,
                                pi_lower: Fraction = PI_LOWER) -> tuple[bool, dict | None]:
    """Conjectural evidence: signed_count >= 2^(n+1) / (pi (n+1)) when a+b = c+d."""
    if max_n > ceiling:
        raise ValueError(f"max_n = {max_n} exceeds enumeration ceiling {ceiling}")
    for a, b, c, d in tuples_up_to(max_n):
        if a + b != c + d:
            continue
        n = a + b + c + d
        count = signed_count(ClubPartition((a, b, c, d)), ceiling)
        if count * pi_lower * (n + 1) < 2 ** (n + 1):
            return False, {"a": a, "b": b, "c": c, "d": d, "signed_count": count}
    return True, None
