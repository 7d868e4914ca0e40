"""Shared instance samplers for randomized suites (not oracles)."""

from __future__ import annotations

import random

from etacm.arith import is_probable_prime, legendre
from etacm.classpoly import check_integrality_conditions
from etacm.pipeline import find_trace
from etacm.qforms import b_candidates

PRIME_POOL = [(3, 5), (3, 7), (3, 13), (5, 7), (5, 11), (5, 13), (7, 11), (11, 13)]


def valid_triples(rng: random.Random, count: int, dmin: int, dmax: int,
                  pool=PRIME_POOL) -> list[tuple[int, int, int]]:
    """(D, p1, p2) with the integrality conditions satisfied, |D| in [dmin, dmax]."""
    out = []
    while len(out) < count:
        p1, p2 = pool[rng.randrange(len(pool))]
        k = rng.randint(dmin, dmax)
        D = -k if k % 4 in (0, 3) else -k - (4 - k % 4) + 3  # force 0,1 mod 4
        if D % 4 not in (0, 1):
            continue
        if check_integrality_conditions(D, p1, p2):
            out.append((D, p1, p2))
    return out


def pick_b(rng: random.Random, D: int, p1: int, p2: int) -> int:
    bs = b_candidates(D, p1 * p2)
    return bs[rng.randrange(len(bs))]


def split_prime(D: int, lmin: int = 5, lmax: int = 10**6,
                avoid: tuple[int, ...] = ()) -> int | None:
    """Smallest odd prime l in [lmin, lmax] with 4l = t^2 - D v^2 solvable."""
    l = max(lmin, 3)
    if l % 2 == 0:
        l += 1
    while l <= lmax:
        if is_probable_prime(l) and D % l and l not in avoid:
            if find_trace(D, l) is not None:
                return l
        l += 2
    return None


def both_symbols_one(D: int, p1: int, p2: int) -> bool:
    return legendre(D, p1) == 1 and legendre(D, p2) == 1
