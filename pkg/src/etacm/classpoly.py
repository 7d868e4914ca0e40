"""Integer class polynomials of the double eta-quotient over N-systems.

H_{B,N}(X) is the monic degree-h(D) product of (X - w^s(alpha_i)) over an
N-system; by construction it has exact integer coefficients whenever the
integrality conditions hold.  The complex product is expanded through a
balanced tree with one worst-case error bound carried per polynomial, and
the rounding to integers is accepted only when both the rounding residual
and the certified evaluation error are small; otherwise the working
precision is doubled (at most six times).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath.libmp import from_int, mpf_sub, to_float, to_int

from .apcomplex import RND, ApComplex
from .arith import crt_pair, is_probable_prime, legendre
from .errors import ConditionsViolated, InvalidB, PrecisionExhausted, ZeroConstantTerm
from .etafunc import s_exponent, w_pow_s_with_err
from .qforms import Discriminant, NSystem, b_candidates, build_nsystem

MAX_PRECISION = 65536
MAX_DOUBLINGS = 6
RESIDUAL_LIMIT = 1e-3


@dataclass(frozen=True)
class ClassPolynomial:
    """Monic integer polynomial with coefficients stored lowest degree first."""

    D: Discriminant
    p1: int
    p2: int
    s: int
    B: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def descending(self) -> list[int]:
        return list(reversed(self.coeffs))


def _log2add(*vals: float) -> float:
    top = max(vals)
    if top == float("-inf"):
        return top
    return top + math.log2(sum(2.0 ** (v - top) for v in vals))


class CPoly:
    """Complex polynomial with an L1-norm bound and a per-coefficient
    absolute-error bound, both as log2 exponents."""

    __slots__ = ("coeffs", "err", "norm")

    def __init__(self, coeffs: list[ApComplex], err: float, norm: float):
        self.coeffs = coeffs
        self.err = err
        self.norm = norm

    def mul(self, other: "CPoly", wp: int) -> "CPoly":
        n, m = len(self.coeffs), len(other.coeffs)
        zero = ApComplex.make(0, 0, wp)
        out = [zero] * (n + m - 1)
        for i, ci in enumerate(self.coeffs):
            for j, cj in enumerate(other.coeffs):
                out[i + j] = out[i + j] + ci * cj
        err = _log2add(self.norm + other.err, other.norm + self.err,
                       self.err + other.err,
                       self.norm + other.norm - wp + math.log2(min(n, m)) + 2)
        return CPoly(out, err, self.norm + other.norm)


def product_tree(roots: list[tuple[ApComplex, float]], wp: int) -> CPoly:
    """Expand prod (X - r_i) for (value, log2 error) pairs."""
    one = ApComplex.make(1, 0, wp)
    leaves = [
        CPoly([-r, one], err, _log2add(0.0, r.mag() + 0.0))
        for r, err in roots
    ]
    while len(leaves) > 1:
        nxt = []
        for i in range(0, len(leaves) - 1, 2):
            nxt.append(leaves[i].mul(leaves[i + 1], wp))
        if len(leaves) % 2:
            nxt.append(leaves[-1])
        leaves = nxt
    return leaves[0]


def round_to_integers(poly: CPoly) -> tuple[list[int], float]:
    """Nearest-integer coefficients and the worst rounding residual."""
    out = []
    residual = 0.0
    for c in poly.coeffs:
        n = int(to_int(c.re, RND))
        diff = abs(to_float(mpf_sub(c.re, from_int(n), c.prec, RND), strict=False))
        residual = max(residual, diff, abs(to_float(c.im, strict=False)))
        out.append(n)
    return out, residual


def check_integrality_conditions(D, p1: int, p2: int) -> bool:
    """Whether H has integer coefficients for this (D, p1, p2).

    Only the distinct-odd-prime case is supported; the p1 = p2 and p = 2
    branches report False.
    """
    try:
        disc = D if isinstance(D, Discriminant) else Discriminant(int(D))
    except Exception:
        return False
    if p1 == p2 or p1 == 2 or p2 == 2:
        return False
    if not (is_probable_prime(p1) and is_probable_prime(p2)):
        return False
    if legendre(disc.D, p1) == -1 or legendre(disc.D, p2) == -1:
        return False
    if disc.f % p1 == 0 or disc.f % p2 == 0:
        return False
    return True


def initial_precision(system: NSystem, p1: int, p2: int, s: int) -> int:
    """Height heuristic: the singular values have log |w^s| of about
    s(p1-1)(p2-1) pi sqrt|D| / (24 N A_i)."""
    d = system.D.D
    h = len(system.forms)
    inv_a = sum(1.0 / f.a for f in system.forms)
    scale = 24.0 * system.N / ((p1 - 1) * (p2 - 1))
    est = s * math.pi * math.sqrt(-d) * inv_a / math.log(2.0) / scale
    return 64 + math.ceil(est) + 16 * h


def _expand(system: NSystem, p1: int, p2: int, prec: int) -> tuple[list[int], float, float]:
    # alpha gets extra bits so its own rounding stays below the certified bounds
    values = [w_pow_s_with_err(f.alpha(prec + 128), p1, p2, prec) for f in system.forms]
    tree = product_tree(values, prec + 32)
    ints, residual = round_to_integers(tree)
    return ints, residual, 2.0 ** min(tree.err, 1023.0)


def compute_class_polynomial(D, p1: int, p2: int, B: int, *,
                             min_prec: int = 64,
                             max_prec: int = MAX_PRECISION) -> ClassPolynomial:
    """H_{B,N} as an exact integer polynomial (adaptive precision)."""
    disc = D if isinstance(D, Discriminant) else Discriminant(int(D))
    if not check_integrality_conditions(disc, p1, p2):
        raise ConditionsViolated(f"(D, p1, p2) = ({disc.D}, {p1}, {p2}) unsupported")
    N = p1 * p2
    if B % (2 * N) not in b_candidates(disc, N):
        raise InvalidB(f"B = {B} is not a square root of D mod 4N")
    s = s_exponent(p1, p2)
    system = build_nsystem(disc, N, B % (2 * N))
    prec = max(initial_precision(system, p1, p2, s), min_prec, 64)
    for _ in range(MAX_DOUBLINGS + 1):
        ints, residual, cert = _expand(system, p1, p2, prec)
        if residual < RESIDUAL_LIMIT and cert < RESIDUAL_LIMIT:
            if ints[-1] != 1:
                raise PrecisionExhausted("product expansion is not monic")
            return ClassPolynomial(disc, p1, p2, s, B % (2 * N), tuple(ints))
        prec *= 2
        if prec > max_prec:
            break
    raise PrecisionExhausted(
        f"class polynomial for D = {disc.D}, B = {B} did not stabilize")


def involution_transform(H: ClassPolynomial) -> ClassPolynomial:
    """The companion polynomial H_{B',N}: reverse the coefficients, twist by
    (p1|p2)^s, and divide by the constant term."""
    if legendre(H.D.D, H.p1) != 1 or legendre(H.D.D, H.p2) != 1:
        raise ConditionsViolated("transform needs (D|p1) = (D|p2) = 1")
    a0 = H.coeffs[0]
    if a0 == 0:
        raise ZeroConstantTerm("constant term vanishes")
    eps = legendre(H.p1, H.p2) ** H.s
    h = H.degree
    out = []
    for j in range(h + 1):
        num = H.coeffs[h - j] * (eps ** ((h - j) % 2))
        if num % a0:
            raise ConditionsViolated("transform is not integral")
        out.append(num // a0)
    n2 = 2 * H.p1 * H.p2
    bp = crt_pair(H.B % H.p1, H.p1, (-H.B) % H.p2, H.p2)
    bp = crt_pair(bp, H.p1 * H.p2, H.B % 2, 2) % n2
    return ClassPolynomial(H.D, H.p1, H.p2, H.s, bp, tuple(out))


def count_distinct_class_polynomials(D, p1: int, p2: int) -> int:
    """Number of distinct H_{B,N} over all admissible B (is 1 or 2)."""
    disc = D if isinstance(D, Discriminant) else Discriminant(int(D))
    if not check_integrality_conditions(disc, p1, p2):
        raise ConditionsViolated(f"(D, p1, p2) = ({disc.D}, {p1}, {p2}) unsupported")
    N = p1 * p2
    cands = b_candidates(disc, N)
    reps = sorted({min(b, (2 * N - b) % (2 * N)) for b in cands})
    polys = {compute_class_polynomial(disc, p1, p2, b).coeffs for b in reps}
    count = len(polys)
    l1, l2 = legendre(disc.D, p1), legendre(disc.D, p2)
    if l1 == 1 and l2 == 1:
        assert count in (1, 2)
    elif (l1 == 1 and l2 == 0) or (l1 == 0 and l2 == 1):
        assert count == 1
    return count
