"""Evaluation of the Dedekind eta function, the Klein J-invariant, and the
double eta-quotient at upper half-plane points, with certified error bounds.

Strategy: every evaluation first reduces its argument to the classical
fundamental domain (|Re| <= 1/2, |z| >= 1), where the sparse
pentagonal-number series for eta and the sigma_3 series for E4 converge at
a guaranteed >= 7.8 bits per exponent unit.  The value at the original point
is recovered through the eta transformation formula (unimodular matrix,
Jacobi-symbol sign times a 24th root of unity times sqrt(cz+d)).

Fractional powers of q are never taken through complex roots: q^{1/24} is
computed as exp(pi*i*z/12) directly from z, which fixes the branch once and
for all; q itself is its 24th power.

Each evaluator tracks one accumulated absolute-error bound (as a log2
exponent) per value and raises PrecisionExhausted if the requested bound
cannot be certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

from mpmath.libmp import (
    fone,
    fzero,
    from_int,
    from_rational,
    mpc_div,
    mpc_mul_int,
    mpc_pow_int,
    mpf_cos_sin_pi,
    mpf_div,
    mpf_exp,
    mpf_lt,
    mpf_mul,
    mpf_neg,
    mpf_pi,
    mpf_shift,
    mpf_sub,
    to_float,
    to_int,
)

from .apcomplex import RND, ApComplex, UpperHalfPoint
from .arith import jacobi
from .errors import PreconditionError, PrecisionExhausted

# log2 of the worst-case |q| on the fundamental domain: 2*pi*(sqrt(3)/2)/ln 2
_BITS_PER_Q_POWER = 2.0 * math.pi * (math.sqrt(3.0) / 2.0) / math.log(2.0)

Matrix = tuple[int, int, int, int]

IDENTITY: Matrix = (1, 0, 0, 1)


def apply_moebius(m: Matrix, z: ApComplex, prec: int | None = None) -> ApComplex:
    """(a*z + b) / (c*z + d) at the given working precision."""
    a, b, c, d = m
    p = prec if prec is not None else z.prec
    zz = z.at_prec(p)
    num = zz * a + b
    den = zz * c + d
    return num / den


def _series_terms(wp: int, im_bits: float) -> int:
    """Largest pentagonal index K needed so the tail is below 2^-(wp+4)."""
    k = int(math.sqrt(2.0 * (wp + 8) / (3.0 * im_bits))) + 2
    while (k * (3 * k - 1)) // 2 * im_bits < wp + 8:
        k += 1
    return k


def eta_guard_bits(prec: int) -> int:
    """Guard bits: 32 + ceil(log2(number of series terms)) at worst-case decay."""
    k = _series_terms(prec, _BITS_PER_Q_POWER)
    return 32 + max(1, math.ceil(math.log2(2 * k + 1)))


def reduce_to_fundamental_domain(z: UpperHalfPoint) -> tuple[UpperHalfPoint, Matrix]:
    """Unimodular M and z' = Mz with |Re z'| <= 1/2, |z'| >= 1 - 2^(-prec/2)."""
    zred, m = _reduce(z.value, z.value.prec)
    return UpperHalfPoint(zred), m


def _reduce(z: ApComplex, wp: int) -> tuple[ApComplex, Matrix]:
    a, b, c, d = 1, 0, 0, 1
    zc = z.at_prec(wp)
    thresh = mpf_sub(fone, mpf_shift(fone, -(wp // 2)), wp, RND)
    max_steps = 4 * wp + 1000
    for _ in range(max_steps):
        t = int(to_int(zc.re, RND))
        if t:
            zc = ApComplex(mpf_sub(zc.re, from_int(t), wp, RND), zc.im, wp)
            a, b = a - t * c, b - t * d
        norm2 = zc.abs2_mpf()
        if mpf_lt(norm2, thresh):
            zc = ApComplex(*mpc_div((from_int(-1), fzero), zc.mpc, wp, RND), wp)
            a, b, c, d = -c, -d, a, b
        else:
            break
    else:
        raise PrecisionExhausted("fundamental-domain reduction did not settle")
    if (c, d) != (0, 1):
        zc = apply_moebius((a, b, c, d), z, wp)
    return zc, (a, b, c, d)


@dataclass(frozen=True, slots=True)
class EtaMultiplierData:
    """Decomposition of the eta transformation multiplier for a normalized
    unimodular matrix: epsilon(M) = sign * zeta_24^exponent24."""

    a: int
    b: int
    c: int
    d: int
    gamma: int
    lam: int
    exponent24: int
    sign: int

    def __post_init__(self):
        assert self.a * self.d - self.b * self.c == 1
        assert self.c >= 0 and (self.c > 0 or self.d > 0)
        if self.c == 0:
            assert self.gamma == 1 and self.lam == 1
        else:
            assert self.gamma % 2 and self.gamma << self.lam == self.c
        assert 0 <= self.exponent24 < 24 and self.sign in (-1, 1)

    def value(self, prec: int) -> ApComplex:
        e = from_rational(self.exponent24, 12, prec, RND)
        cos, sin = mpf_cos_sin_pi(e, prec, RND)
        root = ApComplex(cos, sin, prec)
        return root * self.sign


def eta_multiplier(m: Matrix) -> EtaMultiplierData:
    """Multiplier data for eta(Mz) = eps(M) * sqrt(cz+d) * eta(z).

    M is normalized (negated if necessary, which leaves the Moebius action
    unchanged) so that c >= 0, and d > 0 when c = 0.
    """
    a, b, c, d = m
    if a * d - b * c != 1:
        raise PreconditionError(f"matrix {m} is not unimodular")
    if c < 0 or (c == 0 and d < 0):
        a, b, c, d = -a, -b, -c, -d
    if c == 0:
        gamma, lam = 1, 1
    else:
        lam = (c & -c).bit_length() - 1
        gamma = c >> lam
    half = 3 * lam * (a * a - 1)
    assert half % 2 == 0
    e = a * b + c * (d * (1 - a * a) - a) + 3 * gamma * (a - 1) + half // 2
    return EtaMultiplierData(a, b, c, d, gamma, lam, e % 24, jacobi(a, gamma))


def _exp_pi_i_frac(z: ApComplex, den: int, wp: int):
    """exp(pi*i*z/den) as an mpc pair, with |.| = exp(-pi*im/den)."""
    pi = mpf_pi(wp)
    t = mpf_div(z.re, from_int(den), wp, RND)
    cos, sin = mpf_cos_sin_pi(t, wp, RND)
    r = mpf_exp(mpf_neg(mpf_div(mpf_mul(pi, z.im, wp, RND), from_int(den), wp, RND)), wp, RND)
    return (mpf_mul(r, cos, wp, RND), mpf_mul(r, sin, wp, RND))


def _eta_series(zred: ApComplex, wp: int) -> tuple[ApComplex, float]:
    """eta at a fundamental-domain point by the pentagonal-number series.

    Returns (value, log2 absolute error bound).
    """
    w24 = ApComplex(*_exp_pi_i_frac(zred, 12, wp), wp)
    q = ApComplex(*mpc_pow_int(w24.mpc, 24, wp, RND), wp)
    im_bits = 2.0 * math.pi * to_float(zred.im, strict=False) / math.log(2.0)
    kmax = _series_terms(wp, im_bits)

    one = ApComplex.make(1, 0, wp)
    total = one
    a_pow = q                     # q^{g_k},  g_k = k(3k-1)/2
    qk = q                        # q^k
    q3 = ApComplex(*mpc_pow_int(q.mpc, 3, wp, RND), wp)
    qstep = ApComplex(*mpc_pow_int(q.mpc, 4, wp, RND), wp)   # q^{3k+1}
    sign = -1
    for _ in range(1, kmax + 1):
        term = a_pow + a_pow * qk
        total = total + term * sign
        sign = -sign
        a_pow = a_pow * qstep
        qstep = qstep * q3
        qk = qk * q
    value = w24 * total
    # tail < 2^-(wp+6); rounding: ~6 ops/term on values bounded by 2
    err = -wp + 1.5 + math.log2(6 * kmax + 8)
    return value, err


def _eta_at(z: ApComplex, wp: int) -> tuple[ApComplex, float]:
    """eta at an arbitrary point via reduction; (value, log2 error bound)."""
    zred, m = _reduce(z, wp)
    series, err = _eta_series(zred, wp)
    if m == IDENTITY:
        return series, err
    mult = eta_multiplier(m)
    a, b, c, d = mult.a, mult.b, mult.c, mult.d
    root = (z.at_prec(wp) * c + d).sqrt()
    denom = mult.value(wp) * root
    value = series / denom
    # |eps| = 1 so |denom| = |sqrt(cz+d)|; the division keeps the relative
    # error, plus ulps from the root, the unit and the division itself
    rel = max(err - series.mag() + 2.0, -wp + 3.0)
    err_out = value.mag() + rel + 2.0
    return value, err_out


def eta(z: UpperHalfPoint, prec: int) -> ApComplex:
    """Dedekind eta, absolute error certified below 2^(guard - prec)."""
    if prec < 64:
        raise PreconditionError("prec must be at least 64")
    guard = eta_guard_bits(prec)
    wp = prec + guard
    value, err = _eta_at(z.value, wp)
    if err > guard - prec:
        raise PrecisionExhausted(f"eta error bound 2^{err:.0f} exceeds target")
    return value


def _sigma3_table(n: int) -> list[int]:
    sig = [0] * (n + 1)
    for d in range(1, n + 1):
        cube = d * d * d
        for m in range(d, n + 1, d):
            sig[m] += cube
    return sig


def _e4_series(q: ApComplex, wp: int, im_bits: float) -> tuple[ApComplex, float]:
    """Eisenstein E4(q) = 1 + 240 sum sigma_3(n) q^n; (value, log2 error)."""
    n = max(4, int((wp + 30) / im_bits) + 2)
    while n * im_bits - math.log2(240.0) - 4 * math.log2(n) < wp + 6:
        n += 1
    sig = _sigma3_table(n)
    total = ApComplex.make(1, 0, wp)
    qn = q
    for k in range(1, n + 1):
        total = total + ApComplex(*mpc_mul_int(qn.mpc, 240 * sig[k], wp, RND), wp)
        if k < n:
            qn = qn * q
    err = -wp - 4.0 + math.log2(3 * n + 8)
    return total, err


def j_invariant(z: UpperHalfPoint, prec: int) -> ApComplex:
    """Klein J (J(i) = 1728), via E4^3 / eta^24 at the reduced point."""
    if prec < 64:
        raise PreconditionError("prec must be at least 64")
    guard = eta_guard_bits(prec)
    zred0, _ = _reduce(z.value, z.value.prec)
    im_val = to_float(zred0.im, strict=False)
    boost = max(0, math.ceil(2.0 * math.pi * im_val / math.log(2.0))) + 32
    wp = prec + guard + boost
    zred, _ = _reduce(z.value, wp)
    im_bits = 2.0 * math.pi * to_float(zred.im, strict=False) / math.log(2.0)

    eta_val, eta_err = _eta_series(zred, wp)
    q = ApComplex(*mpc_pow_int(ApComplex(*_exp_pi_i_frac(zred, 12, wp), wp).mpc, 24, wp, RND), wp)
    e4, e4_err = _e4_series(q, wp, im_bits)

    num = e4 ** 3
    den = eta_val ** 24
    value = num / den
    # d(num) <= 3(|E4|+eps)^2 eps;  den relative error <= ~24 * eta rel err
    num_err = math.log2(3.0) + 2 * (e4.mag() + 1) + e4_err
    eta_rel = eta_err - eta_val.mag() + 2
    den_rel = math.log2(24.0) + eta_rel
    err = max(num_err - den.mag() + 1, value.mag() + den_rel, value.mag() - wp + 4) + 2
    if err > guard - prec:
        raise PrecisionExhausted(f"J error bound 2^{err:.0f} exceeds target")
    return value


def s_exponent(p1: int, p2: int) -> int:
    """Canonical power s = 24 / gcd(24, (p1-1)(p2-1))."""
    return 24 // gcd(24, (p1 - 1) * (p2 - 1))


def _check_quotient_primes(p1: int, p2: int):
    from .arith import is_probable_prime

    if p1 == p2:
        raise PreconditionError("equal primes are unsupported")
    if p1 == 2 or p2 == 2:
        raise PreconditionError("p = 2 is unsupported")
    if not (is_probable_prime(p1) and is_probable_prime(p2)):
        raise PreconditionError(f"{p1}, {p2} must both be prime")


def _w_at(z: ApComplex, p1: int, p2: int, wp: int) -> tuple[ApComplex, float]:
    """Double eta quotient eta(z/p1)eta(z/p2)/(eta(z)eta(z/(p1 p2)))."""
    vals = []
    rel = -float(wp)
    for den in (p1, p2, 1, p1 * p2):
        v, e = _eta_at(z / den if den != 1 else z, wp)
        vals.append(v)
        rel = max(rel, e - v.mag() + 2.0)
    value = (vals[0] * vals[1]) / (vals[2] * vals[3])
    rel_out = rel + math.log2(8.0)
    return value, value.mag() + rel_out


def double_eta_quotient(z: UpperHalfPoint, p1: int, p2: int, prec: int) -> ApComplex:
    _check_quotient_primes(p1, p2)
    guard = eta_guard_bits(prec)
    boost = 0
    for _ in range(3):
        wp = prec + guard + 16 + boost
        value, err = _w_at(z.value, p1, p2, wp)
        if err <= guard - prec:
            return value
        # magnitude pushes the absolute bound up; buy that many extra bits
        boost = max(boost + 32, int(value.mag()) + 32)
    raise PrecisionExhausted(f"quotient error bound 2^{err:.0f} exceeds target")


def w_pow_s(z: UpperHalfPoint, p1: int, p2: int, prec: int) -> ApComplex:
    value, err = w_pow_s_with_err(z, p1, p2, prec)
    return value


def w_pow_s_with_err(z: UpperHalfPoint, p1: int, p2: int, prec: int) -> tuple[ApComplex, float]:
    """(w^s, log2 absolute error bound); the workhorse for class polynomials."""
    _check_quotient_primes(p1, p2)
    s = s_exponent(p1, p2)
    guard = eta_guard_bits(prec)
    boost = 0
    for _ in range(3):
        wp = prec + guard + 16 + 4 * s + boost
        w, err = _w_at(z.value, p1, p2, wp)
        rel = err - w.mag()
        value = w ** s
        err_out = value.mag() + rel + math.log2(float(s)) + 2
        if err_out <= guard - prec:
            return value, err_out
        boost = max(boost + 32, int(value.mag()) + 32)
    raise PrecisionExhausted(f"w^s error bound 2^{err_out:.0f} exceeds target")
