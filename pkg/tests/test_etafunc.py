import math
import random

import mpmath
import pytest

from etacm.apcomplex import ApComplex, UpperHalfPoint, abs_diff
from etacm.errors import PreconditionError
from etacm.etafunc import (
    apply_moebius,
    double_eta_quotient,
    eta,
    eta_multiplier,
    j_invariant,
    reduce_to_fundamental_domain,
    s_exponent,
    w_pow_s,
)
from oracles import eta_oracle, j_oracle

# frozen from the independent q-product oracle (and the closed form
# Gamma(1/4) / (2 pi^{3/4}), which agrees to all shown digits)
ETA_AT_I = "0.768225422326056659002594179576180644517866914"


def to_mp(v: ApComplex, dps: int = 50) -> mpmath.mpc:
    with mpmath.workdps(dps):
        return mpmath.mpc(mpmath.mpf(v.re), mpmath.mpf(v.im))


def rand_sl2(rng: random.Random, length: int = 6, bound: int = 10**6):
    while True:
        a, b, c, d = 1, 0, 0, 1
        for _ in range(length):
            t = rng.randint(-3, 3)
            a, b = a + t * c, b + t * d
            a, b, c, d = -c, -d, a, b
        if rng.random() < 0.5:
            a, b, c, d = -a, -b, -c, -d
        if max(abs(a), abs(b), abs(c), abs(d)) <= bound and (a, b, c, d) != (1, 0, 0, 1):
            return (a, b, c, d)


def rand_fundamental(rng: random.Random, prec: int) -> UpperHalfPoint:
    return UpperHalfPoint.make(rng.uniform(-0.5, 0.5), rng.uniform(0.87, 3.0), prec)


class TestReduction:
    def test_already_reduced_is_identity(self):
        z = UpperHalfPoint.make(0.3, 2.0, 128)
        zr, m = reduce_to_fundamental_domain(z)
        assert m == (1, 0, 0, 1)
        assert zr.to_complex() == z.to_complex()

    def test_integer_translation(self):
        z = UpperHalfPoint.make(5.3, 2.0, 128)
        zr, m = reduce_to_fundamental_domain(z)
        assert m == (1, -5, 0, 1)
        assert abs(zr.to_complex() - (5.3 - 5 + 2j)) < 1e-30

    def test_small_point_lands_in_domain(self):
        z = UpperHalfPoint.make(0.1, 0.1, 192)
        zr, m = reduce_to_fundamental_domain(z)
        c = zr.to_complex()
        assert abs(c) >= 1 - 2.0 ** (-96)
        assert abs(c.real) <= 0.5 + 1e-30
        assert c.imag >= 0.1
        assert m[0] * m[3] - m[1] * m[2] == 1
        # z' really is M z
        assert abs(apply_moebius(m, z.value).to_complex() - c) < 1e-40

    def test_random_points_postconditions(self):
        rng = random.Random(101)
        for _ in range(50):
            z = UpperHalfPoint.make(rng.uniform(-30, 30), rng.uniform(0.005, 5), 160)
            zr, m = reduce_to_fundamental_domain(z)
            a, b, c, d = m
            assert a * d - b * c == 1
            w = zr.to_complex()
            assert abs(w.real) <= 0.5 + 1e-30
            assert abs(w) >= 1 - 2.0 ** (-80)
            assert w.imag >= z.to_complex().imag - 1e-12


class TestMultiplier:
    def test_translation(self):
        m = eta_multiplier((1, 1, 0, 1))
        assert (m.exponent24, m.sign) == (1, 1)

    def test_identity(self):
        m = eta_multiplier((1, 0, 0, 1))
        assert (m.exponent24, m.sign) == (0, 1)
        assert m.value(96).to_complex() == 1

    def test_inversion_matches_classical_formula(self):
        m = eta_multiplier((0, -1, 1, 0))
        val = m.value(128).to_complex()
        want = complex(math.cos(-math.pi / 4), math.sin(-math.pi / 4))
        assert abs(val - want) < 1e-15
        assert m.exponent24 == 21  # zeta_24^{-3}

    def test_rejects_non_unimodular(self):
        with pytest.raises(PreconditionError):
            eta_multiplier((1, 1, 1, 0))

    def test_negation_is_normalized_away(self):
        rng = random.Random(7)
        for _ in range(20):
            m = rand_sl2(rng)
            neg = tuple(-x for x in m)
            assert eta_multiplier(m) == eta_multiplier(neg)


class TestEta:
    def test_value_at_i_matches_oracle(self):
        v = eta(UpperHalfPoint.make(0, 1, 256), 256)
        with mpmath.workdps(60):
            want = mpmath.mpf(ETA_AT_I)
            got = to_mp(v, 60)
            assert abs(got.real - want) < mpmath.mpf(10) ** -38
            assert abs(got.imag) < mpmath.mpf(10) ** -38

    def test_ratio_to_q24_tends_to_one(self):
        z = UpperHalfPoint.make(0, 100, 256)
        v = to_mp(eta(z, 256), 90)
        with mpmath.workdps(90):
            q24 = mpmath.exp(2j * mpmath.pi * mpmath.mpc(0, 100) / 24)
            assert abs(v / q24 - 1) < mpmath.mpf(2) ** -200

    def test_translation_identity(self):
        rng = random.Random(3)
        prec = 160
        for _ in range(10):
            z = rand_fundamental(rng, prec + 64)
            z1 = UpperHalfPoint(z.value + 1)
            lhs = eta(z1, prec)
            zeta24 = eta_multiplier((1, 1, 0, 1)).value(prec + 64)
            rhs = zeta24 * eta(z, prec)
            assert abs_diff(lhs, rhs) <= -prec + 8

    def test_matches_oracle_at_random_points(self):
        rng = random.Random(17)
        for _ in range(15):
            zc = complex(rng.uniform(-2, 2), rng.uniform(0.4, 2.5))
            v = to_mp(eta(UpperHalfPoint.make(zc.real, zc.imag, 192), 192), 60)
            want = eta_oracle(zc, 60)
            with mpmath.workdps(60):
                assert abs(v - want) < mpmath.mpf(2) ** -150

    def test_transformation_formula(self):
        rng = random.Random(42)
        prec = 160
        hp = prec + 64
        for _ in range(200):
            m = rand_sl2(rng)
            z = rand_fundamental(rng, hp)
            lhs = eta(UpperHalfPoint(apply_moebius(m, z.value, hp)), prec)
            mult = eta_multiplier(m)
            root = (z.value * mult.c + mult.d).sqrt()
            assert root.to_complex().real > 0  # principal branch
            rhs = mult.value(hp) * root * eta(z, prec)
            assert abs_diff(lhs, rhs) <= -prec + 12

    def test_rejects_low_precision(self):
        with pytest.raises(PreconditionError):
            eta(UpperHalfPoint.make(0, 1, 64), 32)

    def test_doubling_precision_shrinks_residual(self):
        # convergence sanity: doubling prec gains at least 2^(prec/2)
        z = UpperHalfPoint.make(0.21, 1.3, 1024)
        m = (3, -1, 7, -2)
        mult = eta_multiplier(m)
        root = (z.value * mult.c + mult.d).sqrt()
        res = {}
        for prec in (128, 256):
            lhs = eta(UpperHalfPoint(apply_moebius(m, z.value, 1024)), prec)
            rhs = mult.value(1024) * root * eta(z, prec)
            res[prec] = abs_diff(lhs, rhs)
        if res[256] != float("-inf"):
            assert res[128] - res[256] >= 64


class TestJInvariant:
    def test_special_points(self):
        with mpmath.workdps(70):
            ji = to_mp(j_invariant(UpperHalfPoint.make(0, 1, 192), 192), 70)
            assert abs(ji - 1728) < mpmath.mpf(2) ** -150
            rho = UpperHalfPoint.make(0.5, math.sqrt(3) / 2, 192)
            # the float sqrt puts rho only within 1e-16 of the corner, and J
            # moves at unit speed there
            assert abs(to_mp(j_invariant(rho, 192), 70)) < mpmath.mpf(10) ** -12

    def test_j_at_2i(self):
        v = j_invariant(UpperHalfPoint.make(0, 2, 192), 192)
        with mpmath.workdps(70):
            assert abs(to_mp(v, 70) - 287496) < mpmath.mpf(2) ** -140  # 66^3

    def test_matches_theta_oracle(self):
        rng = random.Random(23)
        for _ in range(10):
            zc = complex(rng.uniform(-1.5, 1.5), rng.uniform(0.5, 2.0))
            v = to_mp(j_invariant(UpperHalfPoint.make(zc.real, zc.imag, 192), 192), 60)
            want = j_oracle(zc, 60)
            with mpmath.workdps(60):
                rel = abs(v - want) / max(1, abs(want))
                assert rel < mpmath.mpf(2) ** -150

    def test_unimodular_invariance(self):
        # companion of the 1000-sample transformation suite: J must agree
        # across the same kind of unimodular moves
        rng = random.Random(5)
        prec = 160
        for _ in range(1000):
            m = rand_sl2(rng)
            z = rand_fundamental(rng, prec + 64)
            a = j_invariant(z, prec)
            b = j_invariant(UpperHalfPoint(apply_moebius(m, z.value, prec + 64)), prec)
            tol = max(a.mag(), 0) - prec + 12
            assert abs_diff(a, b) <= tol

    def test_extreme_small_imaginary_part(self):
        # eta decays like exp(-pi/(12 y)) towards the real axis; the
        # reduction path must survive y = 1e-8 and hit the right magnitude
        z = UpperHalfPoint.make(0.0, 1e-8, 192)
        v = eta(z, 192)
        y = 1e-8
        expected_log2 = (-math.pi / (12 * y) - 0.5 * math.log(y)) / math.log(2)
        assert abs(v.mag() - expected_log2) < 64  # mag is coarse but huge-scale

    def test_deep_precision_against_oracle(self):
        # one spot check far beyond the bulk tolerance: 1024-bit evaluation
        # against the independent q-product at 320 digits
        z = complex(0.34375, 1.15625)
        v = eta(UpperHalfPoint.make(z.real, z.imag, 1024), 1024)
        with mpmath.workdps(340):
            want = eta_oracle(z, 340)
            got = to_mp(v, 340)
            assert abs(got - want) < mpmath.mpf(2) ** -1000


class TestDoubleEtaQuotient:
    def test_s_exponents(self):
        assert s_exponent(3, 13) == 1
        assert s_exponent(3, 5) == 3
        assert s_exponent(5, 7) == 1

    def test_atkin_lehner_invariance(self):
        rng = random.Random(31)
        prec = 160
        for (p1, p2) in [(3, 5), (3, 13), (5, 7)]:
            N = p1 * p2
            for _ in range(5):
                z = rand_fundamental(rng, prec + 64)
                wn = UpperHalfPoint((ApComplex.make(-N, 0, prec + 64)) / z.value)
                a = double_eta_quotient(z, p1, p2, prec)
                b = double_eta_quotient(wn, p1, p2, prec)
                assert abs_diff(a, b) <= max(a.mag(), 0) - prec + 8

    def test_w_p1_involution(self):
        # w^s(W_{p1} z) * w^s(z) = (p1|p2)^s  with p1 x + p2 y = 1, y < 0 odd
        from etacm.arith import legendre

        rng = random.Random(13)
        prec = 192
        for (p1, p2) in [(3, 13), (3, 5), (5, 7)]:
            N = p1 * p2
            y = -1
            while (1 - p2 * y) % p1 or y % 2 == 0:
                y -= 1
            x = (1 - p2 * y) // p1
            m = (-p1, N, -y, -p1 * x)
            s = s_exponent(p1, p2)
            eps = legendre(p1, p2) ** s
            for _ in range(4):
                z = rand_fundamental(rng, prec + 64)
                wz = UpperHalfPoint(apply_moebius(m, z.value, prec + 64))
                prod = w_pow_s(wz, p1, p2, prec) * w_pow_s(z, p1, p2, prec)
                assert abs_diff(prod, ApComplex.make(eps, 0, prec)) <= -prec + 16

    def test_worked_example_singular_value(self):
        # w_{3,13}((-10 + sqrt(-56))/2) is a real root of X^4-2X^3-X^2+2X-1
        z = UpperHalfPoint.from_form(1, 10, -56, 320)
        w = to_mp(w_pow_s(z, 3, 13, 256), 70)
        with mpmath.workdps(70):
            val = mpmath.polyval([1, -2, -1, 2, -1], w)
            assert abs(val) < mpmath.mpf(2) ** -230
            assert abs(w.imag) < mpmath.mpf(2) ** -230

    def test_rejects_bad_primes(self):
        z = UpperHalfPoint.make(0, 1, 128)
        for (p1, p2) in [(3, 3), (2, 13), (9, 5)]:
            with pytest.raises(PreconditionError):
                double_eta_quotient(z, p1, p2, 128)
