import random

import pytest

from etacm.atkin import (
    Con1Solution,
    Wn2Solution,
    is_multiple_root_case,
    multiple_root_condition,
    wn_squared_fixes_class,
)
from etacm.errors import ConditionsViolated, InvalidB
from etacm.ffield import FpPolynomial, has_multiple_root, roots_mod_l
from etacm.classpoly import compute_class_polynomial
from etacm.intpoly import divmod_monic
from etacm.modpoly import discriminant_in_j, evaluate_in_j_mod_l
from support import split_prime, valid_triples, pick_b


class TestMultipleRootCondition:
    def test_worked_example_witness(self):
        assert multiple_root_condition(-56, 39, 10) == Con1Solution(10, 1)

    def test_companion_residue_has_none(self):
        assert multiple_root_condition(-56, 39, 16) is None

    def test_bound_case(self):
        # valid congruence with D <= -4N forces emptiness (D = B^2 - 4Nk)
        D = 10 * 10 - 4 * 39 * 5  # -680 < -156
        assert multiple_root_condition(D, 39, 10) is None

    def test_invalid_b(self):
        with pytest.raises(InvalidB):
            multiple_root_condition(-56, 39, 11)

    def test_witness_satisfies_equations_exactly(self):
        rng = random.Random(55)
        found = 0
        while found < 25:
            N = rng.choice([15, 21, 35, 39, 65])
            B = rng.randrange(2 * N)
            k = rng.randint(1, max(1, (B * B + 4 * N - 1) // (4 * N)))
            D = B * B - 4 * N * k
            if D >= 0:
                continue
            sol = multiple_root_condition(D, N, B)
            if sol is None:
                continue
            assert sol.u * sol.u - D * sol.v * sol.v == 4 * N
            assert (sol.u - B * sol.v) % (2 * N) == 0
            found += 1

    def test_vacuous_below_minus_four_n(self):
        # Cor 4.4: no solutions whenever D <= -4N (10^4 random valid triples)
        rng = random.Random(4040)
        for _ in range(10**4):
            N = rng.choice([15, 21, 33, 35, 39, 55, 65, 91])
            B = rng.randrange(2 * N)
            k = rng.randint(N + 1, 40 * N)  # D = B^2 - 4Nk <= -4N guaranteed
            D = B * B - 4 * N * k
            if D > -4 * N:
                continue
            assert multiple_root_condition(D, N, B) is None, (D, N, B)


class TestWnSquared:
    def test_worked_example_case(self):
        sol = wn_squared_fixes_class(-56, 39, 10)
        assert sol == Wn2Solution(22, 10)
        assert sol.X ** 2 - (-56) * sol.Y ** 2 == 4 * 39 ** 2
        assert (sol.X - 10 * sol.Y) % 78 == 0
        t = (sol.X - 10 * sol.Y) // 78
        assert (t * t - 1) % sol.Y == 0

    def test_consistency_with_wn_fixing(self):
        # W_N ~ 1 forces W_N^2 ~ 1: report only, per the group-theory argument
        inconsistent = 0
        for (D, N, B) in [(-56, 39, 10), (-56, 39, 68), (-11, 15, 7), (-404, 39, 62)]:
            try:
                first = multiple_root_condition(D, N, B)
            except InvalidB:
                continue
            if first is not None and wn_squared_fixes_class(D, N, B) is None:
                inconsistent += 1
        print(f"note: {inconsistent} instances where W_N fixes but W_N^2 witness missing")

    def test_bound_forces_none(self):
        # 4N^2 / |D| < 1 leaves no nonzero Y
        D = 10 * 10 - 4 * 39 * 40  # -6140, below -4N^2 = -6084
        assert wn_squared_fixes_class(D, 39, 10) is None

    def test_witness_equations_random(self):
        rng = random.Random(77)
        found = 0
        while found < 10:
            N = rng.choice([15, 21, 35, 39])
            B = rng.randrange(2 * N)
            k = rng.randint(1, 4 * N)
            D = B * B - 4 * N * k
            if D >= 0:
                continue
            sol = wn_squared_fixes_class(D, N, B)
            if sol is None:
                continue
            assert sol.Y != 0
            assert sol.X ** 2 - D * sol.Y ** 2 == 4 * N * N
            assert (sol.X - B * sol.Y) % (2 * N) == 0
            found += 1


class TestIsMultipleRootCase:
    def test_worked_example_true_case(self):
        flag, witness = is_multiple_root_case(-56, 3, 13, 10)
        assert flag and witness == Con1Solution(10, 1)

    def test_worked_example_false_case(self):
        flag, witness = is_multiple_root_case(-56, 3, 13, 16)
        assert not flag and witness is None

    def test_rejects_unsupported_triple(self):
        with pytest.raises(ConditionsViolated):
            is_multiple_root_case(-8, 3, 13, 2)

    def test_agrees_with_discriminant_divisibility(self, phi313_embedded):
        disc_poly = discriminant_in_j(phi313_embedded)
        for b in (10, 16, 62, 68):
            h = compute_class_polynomial(-56, 3, 13, b)
            _, rem = divmod_monic(disc_poly, list(h.coeffs))
            divides = rem == []
            assert is_multiple_root_case(-56, 3, 13, b)[0] == divides

    def test_all_or_none_across_roots(self, phi_pool):
        # multiplicity of the J-slice is an all-or-none property across the
        # roots of H mod l (10 instances, mixed multiple/simple)
        rng = random.Random(303)
        pairs = [(3, 5), (3, 7), (5, 7), (3, 13)]
        done = 0
        while done < 10:
            p1, p2 = pairs[done % len(pairs)]
            (D, _, _), = valid_triples(rng, 1, 3, 3000, pool=[(p1, p2)])
            b = pick_b(rng, D, p1, p2)
            ell = split_prime(D, lmin=max(5, -D // 4), avoid=(p1, p2))
            if ell is None:
                continue
            H = compute_class_polynomial(D, p1, p2, b)
            hq = FpPolynomial.make(H.coeffs, ell)
            if hq.degree != H.degree:
                continue
            roots = roots_mod_l(hq)
            if not roots:
                continue
            phi = phi_pool(p1, p2)
            flags = set()
            for wbar in roots:
                slice_ = evaluate_in_j_mod_l(phi, wbar, ell)
                if slice_.degree < 1:
                    break
                flags.add(has_multiple_root(slice_))
            else:
                assert len(flags) == 1, (D, p1, p2, b, ell, flags)
                done += 1
