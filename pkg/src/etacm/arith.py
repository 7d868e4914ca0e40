"""Elementary integer arithmetic: Jacobi/Legendre symbols, primality, CRT."""

from math import gcd, isqrt

from .errors import PreconditionError

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs odd positive n")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p, via Euler's criterion.

    Returns 0 when p | a.
    """
    if p == 2 or p < 2:
        raise ValueError("odd prime required")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin, deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Solve x = r1 mod m1, x = r2 mod m2 for coprime moduli."""
    if gcd(m1, m2) != 1:
        raise PreconditionError("crt_pair needs coprime moduli")
    inv = pow(m1, -1, m2)
    return (r1 + (r2 - r1) * inv % m2 * m1) % (m1 * m2)


def squarefree_kernel(n: int) -> tuple[int, int]:
    """Return (squarefree part k, cofactor f) with n = k * f**2, n > 0."""
    if n <= 0:
        raise ValueError("positive n required")
    k, f = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            f *= d ** (e // 2)
            if e % 2:
                k *= d
        d += 1 if d == 2 else 2
    return k * n, f


def fundamental_parts(D: int) -> tuple[int, int]:
    """Split a discriminant D < 0 into (d_K, f) with D = f**2 * d_K, d_K fundamental."""
    if D >= 0 or D % 4 not in (0, 1):
        raise PreconditionError(f"not a negative discriminant: {D}")
    k, f = squarefree_kernel(-D)
    m = -k  # squarefree negative part
    if m % 4 == 1:
        d_k = m
    else:
        d_k = 4 * m
        if f % 2:
            raise PreconditionError(f"not a discriminant: {D}")
        f //= 2
    assert f * f * d_k == D
    return d_k, f
