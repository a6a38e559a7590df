"""Small number-theory helpers: Jacobi symbol, Miller-Rabin, prime sampling."""

import math

_SMALL_PRIMES = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
    151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229,
    233, 239, 241, 251,
]

MILLER_RABIN_ROUNDS = 64


def jacobi(a, n):
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or not n & 1:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while not a & 1:
            a >>= 1
            if n & 7 in (3, 5):
                result = -result
        a, n = n, a
        if a & 3 == 3 and n & 3 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a, p):
    """Square root of a quadratic residue modulo a prime p = 3 (mod 4)."""
    if p & 3 != 3:
        raise ValueError("only primes congruent to 3 mod 4 are supported")
    r = pow(a, (p + 1) >> 2, p)
    if r * r % p != a % p:
        raise ValueError("not a quadratic residue")
    return r


def is_probable_prime(n, rng, rounds=MILLER_RABIN_ROUNDS):
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(bits, rng):
    """Uniformly chosen probable prime with exactly ``bits`` bits."""
    if bits < 3:
        raise ValueError("need at least 3 bits")
    while True:
        candidate = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_probable_prime(candidate, rng):
            return candidate


def lcm(a, b):
    return a * b // math.gcd(a, b)
