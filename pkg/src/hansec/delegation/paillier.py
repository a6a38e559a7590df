"""Paillier additive homomorphic encryption with g = n + 1.

Encryption is c = g^m * r^n mod n^2; with g = n + 1 the first factor is just
1 + m*n.  Decryption is m = L(c^lambda mod n^2) * mu mod n with
L(u) = (u - 1) / n.  Multiplying ciphertexts adds plaintexts mod n, and
raising a ciphertext to k multiplies its plaintext by k; neither needs the
private key.
"""

import math
from dataclasses import dataclass

from ..errors import BadRandomness, InvalidKey, MessageTooLarge
from ..group import default_rng
from ..numtheory import is_probable_prime, lcm, random_prime


@dataclass(frozen=True)
class PaillierPublicKey:
    n: int
    g: int

    @property
    def n2(self):
        return self.n * self.n

    @property
    def ciphertext_bytes(self):
        return 2 * ((self.n.bit_length() + 7) // 8)


@dataclass(frozen=True)
class PaillierKeys:
    public: PaillierPublicKey
    lam: int
    mu: int

    @property
    def n(self):
        return self.public.n


def _L(u, n):
    return (u - 1) // n


def paillier_keys_from_primes(p, q, rng=None):
    if p == q:
        raise InvalidKey("p and q must be distinct")
    rng = rng or default_rng()
    for f in (p, q):
        if not is_probable_prime(f, rng):
            raise InvalidKey(f"{f} is not prime")
    n = p * q
    if math.gcd(n, (p - 1) * (q - 1)) != 1:
        raise InvalidKey("gcd(n, (p-1)(q-1)) != 1")
    g = n + 1
    lam = lcm(p - 1, q - 1)
    mu = pow(_L(pow(g, lam, n * n), n), -1, n)
    return PaillierKeys(PaillierPublicKey(n, g), lam, mu)


def paillier_keygen(bits, rng=None):
    """Keys with an n of ``bits`` bits built from two ``bits/2``-bit primes."""
    if bits < 8:
        raise ValueError("modulus must have at least 8 bits")
    rng = rng or default_rng()
    half = bits // 2
    while True:
        p = random_prime(half, rng)
        q = random_prime(bits - half, rng)
        if p == q or (p * q).bit_length() != bits:
            continue
        if math.gcd(p * q, (p - 1) * (q - 1)) == 1:
            return paillier_keys_from_primes(p, q, rng)


def _public(pk):
    return pk.public if isinstance(pk, PaillierKeys) else pk


def paillier_encrypt(m, pk, rng=None, r=None):
    pk = _public(pk)
    n, n2 = pk.n, pk.n2
    if not 0 <= m < n:
        raise MessageTooLarge(f"message must lie in [0, {n})")
    if r is not None:
        if not 0 < r < n or math.gcd(r, n) != 1:
            raise BadRandomness("r must be a unit mod n")
    else:
        rng = rng or default_rng()
        while True:
            r = rng.randrange(1, n)
            if math.gcd(r, n) == 1:
                break
    gm = (1 + m * n) % n2 if pk.g == n + 1 else pow(pk.g, m, n2)
    return gm * pow(r, n, n2) % n2


def paillier_decrypt(c, keys):
    n = keys.public.n
    n2 = n * n
    if not 0 <= c < n2:
        raise MessageTooLarge("ciphertext out of range")
    return _L(pow(c, keys.lam, n2), n) * keys.mu % n


def paillier_add(c1, c2, pk):
    """Homomorphic addition: decrypts to m1 + m2 mod n."""
    return c1 * c2 % _public(pk).n2


def paillier_scalar_mul(c, k, pk):
    """Homomorphic scaling: decrypts to k * m mod n."""
    return pow(c, k, _public(pk).n2)


def encode_ciphertext(c, pk):
    return c.to_bytes(_public(pk).ciphertext_bytes, "big")


def decode_ciphertext(data, pk):
    pk = _public(pk)
    if len(data) != pk.ciphertext_bytes:
        raise MessageTooLarge(f"expected {pk.ciphertext_bytes} bytes")
    c = int.from_bytes(data, "big")
    if c >= pk.n2:
        raise MessageTooLarge("ciphertext out of range")
    return c
