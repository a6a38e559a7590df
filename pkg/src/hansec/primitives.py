"""Hashing, key derivation, MACs, a pedagogical stream cipher and Schnorr signatures.

One hash (SHA-256) is used everywhere, always behind a domain-separation tag
so that hashes computed for different purposes never collide.

The stream cipher is ``keystream = H(K_e || nonce || counter)`` XORed with the
plaintext, followed by an HMAC over nonce and ciphertext (encrypt-then-MAC).
It exists so the suite needs no external cipher and is not a replacement for
an authenticated-encryption standard.
"""

import hashlib
import hmac
from dataclasses import dataclass

from .errors import DegenerateSecret, InvalidElement, KeyMismatch, MalformedElement, MalformedSignature

KEY_BYTES = 32
TAG_BYTES = 32


def hash_parts(domain, *parts):
    """SHA-256 over a domain tag and length-prefixed parts."""
    h = hashlib.sha256()
    h.update(b"hansec/" + domain)
    for part in parts:
        h.update(len(part).to_bytes(4, "big"))
        h.update(part)
    return h.digest()


def hash_to_scalar(G, domain, *parts):
    # 256-bit digest reduced mod q; the bias is negligible for q >= 2^160
    return int.from_bytes(hash_parts(domain, *parts), "big") % G.q


@dataclass(frozen=True)
class DerivedKeys:
    ks: bytes
    ke: bytes
    km: bytes

    def __post_init__(self):
        for k in (self.ks, self.ke, self.km):
            if len(k) != KEY_BYTES:
                raise ValueError("derived keys are 32 bytes each")


def kdf(G, shared, label):
    """Session, encryption and MAC keys from a shared group element and a label."""
    if G.is_identity(shared):
        raise DegenerateSecret("shared secret is the identity element")
    s = G.serialize(shared)
    return DerivedKeys(
        ks=hash_parts(b"kdf", s, label, b"ks"),
        ke=hash_parts(b"kdf", s, label, b"ke"),
        km=hash_parts(b"kdf", s, label, b"km"),
    )


def mac(key, msg):
    return hmac.new(key, msg, hashlib.sha256).digest()


def mac_verify(key, msg, tag):
    return hmac.compare_digest(mac(key, msg), tag)


def _keystream(ke, nonce, length):
    out = bytearray()
    counter = 0
    while len(out) < length:
        out += hash_parts(b"stream", ke, nonce, counter.to_bytes(8, "big"))
        counter += 1
    return bytes(out[:length])


def seal(ke, km, nonce, plaintext):
    ct = bytes(a ^ b for a, b in zip(plaintext, _keystream(ke, nonce, len(plaintext))))
    return ct + mac(km, b"seal" + nonce + ct)


def open_sealed(ke, km, nonce, data):
    """Inverse of :func:`seal`; raises :class:`KeyMismatch` if the tag does not verify."""
    if len(data) < TAG_BYTES:
        raise KeyMismatch("sealed payload too short")
    ct, tag = data[:-TAG_BYTES], data[-TAG_BYTES:]
    if not mac_verify(km, b"seal" + nonce + ct, tag):
        raise KeyMismatch("sealed payload failed authentication")
    return bytes(a ^ b for a, b in zip(ct, _keystream(ke, nonce, len(ct))))


@dataclass(frozen=True)
class Signature:
    """Schnorr signature (commitment X, challenge e, response rho).

    Wire encoding: serialize(X) || e || rho, with e and rho big-endian at
    ``max(32, scalar_bytes)`` bytes each (32 for toy-23 and prime192v1, 128
    for modp-1024).
    """

    X: object
    e: int
    rho: int

    @staticmethod
    def scalar_width(G):
        return max(32, G.scalar_bytes)

    def to_bytes(self, G):
        w = self.scalar_width(G)
        return G.serialize(self.X) + self.e.to_bytes(w, "big") + self.rho.to_bytes(w, "big")

    @classmethod
    def from_bytes(cls, data, G):
        w = cls.scalar_width(G)
        if len(data) != G.element_bytes + 2 * w:
            raise MalformedSignature(f"signature must be {G.element_bytes + 2 * w} bytes")
        try:
            X = G.deserialize(data[:G.element_bytes])
        except (MalformedElement, InvalidElement) as exc:
            raise MalformedSignature(str(exc)) from exc
        e = int.from_bytes(data[G.element_bytes:G.element_bytes + w], "big")
        rho = int.from_bytes(data[G.element_bytes + w:], "big")
        if e >= G.q or rho >= G.q:
            raise MalformedSignature("signature scalars out of range")
        return cls(X, e, rho)


def signature_challenge(G, pk, X, msg):
    return hash_to_scalar(G, b"sign", G.serialize(pk), G.serialize(X), msg)


def fs_sign(sk, pk, msg, G, rng=None):
    """Fiat-Shamir transformed Schnorr identification: one exponentiation."""
    x = G.random_scalar(rng)
    X = G.exp(G.g, x)
    e = signature_challenge(G, pk, X, msg)
    return Signature(X, e, (x + sk * e) % G.q)


def fs_verify(pk, msg, sig, G):
    """Check g^rho = X * pk^e and that e was derived from (pk, X, msg)."""
    if G.is_identity(pk) or G.is_identity(sig.X):
        return False
    if sig.e != signature_challenge(G, pk, sig.X, msg):
        return False
    return G.exp(G.g, sig.rho) == G.mul(sig.X, G.exp(pk, sig.e))
