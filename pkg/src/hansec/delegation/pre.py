"""Unidirectional ElGamal-style proxy re-encryption.

A delegator with key pair (x, g^x) encrypts m as c = ((g^x)^r, m * g^r).  The
re-encryption key rk = y/x mod q lets a proxy turn c1 into (g^x)^(r*rk) =
g^(y*r) without learning m or either secret, and the delegatee recovers
g^r = c1^(1/y) and then m = c2 / g^r.

Security caveat: unlike textbook ElGamal (c2 = m * pk^r), the mask g^r here
does not depend on the recipient's key, so anyone who learns one g^r for a
ciphertext can unmask it.  The construction is kept as published; use KEM mode
(:func:`pre_encrypt_key`) and treat this as a teaching implementation.

Messages are group elements.  In mod-p groups the message may be any unit of
Z_p^* (the worked toy example encrypts 5, which is not a quadratic residue
mod 23), so only c1 is checked for subgroup membership.
"""

import hashlib
from dataclasses import dataclass

from .. import wire
from ..errors import InvalidElement, InvalidKey, MalformedElement, MessageNotEncodable, WrongCiphertextLevel
from ..primitives import open_sealed, seal

DELEGATOR = "delegator"
DELEGATEE = "delegatee"
_LEVEL_BYTES = {DELEGATOR: 1, DELEGATEE: 2}
CIPHERTEXT = 1


@dataclass(frozen=True)
class PreCiphertext:
    c1: object
    c2: object
    level: str = DELEGATOR


@dataclass(frozen=True)
class ReEncryptionKey:
    rk: int
    source: str = ""
    target: str = ""


def _check_message(m, G):
    if G.kind == "mod-p":
        if not isinstance(m, int) or not 0 < m < G.p:
            raise MessageNotEncodable("message must be a unit of Z_p^*")
    elif m is not None and not G.is_member(m):
        raise MessageNotEncodable("message must be a point on the curve")


def pre_encrypt(m, pk_a, G, rng=None, r=None):
    """Delegator-level ciphertext ((g^x)^r, m * g^r)."""
    _check_message(m, G)
    r = G.random_scalar(rng) if r is None else r % G.q
    if r == 0:
        raise ValueError("r must be nonzero")
    return PreCiphertext(G.exp(pk_a, r), G.mul(m, G.exp(G.g, r)), DELEGATOR)


def pre_rekey(sk_a, sk_b, G, source="", target=""):
    """rk = y * x^-1 mod q."""
    if sk_a % G.q == 0:
        raise InvalidKey("delegator secret key is zero")
    if sk_b % G.q == 0:
        raise InvalidKey("delegatee secret key is zero")
    return ReEncryptionKey(sk_b * pow(sk_a, -1, G.q) % G.q, source, target)


def pre_reencrypt(c, rk, G):
    """Proxy step: c1 -> c1^rk; needs no private key."""
    if c.level != DELEGATOR:
        raise WrongCiphertextLevel("only delegator-level ciphertexts can be re-encrypted")
    rk = rk.rk if isinstance(rk, ReEncryptionKey) else rk
    return PreCiphertext(G.exp(c.c1, rk), c.c2, DELEGATEE)


def _unmask(c, sk, G):
    if sk % G.q == 0:
        raise InvalidKey("secret key is zero")
    g_r = G.exp(c.c1, pow(sk, -1, G.q))
    return G.mul(c.c2, G.inv(g_r))


def pre_decrypt_delegatee(c, sk_b, G):
    if c.level != DELEGATEE:
        raise WrongCiphertextLevel("delegatee decryption needs a re-encrypted ciphertext")
    return _unmask(c, sk_b, G)


def pre_decrypt_delegator(c, sk_a, G):
    if c.level != DELEGATOR:
        raise WrongCiphertextLevel("delegator decryption needs an original ciphertext")
    return _unmask(c, sk_a, G)


def pre_decrypt(c, sk, G):
    return pre_decrypt_delegator(c, sk, G) if c.level == DELEGATOR else pre_decrypt_delegatee(c, sk, G)


# byte messages

def pre_encrypt_bytes(data, pk_a, G, rng=None):
    """Encode mode: pack short ``data`` into an element (lossless, length-limited)."""
    return pre_encrypt(G.encode_bytes(data), pk_a, G, rng)


def pre_decrypt_bytes(c, sk, G):
    return G.decode_bytes(pre_decrypt(c, sk, G))


def _kem_keys(G, element):
    digest = hashlib.sha256(b"hansec/pre-kem" + G.serialize(element)).digest()
    return digest, hashlib.sha256(b"hansec/pre-kem-mac" + digest).digest()


def pre_encrypt_key(pk_a, G, rng=None):
    """KEM mode: encrypt a random subgroup element; returns ``(ciphertext, ke, km)``."""
    k = G.exp(G.g, G.random_scalar(rng))
    ke, km = _kem_keys(G, k)
    return pre_encrypt(k, pk_a, G, rng), ke, km


def pre_decrypt_key(c, sk, G):
    return _kem_keys(G, pre_decrypt(c, sk, G))


def pre_seal(data, pk_a, G, rng=None):
    """Hybrid encryption of arbitrary bytes: KEM ciphertext plus a sealed payload."""
    c, ke, km = pre_encrypt_key(pk_a, G, rng)
    return c, seal(ke, km, b"pre", data)


def pre_open(c, sealed, sk, G):
    ke, km = pre_decrypt_key(c, sk, G)
    return open_sealed(ke, km, b"pre", sealed)


# wire format: pid 0x08, level byte, c1, c2

def encode_ciphertext(c, G):
    return wire.pack(wire.PRE, CIPHERTEXT, bytes((_LEVEL_BYTES[c.level],)), G.serialize(c.c1), G.serialize(c.c2))


def decode_ciphertext(data, G):
    level_b, c1_b, c2_b = wire.unpack(data, wire.PRE, CIPHERTEXT, 3)
    levels = {v: k for k, v in _LEVEL_BYTES.items()}
    if len(level_b) != 1 or level_b[0] not in levels:
        raise MalformedElement("unknown ciphertext level")
    c1 = G.deserialize(c1_b)
    if G.kind == "mod-p":
        if len(c2_b) != G.element_bytes:
            raise MalformedElement(f"expected {G.element_bytes} bytes")
        c2 = int.from_bytes(c2_b, "big")
        if not 0 < c2 < G.p:
            raise InvalidElement("c2 is not a unit mod p")
    else:
        c2 = G.deserialize(c2_b)
    return PreCiphertext(c1, c2, levels[level_b[0]])
