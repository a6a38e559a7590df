"""Pedersen commitments: c = g1^r * g2^m.

Perfectly hiding, and binding as long as log_{g1} g2 is unknown.  Byte-string
messages are hashed to a scalar first; the native message space is Z_q.
"""

from dataclasses import dataclass

from . import wire
from .primitives import hash_to_scalar

COMMIT, REVEAL = 1, 2


@dataclass(frozen=True)
class Opening:
    m: int
    r: int


def commit(m, G, rng=None, r=None):
    """Commit to scalar ``m``; two exponentiations.  Returns ``(c, Opening)``."""
    m = m % G.q
    r = G.random_scalar(rng) if r is None else r % G.q
    c = G.mul(G.exp(G.g1, r), G.exp(G.g2, m))
    return c, Opening(m, r)


def message_scalar(G, data):
    return hash_to_scalar(G, b"commit-msg", data)


def commit_bytes(data, G, rng=None):
    return commit(message_scalar(G, data), G, rng)


def reveal(c, opening, G):
    """Return ``m`` if the opening matches ``c``, else ``None``."""
    if G.mul(G.exp(G.g1, opening.r), G.exp(G.g2, opening.m)) == c:
        return opening.m
    return None


def encode_commit(G, c):
    return wire.pack(wire.PEDERSEN, COMMIT, G.serialize(c))


def decode_commit(G, data):
    (c,) = wire.unpack(data, wire.PEDERSEN, COMMIT, 1)
    return G.deserialize(c)


def encode_reveal(G, opening):
    w = max(1, G.scalar_bytes)
    return wire.pack(wire.PEDERSEN, REVEAL, opening.m.to_bytes(w, "big"), opening.r.to_bytes(w, "big"))


def decode_reveal(G, data):
    m, r = wire.unpack(data, wire.PEDERSEN, REVEAL, 2)
    return Opening(int.from_bytes(m, "big") % G.q, int.from_bytes(r, "big") % G.q)
