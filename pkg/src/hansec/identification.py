"""Schnorr and Okamoto interactive identification for owner-to-cloud authentication.

Both are three-move commit / challenge / response proofs of knowledge of a
discrete-log secret.  Prover state lives in a :class:`ProofSession`, whose
ephemeral secret is erased as soon as the response has been computed.
Verifier-side single-use bookkeeping lives in :class:`VerifierSession`.
"""

from dataclasses import dataclass
from enum import Enum

from . import wire
from .errors import ProtocolOrderViolation
from .group import default_rng


class State(str, Enum):
    COMMITTED = "committed"
    CHALLENGED = "challenged"
    RESPONDED = "responded"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


# wire message types
COMMIT, CHALLENGE, RESPONSE = 1, 2, 3


@dataclass(frozen=True)
class SchnorrKeys:
    sk: int
    pk: object

    @classmethod
    def generate(cls, G, rng=None):
        a = G.random_scalar(rng)
        return cls(a, G.exp(G.g, a))


@dataclass(frozen=True)
class OkamotoKeys:
    sk: tuple
    pk: object

    @classmethod
    def generate(cls, G, rng=None):
        a1, a2 = G.random_scalar(rng), G.random_scalar(rng)
        return cls((a1, a2), G.mul(G.exp(G.g1, a1), G.exp(G.g2, a2)))


@dataclass
class ProofSession:
    scheme: str
    G: object
    keys: object
    ephemeral: object
    commitment: object
    challenge: int = None
    response: object = None
    state: State = State.COMMITTED
    role: str = "prover"

    def _take_challenge(self, mu):
        if self.state is not State.COMMITTED:
            raise ProtocolOrderViolation(f"{self.scheme} prover is {self.state.value}, not committed")
        self.challenge = mu % self.G.q
        self.state = State.CHALLENGED

    def _finish(self, response):
        self.response = response
        self.ephemeral = None
        self.state = State.RESPONDED
        return response


def schnorr_commit(keys, G, rng=None):
    """Prover move 1: fresh nonzero x, X = g^x (one exponentiation)."""
    x = G.random_scalar(rng)
    X = G.exp(G.g, x)
    return ProofSession("schnorr", G, keys, x, X), X


def schnorr_challenge(G, rng=None):
    """Verifier move: challenge uniform on [0, q)."""
    return (rng or default_rng()).randrange(0, G.q)


def schnorr_respond(session, mu):
    session._take_challenge(mu)
    G = session.G
    return session._finish((session.ephemeral + session.keys.sk * session.challenge) % G.q)


def schnorr_verify(G, X, A, mu, rho):
    """Accept iff g^rho = X * A^mu."""
    return G.exp(G.g, rho) == G.mul(X, G.exp(A, mu))


def okamoto_commit(keys, G, rng=None):
    """Prover move 1: X = g1^x1 * g2^x2 (two exponentiations)."""
    x1, x2 = G.random_scalar(rng), G.random_scalar(rng)
    X = G.mul(G.exp(G.g1, x1), G.exp(G.g2, x2))
    return ProofSession("okamoto", G, keys, (x1, x2), X), X


okamoto_challenge = schnorr_challenge


def okamoto_respond(session, mu):
    session._take_challenge(mu)
    G = session.G
    (x1, x2), (a1, a2) = session.ephemeral, session.keys.sk
    mu = session.challenge
    return session._finish(((x1 + mu * a1) % G.q, (x2 + mu * a2) % G.q))


def okamoto_verify(G, X, A, mu, rho1, rho2):
    """Accept iff g1^rho1 * g2^rho2 = X * A^mu."""
    return G.mul(G.exp(G.g1, rho1), G.exp(G.g2, rho2)) == G.mul(X, G.exp(A, mu))


def extract_schnorr_secret(G, mu1, rho1, mu2, rho2):
    """Special-soundness extractor: two accepting transcripts sharing X reveal a."""
    if (mu1 - mu2) % G.q == 0:
        raise ValueError("challenges must differ")
    return (rho1 - rho2) * pow(mu1 - mu2, -1, G.q) % G.q


class VerifierSession:
    """Single-use verifier: one commitment, one challenge, one response."""

    def __init__(self, scheme, G, pk):
        if scheme not in ("schnorr", "okamoto"):
            raise ValueError(f"unknown identification scheme {scheme!r}")
        self.scheme = scheme
        self.G = G
        self.pk = pk
        self.commitment = None
        self.challenge = None
        self.state = None

    def receive_commitment(self, X, rng=None):
        if self.state is not None:
            raise ProtocolOrderViolation("verifier already holds a commitment")
        self.commitment = X
        self.challenge = schnorr_challenge(self.G, rng)
        self.state = State.CHALLENGED
        return self.challenge

    def check(self, response):
        if self.state is not State.CHALLENGED:
            # a second response for the same challenge is a replay
            self.state = State.REJECTED
            return False
        G, X, A, mu = self.G, self.commitment, self.pk, self.challenge
        if self.scheme == "schnorr":
            ok = schnorr_verify(G, X, A, mu, response)
        else:
            ok = okamoto_verify(G, X, A, mu, *response)
        self.state = State.ACCEPTED if ok else State.REJECTED
        return ok


_PID = {"schnorr": wire.SCHNORR, "okamoto": wire.OKAMOTO}


def encode_commit(scheme, G, X):
    return wire.pack(_PID[scheme], COMMIT, G.serialize(X))


def decode_commit(scheme, G, data):
    (x,) = wire.unpack(data, _PID[scheme], COMMIT, 1)
    return G.deserialize(x)


def _scalar(G, v):
    return (v % G.q).to_bytes(max(1, G.scalar_bytes), "big")


def encode_challenge(scheme, G, mu):
    return wire.pack(_PID[scheme], CHALLENGE, _scalar(G, mu))


def decode_challenge(scheme, G, data):
    (mu,) = wire.unpack(data, _PID[scheme], CHALLENGE, 1)
    return int.from_bytes(mu, "big") % G.q


def encode_response(scheme, G, response):
    parts = response if scheme == "okamoto" else (response,)
    return wire.pack(_PID[scheme], RESPONSE, *(_scalar(G, r) for r in parts))


def decode_response(scheme, G, data):
    fields = wire.unpack(data, _PID[scheme], RESPONSE, 2 if scheme == "okamoto" else 1)
    values = tuple(int.from_bytes(f, "big") % G.q for f in fields)
    return values if scheme == "okamoto" else values[0]
