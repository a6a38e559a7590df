"""Benchmark harness.

Each protocol runs fully in-process with both parties' computations
interleaved and no network latency.  Setup (key generation, enrollment,
certificate preprocessing) happens once, outside the timed region.  Every
iteration then runs one complete protocol instance and checks that it
succeeded; failures raise instead of being timed.

The timed region holds the cryptographic work.  For the key exchanges it
also holds the state machines' own message framing, which costs
microseconds against milliseconds of exponentiation.
"""

import random
import statistics
import time
from dataclasses import asdict, dataclass

from . import commitment, identification as ident
from .delegation import paillier, pre
from .errors import ConfigurationError
from .group import ExpCounter, count_exponentiations, make_group
from .key_exchange import INITIATOR, RESPONDER, make_session, run_handshake
from .pki import KGC
from .proximity import BoundingConfig, DBProver, DBVerifier, RadioChannel, db_run

BENCH_PROTOCOLS = ("iso-ke", "sigma", "schnorr", "okamoto", "pedersen", "tls", "distance-bounding", "paillier", "pre")
BENCH_GROUPS = ("modp-1024", "prime192v1")
WARMUP = 50
PAILLIER_BITS = 1024


@dataclass
class BenchReport:
    protocol: str
    group: str
    iterations: int
    mean_ms: float
    stdev_ms: float
    wire_messages: int
    exponentiations: int

    def to_dict(self):
        return asdict(self)


class _Case:
    """One protocol instance factory: ``run()`` executes a full instance."""

    messages = 0

    def __init__(self, G, rng):
        self.G = G
        self.rng = rng
        self.prover = ExpCounter()

    def run(self):
        raise NotImplementedError


class _Schnorr(_Case):
    messages = 3

    def __init__(self, G, rng):
        super().__init__(G, rng)
        self.keys = ident.SchnorrKeys.generate(G, rng)

    def run(self):
        G = self.G
        with count_exponentiations(self.prover):
            session, X = ident.schnorr_commit(self.keys, G, self.rng)
        mu = ident.schnorr_challenge(G, self.rng)
        with count_exponentiations(self.prover):
            rho = ident.schnorr_respond(session, mu)
        if not ident.schnorr_verify(G, X, self.keys.pk, mu, rho):
            raise AssertionError("schnorr proof rejected")


class _Okamoto(_Case):
    messages = 3

    def __init__(self, G, rng):
        super().__init__(G, rng)
        self.keys = ident.OkamotoKeys.generate(G, rng)

    def run(self):
        G = self.G
        with count_exponentiations(self.prover):
            session, X = ident.okamoto_commit(self.keys, G, self.rng)
        mu = ident.okamoto_challenge(G, self.rng)
        with count_exponentiations(self.prover):
            rho1, rho2 = ident.okamoto_respond(session, mu)
        if not ident.okamoto_verify(G, X, self.keys.pk, mu, rho1, rho2):
            raise AssertionError("okamoto proof rejected")


class _Pedersen(_Case):
    messages = 2

    def run(self):
        G = self.G
        m = self.rng.randrange(G.q)
        with count_exponentiations(self.prover):
            c, opening = commitment.commit(m, G, self.rng)
        if commitment.reveal(c, opening, G) != m:
            raise AssertionError("pedersen opening rejected")


class _KeyExchange(_Case):
    protocol = None

    def __init__(self, G, rng):
        super().__init__(G, rng)
        kgc = KGC(G, rng=rng)
        self.a, self.b = kgc.enroll("initiator-device", rng), kgc.enroll("responder-device", rng)
        self.ta, self.tb = kgc.trust_store(), kgc.trust_store()
        # ISO-KE and TLS certificates travel in the clear, so they can be verified ahead of time
        self.pre = self.protocol in ("iso-ke", "tls")
        if self.pre:
            self.ta.preprocess(self.b.cert)
            self.tb.preprocess(self.a.cert)
        self.messages = None

    def run(self):
        i = make_session(self.protocol, INITIATOR, self.G, self.a, self.ta, self.rng, preprocessed_certs=self.pre)
        r = make_session(self.protocol, RESPONDER, self.G, self.b, self.tb, self.rng, preprocessed_certs=self.pre)
        self.messages = run_handshake(i, r, (self.prover, ExpCounter()))
        if not (i.established and r.established and i.keys == r.keys):
            raise AssertionError(f"{self.protocol} handshake failed")


class _IsoKE(_KeyExchange):
    protocol = "iso-ke"


class _Sigma(_KeyExchange):
    protocol = "sigma"


class _TLS(_KeyExchange):
    protocol = "tls"


class _DistanceBounding(_Case):
    def __init__(self, G, rng):
        super().__init__(G, rng)
        self.config = BoundingConfig()
        key = rng.getrandbits(256).to_bytes(32, "big")
        self.verifier = DBVerifier(key, self.config, rng)
        self.prover_party = DBProver(key, self.config)
        self.channel = RadioChannel(5.0)
        self.messages = 2 * self.config.rounds

    def run(self):
        result = db_run(self.verifier, self.prover_party, self.config, self.channel)
        if result.verdict != "within-bound":
            raise AssertionError("honest prover rejected")


class _Paillier(_Case):
    messages = 0

    def __init__(self, G, rng):
        super().__init__(G, rng)
        self.keys = paillier.paillier_keygen(PAILLIER_BITS, rng)

    def run(self):
        n = self.keys.n
        m1, m2 = self.rng.randrange(n), self.rng.randrange(n)
        c = paillier.paillier_add(
            paillier.paillier_encrypt(m1, self.keys.public, self.rng),
            paillier.paillier_encrypt(m2, self.keys.public, self.rng),
            self.keys.public,
        )
        if paillier.paillier_decrypt(c, self.keys) != (m1 + m2) % n:
            raise AssertionError("paillier sum mismatch")


class _PRE(_Case):
    messages = 2  # owner -> proxy, proxy -> delegatee

    def __init__(self, G, rng):
        super().__init__(G, rng)
        self.x, self.y = G.random_scalar(rng), G.random_scalar(rng)
        self.pk_a = G.exp(G.g, self.x)
        self.rk = pre.pre_rekey(self.x, self.y, G)

    def run(self):
        G = self.G
        m = G.exp(G.g, G.random_scalar(self.rng))
        with count_exponentiations(self.prover):
            c = pre.pre_encrypt(m, self.pk_a, G, self.rng)
        if pre.pre_decrypt_delegatee(pre.pre_reencrypt(c, self.rk, G), self.y, G) != m:
            raise AssertionError("re-encryption round trip failed")


_CASES = {
    "iso-ke": _IsoKE,
    "sigma": _Sigma,
    "tls": _TLS,
    "schnorr": _Schnorr,
    "okamoto": _Okamoto,
    "pedersen": _Pedersen,
    "distance-bounding": _DistanceBounding,
    "paillier": _Paillier,
    "pre": _PRE,
}


def bench(protocol, group, iterations=1000, insecure=False, seed=None, warmup=WARMUP):
    """Time ``iterations`` complete runs of ``protocol`` in ``group``."""
    if protocol not in _CASES:
        raise ConfigurationError(f"unknown protocol {protocol!r}; expected one of {', '.join(BENCH_PROTOCOLS)}")
    if iterations < 1:
        raise ConfigurationError("iterations must be at least 1")
    G = make_group(group)
    if G.insecure and not insecure:
        raise ConfigurationError(f"group {group} is insecure and refused for benchmarking without --insecure")
    rng = random.Random(seed) if seed is not None else random.SystemRandom()
    case = _CASES[protocol](G, rng)

    # dry run: structural counts for one instance
    case.prover.count = 0
    case.run()
    exps = case.prover.count
    messages = case.messages

    for _ in range(warmup):
        case.run()
    samples = []
    clock = time.perf_counter_ns
    for _ in range(iterations):
        t0 = clock()
        case.run()
        samples.append((clock() - t0) / 1e6)
    mean = statistics.fmean(samples)
    stdev = statistics.stdev(samples) if len(samples) > 1 else 0.0
    return BenchReport(protocol, group, iterations, mean, stdev, messages, exps)
