"""Distance bounding over a simulated radio channel.

Each round the verifier sends a fresh random challenge, the prover answers
with a truncated keyed hash of (round index, challenge), and the verifier
times the round trip on the simulator's integer-nanosecond clock.  The
distance bound is the largest per-round estimate, so no prover farther away
than the bound could have answered in time.

Wall-clock bounding is out of scope: commodity stacks cannot time
light-speed round trips.
"""

import hashlib
import hmac
from dataclasses import dataclass, field

from . import wire
from .group import default_rng

SPEED_OF_LIGHT = 2.998e8

WITHIN_BOUND = "within-bound"
OUT_OF_BOUND = "out-of-bound"
RESPONSE_INVALID = "response-invalid"

CHALLENGE, RESPONSE = 1, 2


@dataclass(frozen=True)
class BoundingConfig:
    rounds: int = 32
    signal_speed: float = SPEED_OF_LIGHT
    processing_delay_ns: int = 0
    threshold_m: float = 10.0
    response_bits: int = 32
    challenge_bytes: int = 8

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("at least one round is required")
        if self.threshold_m <= 0:
            raise ValueError("distance threshold must be positive")
        if not 1 <= self.response_bits <= 256:
            raise ValueError("response_bits must be in [1, 256]")

    @property
    def message_count(self):
        return 2 * self.rounds


@dataclass
class BoundingResult:
    estimated_distance: float
    rounds_passed: int
    verdict: str
    round_trips_ns: list = field(default_factory=list)
    messages: int = 0


def distance_from_rtt(rtt_ns, config=BoundingConfig()):
    """d = c * (RTT - processing delay) / 2, in meters."""
    return config.signal_speed * (rtt_ns - config.processing_delay_ns) * 1e-9 / 2


def propagation_delay_ns(distance_m, signal_speed=SPEED_OF_LIGHT):
    """One-way delay rounded up to whole nanoseconds, so it never undercounts distance."""
    return -int(-distance_m * 1e9 // signal_speed)


def db_response(key, round_index, challenge, bits=32):
    """Keyed hash of (round, challenge), truncated to ``bits`` bits."""
    tag = hmac.new(key, b"db" + round_index.to_bytes(4, "big") + challenge, hashlib.sha256).digest()
    nbytes = (bits + 7) // 8
    value = int.from_bytes(tag[:nbytes], "big") >> (8 * nbytes - bits)
    return value.to_bytes(nbytes, "big")


class DBProver:
    def __init__(self, key, config=BoundingConfig()):
        self.key = key
        self.config = config

    def respond(self, round_index, challenge):
        return db_response(self.key, round_index, challenge, self.config.response_bits)


def db_respond(prover, challenge, round_index=0):
    return prover.respond(round_index, challenge)


class DBVerifier:
    def __init__(self, key, config=BoundingConfig(), rng=None):
        self.key = key
        self.config = config
        self.rng = rng or default_rng()

    def challenge(self):
        return self.rng.getrandbits(8 * self.config.challenge_bytes).to_bytes(self.config.challenge_bytes, "big")

    def check(self, round_index, challenge, response):
        expected = db_response(self.key, round_index, challenge, self.config.response_bits)
        return response is not None and hmac.compare_digest(expected, response)


class RadioChannel:
    """Point-to-point wireless link: propagation by distance plus optional relay delay.

    ``extra_delay_ns`` is added in each direction (a relay forwarding both
    ways).  Rounds listed in ``lost_rounds`` lose the response.
    """

    def __init__(self, distance_m, extra_delay_ns=0, lost_rounds=(), signal_speed=SPEED_OF_LIGHT):
        if distance_m < 0 or extra_delay_ns < 0:
            raise ValueError("distance and delay must be non-negative")
        self.distance_m = distance_m
        self.extra_delay_ns = extra_delay_ns
        self.lost_rounds = frozenset(lost_rounds)
        self.signal_speed = signal_speed

    def one_way_ns(self):
        return propagation_delay_ns(self.distance_m, self.signal_speed) + self.extra_delay_ns

    def round_trip(self, round_index, challenge, prover, processing_delay_ns=0):
        """Return ``(response, rtt_ns)``; the response is ``None`` when lost."""
        if round_index in self.lost_rounds:
            return None, None
        response = prover.respond(round_index, challenge)
        return response, 2 * self.one_way_ns() + processing_delay_ns


def db_run(verifier, prover, config, channel, clock=None, log=None):
    """Run ``config.rounds`` timed challenge-response rounds.

    ``clock`` is a callable advancing the simulator's time by a number of
    nanoseconds; ``log`` receives ``(sender, msg_type, payload)`` tuples for
    transcript recording.
    """
    rtts = []
    passed = 0
    invalid = False
    for i in range(config.rounds):
        c = verifier.challenge()
        if log is not None:
            log("verifier", CHALLENGE, wire.pack(wire.DISTANCE_BOUNDING, CHALLENGE, i.to_bytes(4, "big"), c))
        response, rtt = channel.round_trip(i, c, prover, config.processing_delay_ns)
        if response is None:
            invalid = True  # round timeout counts as failure
            continue
        if clock is not None:
            clock(rtt)
        if log is not None:
            log("prover", RESPONSE, wire.pack(wire.DISTANCE_BOUNDING, RESPONSE, i.to_bytes(4, "big"), response))
        rtts.append(rtt)
        if verifier.check(i, c, response):
            passed += 1
        else:
            invalid = True
    estimate = max((distance_from_rtt(r, config) for r in rtts), default=float("inf"))
    if invalid:
        verdict = RESPONSE_INVALID
    elif estimate <= config.threshold_m:
        verdict = WITHIN_BOUND
    else:
        verdict = OUT_OF_BOUND
    return BoundingResult(estimate, passed, verdict, rtts, config.rounds + len(rtts))


def guess_success_rate(config, trials, rng):
    """Fraction of rounds a keyless adversary passes by guessing responses."""
    verifier = DBVerifier(rng.getrandbits(256).to_bytes(32, "big"), config, rng)
    nbytes = (config.response_bits + 7) // 8
    hits = 0
    for i in range(trials):
        c = verifier.challenge()
        guess = (rng.getrandbits(config.response_bits)).to_bytes(nbytes, "big")
        hits += verifier.check(i % config.rounds, c, guess)
    return hits / trials
