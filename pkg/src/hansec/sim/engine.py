"""Discrete-event home-network simulator.

One run is a pure function of (devices, protocol, adversary, seed): all
randomness comes from a single ``random.Random(seed)``, time is an integer
nanosecond counter and events are ordered by (time, insertion order).

The first device initiates (or verifies, for distance bounding; proves, for
identification) and the second responds.  Every packet passes the
adversary's tap before it is scheduled for delivery.  A device receiving the
first message of a handshake on an unknown connection opens a responder
session for it, which is what lets the reflector talk a device into a
session with itself.
"""

import heapq
import random
from dataclasses import dataclass, field

from ..errors import ConfigurationError, HanError
from ..group import count_exponentiations, make_group, ExpCounter
from ..identification import OkamotoKeys, SchnorrKeys
from ..key_exchange import ESTABLISHED, INITIATOR, RESPONDER, make_session
from ..pki import KGC
from ..proximity import BoundingConfig, DBProver, DBVerifier, db_run
from .adversary import DB_PROTOCOL, ID_PROTOCOLS, KE_PROTOCOLS, PRIMARY_CONN, Evidence, Packet, make_adversary
from .model import CHANNEL_PROTOCOLS, D2DW, D2DWL, O2C, ChannelConfig, DeviceProfile
from .parties import ProverParty, VerifierParty
from .transcript import Transcript

PROTOCOLS = KE_PROTOCOLS + ID_PROTOCOLS + (DB_PROTOCOL,)


@dataclass(frozen=True)
class Verdict:
    kind: str  # completed | aborted | compromised
    detail: str = ""

    def __str__(self):
        return self.kind if not self.detail else f"{self.kind}({self.detail})"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if "(" in text and text.endswith(")"):
            kind, detail = text[:-1].split("(", 1)
            return cls(kind.strip(), detail.strip())
        return cls(text)


@dataclass
class ScenarioOutcome:
    verdict: Verdict
    transcript: Transcript
    metrics: dict = field(default_factory=dict)
    evidence: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    protocol: str = ""
    adversary: str = "none"
    seed: int = 0

    @property
    def compromised(self):
        return self.verdict.kind == "compromised"


class _Node:
    def __init__(self, sim, device, creds):
        self.sim = sim
        self.device = device
        self.identity = device.identity
        self.creds = creds
        self.trust = sim.kgc.trust_store()
        self.sessions = {}
        self.counter = ExpCounter()

    def start(self, conn, peer):
        sess = self.sim.new_session(self, INITIATOR, conn)
        with count_exponentiations(self.counter):
            msg = sess.init()
        self.sim.send(self.identity, peer, conn, msg)
        self.sim.arm_timeout(self, conn, sess)

    def deliver(self, pkt):
        sess = self.sessions.get(pkt.conn)
        if sess is None:
            if pkt.msg_type != 1:
                return
            sess = self.sim.new_session(self, RESPONDER, pkt.conn)
        out = []
        try:
            with count_exponentiations(self.counter):
                out = sess.receive(pkt.payload)
        except HanError:
            pass
        self.sim.note_error(self, pkt.conn, sess)
        for msg in out:
            self.sim.send(self.identity, pkt.src, pkt.conn, msg)
        self.sim.arm_timeout(self, pkt.conn, sess)


class Simulation:
    def __init__(self, devices, protocol, adversary="none", seed=0, group="prime192v1",
                 channel=None, channel_config=None, bounding_config=None, insecure=False,
                 adversary_params=None):
        devices = [d if isinstance(d, DeviceProfile) else DeviceProfile(**d) for d in devices]
        if len(devices) < 2:
            raise ConfigurationError("a scenario needs at least two devices")
        if len({d.identity for d in devices}) != len(devices):
            raise ConfigurationError("device identities must be unique")
        if protocol not in PROTOCOLS:
            raise ConfigurationError(f"unknown protocol {protocol!r}")
        self.devices = devices
        self.initiator, self.responder = devices[0], devices[1]
        self.protocol = protocol
        self.seed = seed
        self.channel_config = channel_config or ChannelConfig()
        self.bounding_config = bounding_config or BoundingConfig()
        self.channel = channel or self._default_channel()
        self._check_channel()

        self.G = make_group(group)
        if self.G.insecure and not insecure:
            raise ConfigurationError(f"group {group} is insecure; pass insecure=True to use it")
        self.rng = random.Random(seed)
        self.adversary = make_adversary(adversary, self.rng, **(adversary_params or {}))
        if protocol not in self.adversary.protocols:
            raise ConfigurationError(f"adversary {self.adversary.name} does not apply to {protocol}")

        self.now = 0
        self._queue = []
        self._seq = 0
        self.transcript = Transcript()
        self.errors = []
        self._noted = set()
        self.bounding_result = None
        self.true_distance = self.initiator.distance_to(self.responder)

        self.kgc = KGC(self.G, rng=self.rng)
        self.nodes = {}
        for d in devices:
            self.nodes[d.identity] = _Node(self, d, self.kgc.enroll(d.identity, self.rng))
        self._proof_keys = None
        if protocol in ID_PROTOCOLS:
            keys_cls = SchnorrKeys if protocol == "schnorr" else OkamotoKeys
            self._proof_keys = keys_cls.generate(self.G, self.rng)

    def _default_channel(self):
        shared = self.initiator.channels & self.responder.channels
        for kind in ((D2DWL,) if self.protocol == DB_PROTOCOL else ()) + (D2DW, D2DWL, O2C):
            if kind in shared and self.protocol in CHANNEL_PROTOCOLS[kind]:
                return kind
        raise ConfigurationError(f"{self.initiator.identity} and {self.responder.identity} share no channel "
                                 f"that carries {self.protocol}")

    def _check_channel(self):
        if self.protocol not in CHANNEL_PROTOCOLS.get(self.channel, ()):
            raise ConfigurationError(f"{self.protocol} cannot run over {self.channel}")
        for d in (self.initiator, self.responder):
            if self.channel not in d.channels:
                raise ConfigurationError(f"{d.identity} has no {self.channel} interface")

    # setup helpers used by adversaries
    def enroll_insider(self, identity):
        return self.kgc.enroll(identity, self.rng)

    # event loop
    def schedule(self, at_ns, fn):
        heapq.heappush(self._queue, (at_ns, self._seq, fn))
        self._seq += 1

    def delay_ns(self, src, dst):
        cfg = self.channel_config
        if self.channel == D2DW:
            return cfg.wired_latency_ns
        if self.channel == O2C:
            return cfg.cloud_latency_ns
        a, b = self.nodes[src].device, self.nodes[dst].device
        d = a.distance_to(b)
        return -int(-d * 1e9 // cfg.signal_speed)

    def send(self, src, dst, conn, payload):
        pkt = Packet(src, dst, conn, payload)
        for out, action in self.adversary.tap(self, pkt):
            if action == "drop":
                self.transcript.add(self.now, out.src, out.dst, out.payload, action)
                continue
            at = self.now + self.delay_ns(src, out.dst) + out.extra_delay_ns
            self.schedule(at, lambda out=out, action=action: self._arrive(out, action))

    def _arrive(self, pkt, action):
        self.transcript.add(self.now, pkt.src, pkt.dst, pkt.payload, action)
        self.nodes[pkt.dst].deliver(pkt)

    def new_session(self, node, role, conn):
        if self.protocol in KE_PROTOCOLS:
            sess = make_session(self.protocol, role, self.G, node.creds, node.trust, self.rng)
        elif role == INITIATOR:
            sess = ProverParty(self.protocol, self.G, self._proof_keys, self.rng)
        else:
            sess = VerifierParty(self.protocol, self.G, self._proof_keys.pk, self.rng)
        node.sessions[conn] = sess
        return sess

    def note_error(self, node, conn, sess):
        key = (node.identity, conn)
        if sess.error is not None and key not in self._noted:
            self._noted.add(key)
            self.errors.append((self.now, node.identity, conn, sess.error))

    def arm_timeout(self, node, conn, sess):
        progress = len(sess.transcript)

        def check():
            if sess.state not in (ESTABLISHED, "aborted") and len(sess.transcript) == progress:
                sess.timeout()
                self.note_error(node, conn, sess)

        self.schedule(self.now + self.channel_config.session_timeout_ns, check)

    def _advance(self, ns):
        self.now += ns

    def run(self):
        self.adversary.setup(self)
        if self.protocol == DB_PROTOCOL:
            return self._run_bounding()
        for start, conn in self.adversary.sessions(self):
            self.schedule(start, lambda conn=conn: self.nodes[self.initiator.identity].start(conn, self.responder.identity))
        last = 0
        while self._queue:
            self.now, _, fn = heapq.heappop(self._queue)
            fn()
        if len(self.transcript):
            last = self.transcript.records[-1].sim_time_ns
        return self._outcome(last)

    def _run_bounding(self):
        key = self.rng.getrandbits(256).to_bytes(32, "big")  # pre-shared
        verifier = DBVerifier(key, self.bounding_config, self.rng)
        prover = DBProver(key, self.bounding_config)
        channel = self.adversary.bounding_channel(self, self.true_distance)
        v, p = self.initiator.identity, self.responder.identity

        def log(role, _mtype, payload):
            src, dst = (v, p) if role == "verifier" else (p, v)
            action = "relay" if self.adversary.name == "relay" else None
            self.transcript.add(self.now, src, dst, payload, action)

        self.bounding_result = result = db_run(verifier, prover, self.bounding_config, channel, self._advance, log)
        if result.verdict != "within-bound":
            self.errors.append((self.now, v, PRIMARY_CONN, result.verdict))
        return self._outcome(self.now)

    # verdict
    def _session_evidence(self):
        established = [
            (ident, conn, s)
            for ident, node in self.nodes.items()
            for conn, s in sorted(node.sessions.items())
            if s.state == ESTABLISHED and s.keys is not None
        ]
        evidence = []
        for i, (id_a, conn_a, a) in enumerate(established):
            for id_b, conn_b, b in established[i + 1:]:
                if a.keys != b.keys:
                    continue
                if id_a == id_b:
                    evidence.append(Evidence("self-session", {"device": id_a, "connections": [conn_a, conn_b]}))
                elif a.peer_identity != id_b or b.peer_identity != id_a:
                    evidence.append(Evidence("peer-identity-rebound", {
                        id_a: {"believes_peer": a.peer_identity},
                        id_b: {"believes_peer": b.peer_identity},
                        "shared_key_equal": True,
                    }))
        return evidence

    def _outcome(self, duration):
        evidence = self._session_evidence() + self.adversary.evidence(self)
        if evidence:
            verdict = Verdict("compromised", evidence[0].kind)
        elif self.protocol == DB_PROTOCOL:
            r = self.bounding_result
            verdict = Verdict("completed") if r.verdict == "within-bound" else Verdict("aborted", r.verdict)
        else:
            a = self.nodes[self.initiator.identity].sessions.get(PRIMARY_CONN)
            b = self.nodes[self.responder.identity].sessions.get(PRIMARY_CONN)
            if a is not None and b is not None and a.state == ESTABLISHED and b.state == ESTABLISHED:
                verdict = Verdict("completed")
            elif self.errors:
                verdict = Verdict("aborted", self.errors[0][3])
            else:
                verdict = Verdict("aborted", "incomplete")
        metrics = {
            "messages": len(self.transcript.delivered()),
            "duration_ns": duration,
            "exponentiations": {ident: node.counter.count for ident, node in self.nodes.items()},
        }
        if self.bounding_result is not None:
            metrics["estimated_distance_m"] = self.bounding_result.estimated_distance
        return ScenarioOutcome(verdict, self.transcript, metrics, evidence, list(self.errors),
                               self.protocol, self.adversary.name, self.seed)


def run_scenario(devices, protocol, adversary="none", seed=0, **options):
    """Run one scenario and return its :class:`ScenarioOutcome`."""
    return Simulation(devices, protocol, adversary, seed, **options).run()
