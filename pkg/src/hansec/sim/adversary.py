"""Scripted network adversaries.

Adversaries act only at tap points: every packet put on the wire passes
through :meth:`Adversary.tap`, which may forward, delay, drop, rewrite or
redirect it.  Endpoints are never compromised, though the misbinder is an
insider holding its own KGC-issued certificate.

Each script is deterministic given the run's RNG.
"""

import hashlib
from dataclasses import dataclass, replace

from .. import wire
from ..key_exchange import INITIATOR, RESPONDER, BaselineKESession, IsoKESession
from ..primitives import fs_sign, kdf, seal
from ..proximity import RadioChannel

KE_PROTOCOLS = ("iso-ke", "sigma", "sigma4", "tls", "baseline")
ID_PROTOCOLS = ("schnorr", "okamoto")
DB_PROTOCOL = "distance-bounding"

PRIMARY_CONN = 1
REFLECT_CONN = 101


@dataclass(frozen=True)
class Packet:
    src: str
    dst: str
    conn: int
    payload: bytes
    extra_delay_ns: int = 0

    @property
    def msg_type(self):
        return self.payload[1] if len(self.payload) > 1 else None


@dataclass(frozen=True)
class Evidence:
    """Machine-checkable proof that an attack succeeded."""

    kind: str
    detail: dict


class Adversary:
    name = "none"
    protocols = KE_PROTOCOLS + ID_PROTOCOLS + (DB_PROTOCOL,)

    def __init__(self, rng, **params):
        self.rng = rng
        self.params = params

    def setup(self, sim):
        pass

    def sessions(self, sim):
        """Handshakes to start: ``(start_time_ns, conn)`` pairs, initiator -> responder."""
        return [(0, PRIMARY_CONN)]

    def tap(self, sim, pkt):
        return [(pkt, None)]

    def bounding_channel(self, sim, distance_m):
        return RadioChannel(distance_m, signal_speed=sim.channel_config.signal_speed)

    def evidence(self, sim):
        return []


class Eavesdropper(Adversary):
    """Passive: scans every payload for the parties' identity strings."""

    name = "eavesdropper"

    def evidence(self, sim):
        found = [d.identity for d in sim.devices if sim.transcript.contains(d.identity.encode())]
        if not found:
            return []
        return [Evidence("identity-exposed", {"identities": found})]

    def found_identities(self, sim):
        ev = self.evidence(sim)
        return ev[0].detail["identities"] if ev else []


# which honest message the replayer captures and later substitutes: (sender role, msg type)
_REPLAY_TARGET = {"schnorr": (INITIATOR, 3), "okamoto": (INITIATOR, 3)}


class Replayer(Adversary):
    """Records one honest session, then replays its message into a fresh one."""

    name = "replayer"

    def __init__(self, rng, gap_ns=1_000_000_000, **params):
        super().__init__(rng, **params)
        self.gap_ns = int(gap_ns)
        self.recorded = None

    def sessions(self, sim):
        return [(0, PRIMARY_CONN + 1), (self.gap_ns, PRIMARY_CONN)]

    def _is_target(self, sim, pkt):
        role, mtype = _REPLAY_TARGET.get(sim.protocol, (RESPONDER, 2))
        sender = sim.initiator.identity if role == INITIATOR else sim.responder.identity
        return pkt.src == sender and pkt.msg_type == mtype

    def tap(self, sim, pkt):
        if self._is_target(sim, pkt):
            if pkt.conn != PRIMARY_CONN and self.recorded is None:
                self.recorded = pkt.payload
            elif pkt.conn == PRIMARY_CONN and self.recorded is not None:
                return [(replace(pkt, payload=self.recorded), "replay")]
        return [(pkt, None)]

    def bounding_channel(self, sim, distance_m):
        return _ReplayingRadio(distance_m, signal_speed=sim.channel_config.signal_speed)


class _ReplayingRadio(RadioChannel):
    """Answers every round after the first with the previous round's response."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._last = None

    def round_trip(self, round_index, challenge, prover, processing_delay_ns=0):
        response, rtt = super().round_trip(round_index, challenge, prover, processing_delay_ns)
        if self._last is not None:
            response, self._last = self._last, response
        else:
            self._last = response
        return response, rtt


class Misbinder(Adversary):
    """Insider with a valid certificate who substitutes its identity in flight.

    The initiator's certificate (or encrypted identity) is swapped for the
    insider's, and the initiator's final signature is replaced by one the
    insider computes itself, so the responder would believe it is talking to
    the insider while the initiator believes it is talking to the responder.
    """

    name = "misbinder"
    protocols = KE_PROTOCOLS
    insider = "mallory"

    def setup(self, sim):
        self.creds = sim.enroll_insider(self.insider)
        self.seen = {}

    def _sign(self, sim, content):
        return fs_sign(self.creds.sk, self.creds.pk, content, sim.G, self.rng).to_bytes(sim.G)

    def tap(self, sim, pkt):
        if pkt.conn != PRIMARY_CONN:
            return [(pkt, None)]
        G, proto = sim.G, sim.protocol
        self.seen.setdefault((pkt.src, pkt.msg_type), pkt.payload)
        from_initiator = pkt.src == sim.initiator.identity
        my_cert = self.creds.cert.to_bytes(G)
        new = None
        if proto in ("iso-ke", "baseline"):
            pid = wire.ISO_KE if proto == "iso-ke" else wire.BASELINE_KE
            if from_initiator and pkt.msg_type == 1:
                _cert, gx = wire.unpack(pkt.payload, pid, 1, 2)
                new = wire.pack(pid, 1, my_cert, gx)
            elif from_initiator and pkt.msg_type == 3:
                _c, gx_b = wire.unpack(self.seen[(sim.initiator.identity, 1)], pid, 1, 2)
                cert_j, gy_b, _s = wire.unpack(self.seen[(sim.responder.identity, 2)], pid, 2, 3)
                cls = IsoKESession if proto == "iso-ke" else BaselineKESession
                helper = cls(RESPONDER, G, self.creds, None)
                content = helper._content3(G.deserialize(gy_b), G.deserialize(gx_b), cert_j)
                new = wire.pack(pid, 3, self._sign(sim, content))
        elif proto in ("sigma", "sigma4"):
            if from_initiator and pkt.msg_type == 3:
                # without g^xy the insider can only seal under a key of its own
                (gx_b,) = wire.unpack(self.seen[(sim.initiator.identity, 1)], wire.SIGMA, 1, 1)
                guess = kdf(G, G.exp(G.deserialize(gx_b), self.creds.sk), b"misbinder")
                payload = (wire.lp(self.insider.encode()) + wire.lp(my_cert)
                           + wire.lp(self._sign(sim, b"sigma")) + wire.lp(b""))
                new = wire.pack(wire.SIGMA, 3, seal(guess.ke, guess.km, b"sigma/initiator", payload))
        elif proto == "tls":
            if from_initiator and pkt.msg_type == 3:
                c_b, _cert_i, _cv = wire.unpack(pkt.payload, wire.TLS, 3, 3)
                h = hashlib.sha256(self.seen[(sim.initiator.identity, 1)] + self.seen[(sim.responder.identity, 2)])
                cv = self._sign(sim, b"tls/certificate-verify" + h.digest() + c_b)
                new = wire.pack(wire.TLS, 3, c_b, my_cert, cv)
        if new is None:
            return [(pkt, None)]
        return [(replace(pkt, payload=new), "substitute-identity")]


class Reflector(Adversary):
    """Bounces the initiator's messages back to the initiator itself.

    The first message opens a responder session on the initiator's own
    device; that session's replies are routed back to the original session
    as if they came from the intended peer.
    """

    name = "reflector"
    protocols = KE_PROTOCOLS

    def tap(self, sim, pkt):
        me, peer = sim.initiator.identity, sim.responder.identity
        if pkt.src == me and pkt.conn == PRIMARY_CONN:
            return [(replace(pkt, src=peer, dst=me, conn=REFLECT_CONN), "reflect")]
        if pkt.src == me and pkt.conn == REFLECT_CONN:
            return [(replace(pkt, src=peer, dst=me, conn=PRIMARY_CONN), "reflect")]
        return [(pkt, None)]


class Relay(Adversary):
    """Forwards everything, adding a fixed delay in each direction."""

    name = "relay"

    def __init__(self, rng, relay_delay_ns=67, **params):
        super().__init__(rng, **params)
        self.delay_ns = int(relay_delay_ns)
        if self.delay_ns < 0:
            raise ValueError("relay delay must be non-negative")

    def tap(self, sim, pkt):
        return [(replace(pkt, extra_delay_ns=pkt.extra_delay_ns + self.delay_ns), "relay")]

    def bounding_channel(self, sim, distance_m):
        return RadioChannel(distance_m, extra_delay_ns=self.delay_ns, signal_speed=sim.channel_config.signal_speed)

    def evidence(self, sim):
        result = sim.bounding_result
        if result is not None and result.verdict == "within-bound" and sim.true_distance > sim.bounding_config.threshold_m:
            return [Evidence("relay-accepted", {"true_distance_m": sim.true_distance,
                                                "estimated_distance_m": result.estimated_distance})]
        return []


# final message of each handshake: the one whose loss leaves a party hanging
_DROP_TARGET = {"tls": 4, "sigma4": 4}


class Dropper(Adversary):
    """Denial of service by dropping the handshake's closing message."""

    name = "dropper"

    def tap(self, sim, pkt):
        if pkt.conn == PRIMARY_CONN and pkt.msg_type == _DROP_TARGET.get(sim.protocol, 3):
            return [(pkt, "drop")]
        return [(pkt, None)]

    def bounding_channel(self, sim, distance_m):
        last = sim.bounding_config.rounds - 1
        return RadioChannel(distance_m, lost_rounds=(last,), signal_speed=sim.channel_config.signal_speed)


class MITM(Adversary):
    """Replaces the initiator's ephemeral value with one of its own."""

    name = "mitm"
    protocols = KE_PROTOCOLS + ID_PROTOCOLS

    def tap(self, sim, pkt):
        if pkt.conn != PRIMARY_CONN or pkt.src != sim.initiator.identity:
            return [(pkt, None)]
        G, proto = sim.G, sim.protocol
        mine = G.serialize(G.exp(G.g, G.random_scalar(self.rng)))
        pid, mtype = wire.header(pkt.payload)
        fields = wire.split_fields(pkt.payload[2:])
        if proto in ("iso-ke", "baseline") and mtype == 1:
            fields[1] = mine
        elif proto in ("sigma", "sigma4") and mtype == 1:
            fields[0] = mine
        elif proto == "tls" and mtype == 3:
            fields[0] = mine
        elif proto in ID_PROTOCOLS and mtype == 1:
            fields[0] = mine
        else:
            return [(pkt, None)]
        return [(replace(pkt, payload=wire.pack(pid, mtype, *fields)), "substitute-exponent")]


ADVERSARIES = {
    cls.name: cls
    for cls in (Adversary, Eavesdropper, Replayer, Misbinder, Reflector, Relay, Dropper, MITM)
}


def make_adversary(name, rng, **params):
    try:
        cls = ADVERSARIES[name or "none"]
    except KeyError:
        raise ValueError(f"unknown adversary {name!r}; expected one of {', '.join(sorted(ADVERSARIES))}") from None
    return cls(rng, **params)
