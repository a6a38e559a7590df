"""Authenticated key exchange: ISO-KE, SIGMA and a TLS-style handshake.

Every handshake is a :class:`HandshakeSession` subclass whose steps are
methods guarded by ``(role, state, expected message type)``.  A step that
fails for any reason aborts the session (``state == "aborted"``, ``error`` set
to the error code), erases the ephemeral secret and re-raises.  The generic
:meth:`HandshakeSession.receive` dispatches an incoming wire message to the
right step and always returns a list of outgoing messages, which is what the
simulator uses.

Session keys come from the Diffie-Hellman value through :func:`kdf` with a
hash of the ordered transcript as label, so a session key is bound to the
exact messages both sides saw.

:class:`BaselineKESession` is a deliberately weakened ISO-KE (signatures over
the exponents only, no certificate or identity binding, key from g^xy alone).
It exists so the attack simulator can show which checks stop which attacks.
"""

import functools
import hashlib

from . import wire
from .errors import (
    HanError,
    IdentityBindingFailure,
    InvalidElement,
    MalformedMessage,
    MisbindingDetected,
    NegotiationFailure,
    ProtocolOrderViolation,
    ReflectionDetected,
    Timeout,
    TranscriptTamperDetected,
)
from .group import count_exponentiations
from .primitives import Signature, fs_sign, fs_verify, kdf, mac, mac_verify, open_sealed, seal
from .wire import lp, split_fields

INITIATOR = "initiator"
RESPONDER = "responder"

ABORTED = "aborted"
ESTABLISHED = "established"

# wire message counts per honest run
MESSAGE_COUNTS = {"iso-ke": 3, "baseline": 3, "sigma": 3, "sigma4": 4, "tls": 5}


def _step(role, state, msg_type=None):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(self, *args):
            if self.state == ABORTED:
                raise ProtocolOrderViolation(f"{self.protocol} session already aborted ({self.error})")
            if self.role != role or self.state != state:
                self._fail(ProtocolOrderViolation(
                    f"{fn.__name__} is a {role} step in state {state!r}; session is {self.role} in {self.state!r}"
                ))
            if msg_type is not None:
                msg = args[0]
                try:
                    pid, mtype = wire.header(msg)
                except MalformedMessage as exc:
                    self._fail(exc)
                if pid != self.pid:
                    self._fail(MalformedMessage(f"protocol id {pid:#04x} on a {self.protocol} session"))
                if mtype != msg_type:
                    self._fail(ProtocolOrderViolation(f"got message {mtype}, expected {msg_type}"))
                self.transcript.append(msg)
            try:
                return fn(self, *args)
            except HanError as exc:
                self._fail(exc)

        wrapper.step = (role, state, msg_type)
        return wrapper

    return deco


class HandshakeSession:
    protocol = None
    pid = None
    reject_self = True

    def __init__(self, role, G, creds, trust, rng=None, expected_peer=None, preprocessed_certs=False):
        if role not in (INITIATOR, RESPONDER):
            raise ValueError(f"role must be {INITIATOR!r} or {RESPONDER!r}")
        self.role = role
        self.G = G
        self.creds = creds
        self.trust = trust
        self.rng = rng
        self.expected_peer = expected_peer
        self.preprocessed_certs = preprocessed_certs
        self.state = "idle"
        self.error = None
        self.transcript = []
        self.keys = None
        self.my_exponent = None
        self.peer_exponent = None
        self._ephemeral = None
        self._peer_cert = None
        self._send_seq = 0
        self._recv_seq = 0

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        steps = {}
        for klass in reversed(cls.__mro__):
            for name, attr in vars(klass).items():
                step = getattr(attr, "step", None)
                if step is not None and step[2] is not None:
                    steps[(step[0], step[1])] = name
        cls._steps = steps

    @property
    def established(self):
        return self.state == ESTABLISHED

    @property
    def aborted(self):
        return self.state == ABORTED

    @property
    def peer_cert(self):
        return self._peer_cert

    @property
    def peer_identity(self):
        return None if self._peer_cert is None else self._peer_cert.identity

    @property
    def my_cert_bytes(self):
        return self.creds.cert.to_bytes(self.G)

    def _fail(self, exc):
        self.state = ABORTED
        self.error = exc.code
        self._ephemeral = None
        raise exc

    def _send(self, msg):
        self.transcript.append(msg)
        return msg

    def _bind_peer(self, cert):
        if self._peer_cert is not None and self._peer_cert.identity != cert.identity:
            raise MisbindingDetected(
                f"peer already bound to {self._peer_cert.identity!r}, refusing {cert.identity!r}"
            )
        if self.reject_self and cert.identity == self.creds.identity:
            raise ReflectionDetected(f"{cert.identity!r} is handshaking with itself")
        if self.reject_self and self.expected_peer is not None and cert.identity != self.expected_peer:
            raise MisbindingDetected(f"expected peer {self.expected_peer!r}, got {cert.identity!r}")
        self._peer_cert = cert

    def _admit(self, cert_bytes, allow_preprocessed):
        cert = self.trust.admit(cert_bytes, allow_preprocessed=allow_preprocessed and self.preprocessed_certs)
        self._bind_peer(cert)
        return cert

    def _element(self, data):
        e = self.G.deserialize(data)
        if self.G.is_identity(e):
            raise InvalidElement("identity element where an exponent was expected")
        return e

    def _fresh_exponent(self):
        self._ephemeral = self.G.random_scalar(self.rng)
        self.my_exponent = self.G.exp(self.G.g, self._ephemeral)
        return self.my_exponent

    def _transcript_hash(self, messages=None):
        h = hashlib.sha256()
        for m in self.transcript if messages is None else messages:
            h.update(m)
        return h.digest()

    def _sign(self, content):
        return fs_sign(self.creds.sk, self.creds.pk, content, self.G, self.rng).to_bytes(self.G)

    def _check_sig(self, sig_bytes, content, failure=MisbindingDetected):
        sig = Signature.from_bytes(sig_bytes, self.G)
        if not fs_verify(self._peer_cert.pk, content, sig, self.G):
            raise failure(f"signature from {self.peer_identity!r} does not cover what this session saw")

    def _establish(self, keys):
        self.keys = keys
        self._ephemeral = None
        self.state = ESTABLISHED
        return keys

    def receive(self, msg):
        """Feed one wire message to the session; returns the messages to send back."""
        name = self._steps.get((self.role, self.state))
        if name is None:
            if self.state == ABORTED:
                raise ProtocolOrderViolation(f"{self.protocol} session already aborted ({self.error})")
            self._fail(ProtocolOrderViolation(f"{self.role} in state {self.state!r} expects no message"))
        out = getattr(self, name)(msg)
        if isinstance(out, bytes):
            return [out]
        if isinstance(out, (list, tuple)):
            return list(out)
        return []

    def timeout(self):
        """Abort because the expected message never arrived (no-op once finished)."""
        if self.state not in (ESTABLISHED, ABORTED):
            try:
                self._fail(Timeout(f"{self.role} gave up in state {self.state!r}"))
            except Timeout:
                pass

    # record layer used after the handshake
    def _direction(self, sending):
        mine = b"i2r" if self.role == INITIATOR else b"r2i"
        theirs = b"r2i" if self.role == INITIATOR else b"i2r"
        return mine if sending else theirs

    def seal_record(self, data):
        if not self.established:
            raise ProtocolOrderViolation("no session keys yet")
        nonce = b"rec" + self._direction(True) + self._send_seq.to_bytes(8, "big")
        self._send_seq += 1
        return seal(self.keys.ke, self.keys.km, nonce, data)

    def open_record(self, data):
        if not self.established:
            raise ProtocolOrderViolation("no session keys yet")
        nonce = b"rec" + self._direction(False) + self._recv_seq.to_bytes(8, "big")
        out = open_sealed(self.keys.ke, self.keys.km, nonce, data)
        self._recv_seq += 1
        return out


class IsoKESession(HandshakeSession):
    """Three messages: Cert_i, g^x / Cert_j, g^y, Sign_j(g^x, g^y, Cert_i) / Sign_i(g^y, g^x, Cert_j)."""

    protocol = "iso-ke"
    pid = wire.ISO_KE

    def _content2(self, gx, gy, initiator_cert):
        return b"iso-ke/2" + lp(self.G.serialize(gx)) + lp(self.G.serialize(gy)) + lp(initiator_cert)

    def _content3(self, gy, gx, responder_cert):
        return b"iso-ke/3" + lp(self.G.serialize(gy)) + lp(self.G.serialize(gx)) + lp(responder_cert)

    def _label(self):
        return self.protocol.encode() + self._transcript_hash()

    @_step(INITIATOR, "idle")
    def init(self):
        gx = self._fresh_exponent()
        self.state = "sent1"
        return self._send(wire.pack(self.pid, 1, self.my_cert_bytes, self.G.serialize(gx)))

    @_step(RESPONDER, "idle", 1)
    def respond(self, msg1):
        cert_i, gx_b = wire.unpack(msg1, self.pid, 1, 2)
        self._admit(cert_i, allow_preprocessed=True)
        gx = self.peer_exponent = self._element(gx_b)
        gy = self._fresh_exponent()
        sig = self._sign(self._content2(gx, gy, cert_i))
        self._peer_cert_bytes = cert_i
        self.state = "sent2"
        return self._send(wire.pack(self.pid, 2, self.my_cert_bytes, self.G.serialize(gy), sig))

    @_step(INITIATOR, "sent1", 2)
    def finish(self, msg2):
        cert_j, gy_b, sig = wire.unpack(msg2, self.pid, 2, 3)
        self._admit(cert_j, allow_preprocessed=True)
        gy = self.peer_exponent = self._element(gy_b)
        gx = self.my_exponent
        self._check_sig(sig, self._content2(gx, gy, self.my_cert_bytes))
        msg3 = self._send(wire.pack(self.pid, 3, self._sign(self._content3(gy, gx, cert_j))))
        self._establish(kdf(self.G, self.G.exp(gy, self._ephemeral), self._label()))
        return msg3

    @_step(RESPONDER, "sent2", 3)
    def complete(self, msg3):
        (sig,) = wire.unpack(msg3, self.pid, 3, 1)
        gx, gy = self.peer_exponent, self.my_exponent
        self._check_sig(sig, self._content3(gy, gx, self.my_cert_bytes))
        return self._establish(kdf(self.G, self.G.exp(gx, self._ephemeral), self._label()))


class BaselineKESession(IsoKESession):
    """ISO-KE with the identity binding removed.  Insecure on purpose."""

    protocol = "baseline"
    pid = wire.BASELINE_KE
    reject_self = False

    def _content2(self, gx, gy, initiator_cert):
        return b"baseline/2" + lp(self.G.serialize(gx)) + lp(self.G.serialize(gy))

    def _content3(self, gy, gx, responder_cert):
        return b"baseline/3" + lp(self.G.serialize(gy)) + lp(self.G.serialize(gx))

    def _label(self):
        return self.protocol.encode()


class SigmaSession(HandshakeSession):
    """SIGMA with identities sent only under K_e.

    ``rounds=3`` (default): g^x / g^y, E(j, Sign_j, MAC(j)) / E(i, Sign_i, MAC(i)),
    which hides the initiator's identity from passive and active attackers.
    ``rounds=4``: g^x / g^y / E(i, ...) / E(j, ...), where the responder reveals
    itself only after it has verified the initiator.
    """

    protocol = "sigma"
    pid = wire.SIGMA

    def __init__(self, role, G, creds, trust, rng=None, expected_peer=None, preprocessed_certs=False, rounds=3):
        if rounds not in (3, 4):
            raise ValueError("SIGMA runs in 3 or 4 rounds")
        # certificates arrive encrypted, so they can never be preprocessed
        super().__init__(role, G, creds, trust, rng, expected_peer, preprocessed_certs=False)
        self.rounds = rounds
        if rounds == 4:
            self.protocol = "sigma4"

    def _derive(self, gx, gy, shared):
        msg1 = self.transcript[0]
        label = b"sigma" + bytes([self.rounds]) + self._transcript_hash([msg1, self.G.serialize(gy)])
        return kdf(self.G, shared, label)

    def _sig_content(self, role, gx, gy):
        return b"sigma/" + role.encode() + lp(self.G.serialize(gx)) + lp(self.G.serialize(gy))

    def _identity_payload(self, keys, gx, gy):
        me = self.creds.identity.encode()
        return (
            lp(me)
            + lp(self.my_cert_bytes)
            + lp(self._sign(self._sig_content(self.role, gx, gy)))
            + lp(mac(keys.km, b"sigma-id/" + self.role.encode() + me))
        )

    def _check_identity_payload(self, keys, payload, gx, gy):
        try:
            ident, cert_b, sig, tag = split_fields(payload)
        except ValueError as exc:
            raise MalformedMessage("identity payload needs four fields") from exc
        peer_role = RESPONDER if self.role == INITIATOR else INITIATOR
        cert = self._admit(cert_b, allow_preprocessed=False)
        if ident != cert.identity.encode():
            raise IdentityBindingFailure("claimed identity differs from the certificate")
        if not mac_verify(keys.km, b"sigma-id/" + peer_role.encode() + ident, tag):
            raise IdentityBindingFailure("MAC over the peer identity does not verify")
        self._check_sig(sig, self._sig_content(peer_role, gx, gy))

    def _seal(self, keys, sender_role, payload):
        return seal(keys.ke, keys.km, b"sigma/" + sender_role.encode(), payload)

    def _open(self, keys, sender_role, data):
        return open_sealed(keys.ke, keys.km, b"sigma/" + sender_role.encode(), data)

    @_step(INITIATOR, "idle")
    def init(self):
        gx = self._fresh_exponent()
        self.state = "sent1"
        return self._send(wire.pack(self.pid, 1, self.G.serialize(gx)))

    @_step(RESPONDER, "idle", 1)
    def respond(self, msg1):
        (gx_b,) = wire.unpack(msg1, self.pid, 1, 1)
        gx = self.peer_exponent = self._element(gx_b)
        gy = self._fresh_exponent()
        self._pending = self._derive(gx, gy, self.G.exp(gx, self._ephemeral))
        self._ephemeral = None
        self.state = "sent2"
        if self.rounds == 4:
            return self._send(wire.pack(self.pid, 2, self.G.serialize(gy)))
        sealed = self._seal(self._pending, RESPONDER, self._identity_payload(self._pending, gx, gy))
        return self._send(wire.pack(self.pid, 2, self.G.serialize(gy), sealed))

    @_step(INITIATOR, "sent1", 2)
    def finish(self, msg2):
        fields = wire.unpack(msg2, self.pid, 2, 1 if self.rounds == 4 else 2)
        gy = self.peer_exponent = self._element(fields[0])
        gx = self.my_exponent
        keys = self._derive(gx, gy, self.G.exp(gy, self._ephemeral))
        self._ephemeral = None
        if self.rounds == 3:
            self._check_identity_payload(keys, self._open(keys, RESPONDER, fields[1]), gx, gy)
        msg3 = self._send(wire.pack(self.pid, 3, self._seal(keys, INITIATOR, self._identity_payload(keys, gx, gy))))
        if self.rounds == 3:
            self._establish(keys)
        else:
            self._pending = keys
            self.state = "sent3"
        return msg3

    @_step(RESPONDER, "sent2", 3)
    def complete(self, msg3):
        (sealed,) = wire.unpack(msg3, self.pid, 3, 1)
        keys, gx, gy = self._pending, self.peer_exponent, self.my_exponent
        self._check_identity_payload(keys, self._open(keys, INITIATOR, sealed), gx, gy)
        if self.rounds == 3:
            return self._establish(keys)
        msg4 = self._send(wire.pack(self.pid, 4, self._seal(keys, RESPONDER, self._identity_payload(keys, gx, gy))))
        self._establish(keys)
        return msg4

    @_step(INITIATOR, "sent3", 4)
    def accept(self, msg4):
        (sealed,) = wire.unpack(msg4, self.pid, 4, 1)
        keys, gx, gy = self._pending, self.my_exponent, self.peer_exponent
        self._check_identity_payload(keys, self._open(keys, RESPONDER, sealed), gx, gy)
        return self._establish(keys)

    def _establish(self, keys):
        self._pending = None
        return super()._establish(keys)

    def _fail(self, exc):
        self._pending = None
        super()._fail(exc)


TLS_VERSION = b"\x00\x01"
TLS_SUITE = b"\x00\x01"  # DH group key transport, SHA-256, hash stream cipher


class TLSSession(HandshakeSession):
    """Five-message mutually authenticated handshake.

    1. client Hello (version, suites, random)
    2. server Hello (version, suite, random), Cert_S, certificate request
    3. client: session key encapsulated to PK_S (ElGamal KEM), Cert_i,
       signature over the transcript so far
    4. client Finish: MAC_{K_m} over the transcript hash
    5. server Finish: MAC_{K_m} over the transcript hash
    """

    protocol = "tls"
    pid = wire.TLS

    def __init__(self, role, G, creds, trust, rng=None, expected_peer=None, preprocessed_certs=False,
                 versions=(TLS_VERSION,), suites=(TLS_SUITE,)):
        super().__init__(role, G, creds, trust, rng, expected_peer, preprocessed_certs)
        self.versions = tuple(versions)
        self.suites = tuple(suites)
        self.version = None
        self.suite = None

    def _random(self):
        rng = self.rng
        if rng is None:
            import secrets
            return secrets.token_bytes(32)
        return rng.getrandbits(256).to_bytes(32, "big")

    def _finished(self, label, n):
        return mac(self.keys.km, label + self._transcript_hash(self.transcript[:n]))

    @_step(INITIATOR, "idle")
    def hello(self):
        self.state = "sent1"
        return self._send(wire.pack(self.pid, 1, b"".join(self.versions), b"".join(self.suites), self._random()))

    init = hello

    @_step(RESPONDER, "idle", 1)
    def respond(self, msg1):
        versions, suites, _client_random = wire.unpack(msg1, self.pid, 1, 3)
        offered_v = [versions[i:i + 2] for i in range(0, len(versions), 2)]
        offered_s = [suites[i:i + 2] for i in range(0, len(suites), 2)]
        self.version = next((v for v in offered_v if v in self.versions), None)
        self.suite = next((s for s in offered_s if s in self.suites), None)
        if self.version is None or self.suite is None:
            raise NegotiationFailure("no common version and cipher suite")
        self.state = "sent2"
        return self._send(wire.pack(self.pid, 2, self.version, self.suite, self._random(), self.my_cert_bytes, b"\x01"))

    @_step(INITIATOR, "sent1", 2)
    def on_server_hello(self, msg2):
        version, suite, _server_random, cert_s, cert_request = wire.unpack(msg2, self.pid, 2, 5)
        if version not in self.versions or suite not in self.suites:
            raise NegotiationFailure("server chose a version or suite that was not offered")
        self.version, self.suite = version, suite
        server = self._admit(cert_s, allow_preprocessed=True)
        if cert_request != b"\x01":
            raise NegotiationFailure("mutual authentication requires a certificate request")
        G = self.G
        k = self._ephemeral = G.random_scalar(self.rng)
        encapsulated = self.my_exponent = G.exp(G.g, k)
        shared = G.exp(server.pk, k)
        self._ephemeral = None
        cv = self._sign(b"tls/certificate-verify" + self._transcript_hash() + G.serialize(encapsulated))
        msg3 = self._send(wire.pack(self.pid, 3, G.serialize(encapsulated), self.my_cert_bytes, cv))
        self.keys = kdf(G, shared, b"tls" + self._transcript_hash())
        msg4 = self._send(wire.pack(self.pid, 4, self._finished(b"client finished", 3)))
        self.state = "sent4"
        return [msg3, msg4]

    @_step(RESPONDER, "sent2", 3)
    def on_key_exchange(self, msg3):
        c_b, cert_i, cv = wire.unpack(msg3, self.pid, 3, 3)
        c = self.peer_exponent = self._element(c_b)
        self._admit(cert_i, allow_preprocessed=True)
        content = b"tls/certificate-verify" + self._transcript_hash(self.transcript[:2]) + c_b
        self._check_sig(cv, content, failure=TranscriptTamperDetected)
        self.keys = kdf(self.G, self.G.exp(c, self.creds.sk), b"tls" + self._transcript_hash())
        self.state = "keyed"

    @_step(RESPONDER, "keyed", 4)
    def on_client_finish(self, msg4):
        (tag,) = wire.unpack(msg4, self.pid, 4, 1)
        if not mac_verify(self.keys.km, b"client finished" + self._transcript_hash(self.transcript[:3]), tag):
            raise TranscriptTamperDetected("client Finish does not match the server's transcript")
        msg5 = self._send(wire.pack(self.pid, 5, self._finished(b"server finished", 4)))
        self._establish(self.keys)
        return msg5

    @_step(INITIATOR, "sent4", 5)
    def on_server_finish(self, msg5):
        (tag,) = wire.unpack(msg5, self.pid, 5, 1)
        if not mac_verify(self.keys.km, b"server finished" + self._transcript_hash(self.transcript[:4]), tag):
            raise TranscriptTamperDetected("server Finish does not match the client's transcript")
        return self._establish(self.keys)

    def _fail(self, exc):
        if self.state != ESTABLISHED:
            self.keys = None
        super()._fail(exc)


def isoke_init(session):
    return session.init()


def isoke_respond(session, msg1):
    return session.respond(msg1)


def isoke_finish(session, msg2):
    return session.finish(msg2)


def isoke_complete(session, msg3):
    return session.complete(msg3)


sigma_init, sigma_respond, sigma_finish, sigma_complete = isoke_init, isoke_respond, isoke_finish, isoke_complete


def run_handshake(initiator, responder, counters=None):
    """Drive two in-process sessions to completion; returns the number of wire messages.

    ``counters`` is an optional ``(initiator_counter, responder_counter)``
    pair of :class:`~hansec.group.ExpCounter` objects charged per party.
    """
    ci, cr = counters if counters is not None else (None, None)

    def step(session, fn, *args):
        counter = ci if session is initiator else cr
        if counter is None:
            return fn(*args)
        with count_exponentiations(counter):
            return fn(*args)

    pending = [(responder, step(initiator, initiator.init))]
    count = 1
    while pending:
        target, msg = pending.pop(0)
        other = initiator if target is responder else responder
        for reply in step(target, target.receive, msg):
            count += 1
            pending.append((other, reply))
    return count


def tls_handshake(client, server):
    """Run the five TLS messages; returns ``(client.keys, server.keys)``."""
    run_handshake(client, server)
    return client.keys, server.keys


SESSION_TYPES = {
    "iso-ke": IsoKESession,
    "baseline": BaselineKESession,
    "sigma": SigmaSession,
    "tls": TLSSession,
}


def make_session(protocol, role, G, creds, trust, rng=None, **kwargs):
    if protocol == "sigma4":
        return SigmaSession(role, G, creds, trust, rng, rounds=4, **kwargs)
    try:
        cls = SESSION_TYPES[protocol]
    except KeyError:
        raise ValueError(f"unknown key-exchange protocol {protocol!r}") from None
    return cls(role, G, creds, trust, rng, **kwargs)
