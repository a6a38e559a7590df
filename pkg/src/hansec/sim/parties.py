"""Identification prover/verifier wrapped in the handshake-session interface.

The simulator drives every party through ``init`` / ``receive`` / ``timeout``;
these adapters give the Schnorr and Okamoto proofs that shape.
"""

from .. import identification as ident
from ..errors import HanError, ProofRejected, ProtocolOrderViolation, Timeout
from ..key_exchange import ABORTED, ESTABLISHED, INITIATOR, RESPONDER


class _Party:
    keys = None
    peer_identity = None

    def __init__(self, scheme, G, rng):
        self.protocol = scheme
        self.G = G
        self.rng = rng
        self.state = "idle"
        self.error = None
        self.transcript = []

    @property
    def established(self):
        return self.state == ESTABLISHED

    @property
    def aborted(self):
        return self.state == ABORTED

    def _fail(self, exc):
        self.state = ABORTED
        self.error = exc.code
        raise exc

    def _guard(self, expected):
        if self.state != expected:
            if self.state == ABORTED:
                raise ProtocolOrderViolation("session already aborted")
            self._fail(ProtocolOrderViolation(f"{self.role} in state {self.state!r}"))

    def timeout(self):
        if self.state not in (ESTABLISHED, ABORTED):
            try:
                self._fail(Timeout(f"{self.role} gave up in state {self.state!r}"))
            except Timeout:
                pass


class ProverParty(_Party):
    role = INITIATOR

    def __init__(self, scheme, G, keys, rng=None):
        super().__init__(scheme, G, rng)
        self.proof_keys = keys
        self._session = None

    def init(self):
        self._guard("idle")
        commit = ident.schnorr_commit if self.protocol == "schnorr" else ident.okamoto_commit
        self._session, X = commit(self.proof_keys, self.G, self.rng)
        msg = ident.encode_commit(self.protocol, self.G, X)
        self.transcript.append(msg)
        self.state = "committed"
        return msg

    def receive(self, msg):
        self._guard("committed")
        self.transcript.append(msg)
        try:
            mu = ident.decode_challenge(self.protocol, self.G, msg)
            respond = ident.schnorr_respond if self.protocol == "schnorr" else ident.okamoto_respond
            out = ident.encode_response(self.protocol, self.G, respond(self._session, mu))
        except HanError as exc:
            self._fail(exc)
        self.transcript.append(out)
        # the prover's part is done once its response is on the wire
        self.state = ESTABLISHED
        return [out]


class VerifierParty(_Party):
    role = RESPONDER

    def __init__(self, scheme, G, prover_pk, rng=None):
        super().__init__(scheme, G, rng)
        self._verifier = ident.VerifierSession(scheme, G, prover_pk)

    def receive(self, msg):
        self.transcript.append(msg)
        try:
            if self.state == "idle":
                X = ident.decode_commit(self.protocol, self.G, msg)
                mu = self._verifier.receive_commitment(X, self.rng)
                out = ident.encode_challenge(self.protocol, self.G, mu)
                self.transcript.append(out)
                self.state = "challenged"
                return [out]
            self._guard("challenged")
            response = ident.decode_response(self.protocol, self.G, msg)
            if not self._verifier.check(response):
                raise ProofRejected(f"{self.protocol} response does not verify")
        except HanError as exc:
            if self.state == ABORTED:
                raise
            self._fail(exc)
        self.state = ESTABLISHED
        return []
