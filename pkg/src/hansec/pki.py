"""Key Generation Center: long-term keypairs, certificates, revocation.

The KGC is offline during handshakes.  Devices cache its public key at
enrollment and consult a :class:`TrustStore`, which also sees the KGC's local
revocation list and current-key registry.
"""

from dataclasses import dataclass

from .errors import (
    CertInvalid,
    IdentityTaken,
    InvalidElement,
    MalformedElement,
    MalformedMessage,
    MalformedSignature,
    NotFound,
    RevokedPeer,
)
from .primitives import Signature, fs_sign, fs_verify
from .wire import lp, split_fields


@dataclass(frozen=True)
class Certificate:
    identity: str
    pk: object
    issuer: str
    sig: Signature

    @staticmethod
    def signed_payload(G, identity, pk):
        return b"cert" + lp(identity.encode()) + G.serialize(pk)

    def to_bytes(self, G):
        return (
            lp(self.identity.encode())
            + lp(self.issuer.encode())
            + lp(G.serialize(self.pk))
            + lp(self.sig.to_bytes(G))
        )

    @classmethod
    def from_bytes(cls, data, G):
        """Decode a certificate; raises :class:`CertInvalid` on any encoding defect."""
        try:
            fields = split_fields(data)
            if len(fields) != 4:
                raise MalformedMessage("certificate has the wrong number of fields")
            identity, issuer = fields[0].decode(), fields[1].decode()
            pk = G.deserialize(fields[2])
            sig = Signature.from_bytes(fields[3], G)
        except (MalformedMessage, MalformedElement, InvalidElement, MalformedSignature, UnicodeDecodeError) as exc:
            raise CertInvalid(f"undecodable certificate: {exc}") from exc
        cert = cls(identity, pk, issuer, sig)
        if cert.to_bytes(G) != data:
            raise CertInvalid("non-canonical certificate encoding")
        return cert


def cert_verify(cert, kgc_pk, G):
    """True iff ``cert`` carries a valid KGC signature over (identity, pk)."""
    if not cert.identity or G.is_identity(cert.pk):
        return False
    try:
        return fs_verify(kgc_pk, Certificate.signed_payload(G, cert.identity, cert.pk), cert.sig, G)
    except (MalformedElement, InvalidElement):
        return False


@dataclass(frozen=True)
class Credentials:
    """A device's long-term secret key, public key and certificate."""

    identity: str
    sk: int
    pk: object
    cert: Certificate


class KGC:
    def __init__(self, G, identity="kgc", rng=None):
        self.G = G
        self.identity = identity
        self._rng = rng
        self._sk = G.random_scalar(rng)
        self.public_key = G.exp(G.g, self._sk)
        self._current = {}
        self._revoked = set()

    def issue(self, identity, pk):
        if identity in self._current:
            raise IdentityTaken(identity)
        return self._sign(identity, pk)

    def _sign(self, identity, pk):
        if not identity:
            raise ValueError("identity must be non-empty")
        G = self.G
        sig = fs_sign(self._sk, self.public_key, Certificate.signed_payload(G, identity, pk), G, self._rng)
        cert = Certificate(identity, pk, self.identity, sig)
        self._current[identity] = cert
        return cert

    def reissue(self, identity, pk):
        """Key evolution: replace a device's key; the old certificate stops being admitted."""
        if identity not in self._current:
            raise NotFound(identity)
        return self._sign(identity, pk)

    def enroll(self, identity, rng=None):
        rng = rng or self._rng
        sk = self.G.random_scalar(rng)
        pk = self.G.exp(self.G.g, sk)
        return Credentials(identity, sk, pk, self.issue(identity, pk))

    def revoke(self, identity):
        if identity not in self._current:
            raise NotFound(identity)
        self._revoked.add(identity)
        return True

    def is_revoked(self, identity):
        return identity in self._revoked

    def is_current(self, cert):
        current = self._current.get(cert.identity)
        return current is not None and current.pk == cert.pk

    def issued_identities(self):
        return frozenset(self._current)

    def trust_store(self):
        return TrustStore(self)


class TrustStore:
    """What a device knows about the KGC: its public key plus the local revocation view.

    ``preprocess`` verifies a certificate ahead of time; :meth:`admit` with
    ``allow_preprocessed=True`` then skips the signature check for those exact
    bytes.  Protocols whose certificates travel in the clear (ISO-KE, TLS) can
    use this; SIGMA cannot, because the peer certificate only arrives
    encrypted inside the handshake.
    """

    def __init__(self, kgc):
        self.G = kgc.G
        self.kgc_pk = kgc.public_key
        self._kgc = kgc
        self._preprocessed = {}

    def preprocess(self, cert):
        if not cert_verify(cert, self.kgc_pk, self.G):
            raise CertInvalid(f"certificate for {cert.identity!r} does not verify")
        self._preprocessed[cert.to_bytes(self.G)] = cert

    def admit(self, cert_bytes, allow_preprocessed=False):
        """Decode and admit a peer certificate, or raise the matching handshake error."""
        cert = self._preprocessed.get(cert_bytes) if allow_preprocessed else None
        if cert is None:
            cert = Certificate.from_bytes(cert_bytes, self.G)
            if not cert_verify(cert, self.kgc_pk, self.G):
                raise CertInvalid(f"certificate for {cert.identity!r} does not verify")
        if self._kgc.is_revoked(cert.identity):
            raise RevokedPeer(cert.identity)
        if not self._kgc.is_current(cert):
            raise CertInvalid(f"certificate for {cert.identity!r} has been superseded")
        return cert
