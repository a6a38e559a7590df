"""Exception hierarchy.

Every error carries a stable ``code`` string; handshake aborts, scenario
verdicts and CLI messages report that code rather than the class name.
"""


class HanError(Exception):
    code = "error"

    def __init__(self, message=None):
        super().__init__(message or self.code)


class UnsupportedGroup(HanError):
    code = "unsupported-group"


class MalformedElement(HanError):
    code = "malformed-element"


class InvalidElement(HanError):
    code = "invalid-element"


class DegenerateSecret(HanError):
    code = "degenerate-secret"


class MalformedSignature(HanError):
    code = "malformed-signature"


class MalformedMessage(HanError):
    code = "malformed-message"


class IdentityTaken(HanError):
    code = "identity-taken"


class NotFound(HanError):
    code = "not-found"


class ProtocolOrderViolation(HanError):
    code = "protocol-order-violation"


class HandshakeError(HanError):
    """Base class for errors that abort a handshake session."""

    code = "handshake-error"


class CertInvalid(HandshakeError):
    code = "cert-invalid"


class MisbindingDetected(HandshakeError):
    code = "misbinding-detected"


class ReflectionDetected(HandshakeError):
    code = "reflection-detected"


class RevokedPeer(HandshakeError):
    code = "revoked-peer"


class IdentityBindingFailure(HandshakeError):
    code = "identity-binding-failure"


class KeyMismatch(HandshakeError):
    code = "key-mismatch"


class NegotiationFailure(HandshakeError):
    code = "negotiation-failure"


class TranscriptTamperDetected(HandshakeError):
    code = "transcript-tamper-detected"


class Timeout(HandshakeError):
    code = "timeout"


class MessageNotEncodable(HanError):
    code = "message-not-encodable"


class InvalidKey(HanError):
    code = "invalid-key"


class WrongCiphertextLevel(HanError):
    code = "wrong-ciphertext-level"


class MessageTooLarge(HanError):
    code = "message-too-large"


class BadRandomness(HanError):
    code = "bad-randomness"


class ConfigurationError(HanError):
    code = "configuration-error"


class ScenarioParseError(HanError):
    code = "parse-error"

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ProofRejected(HanError):
    code = "proof-rejected"
