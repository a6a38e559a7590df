"""One honest, annotated run of a protocol, with a transcript.

Every message is printed with the symbol each field stands for (g^x, Cert_i,
rho, ...).  Parties are labelled by role, never by identity, so the printout
of an identity-hiding protocol carries no identities either.

In ``toy-23`` the identification, commitment and re-encryption demos use the
small hand-checkable values (Schnorr a=3, x=5, mu=4; Okamoto a=(2,5),
x=(1,3), mu=7; Pedersen m=4, r=6; re-encryption x=3, y=4, m=5, r=2) so the
printed numbers can be checked by hand.
"""

import random

from . import commitment, identification as ident, wire
from .delegation import pre as pre_mod
from .errors import ConfigurationError
from .group import make_group
from .proximity import BoundingConfig
from .sim.engine import Simulation
from .sim.model import DeviceProfile
from .sim.transcript import Transcript

DEMO_PROTOCOLS = (
    "schnorr", "okamoto", "pedersen", "iso-ke", "sigma", "sigma4", "tls", "baseline", "distance-bounding", "pre",
)

SYMBOLS = {
    ("schnorr", 1): ["X = g^x"],
    ("schnorr", 2): ["mu"],
    ("schnorr", 3): ["rho = x + a*mu"],
    ("okamoto", 1): ["X = g1^x1 * g2^x2"],
    ("okamoto", 2): ["mu"],
    ("okamoto", 3): ["rho1 = x1 + a1*mu", "rho2 = x2 + a2*mu"],
    ("pedersen", 1): ["c = g1^r * g2^m"],
    ("pedersen", 2): ["m", "r"],
    ("iso-ke", 1): ["Cert_i", "g^x"],
    ("iso-ke", 2): ["Cert_j", "g^y", "Sign_j(g^x, g^y, Cert_i)"],
    ("iso-ke", 3): ["Sign_i(g^y, g^x, Cert_j)"],
    ("baseline", 1): ["Cert_i", "g^x"],
    ("baseline", 2): ["Cert_j", "g^y", "Sign_j(g^x, g^y)"],
    ("baseline", 3): ["Sign_i(g^y, g^x)"],
    ("sigma", 1): ["g^x"],
    ("sigma", 2): ["g^y", "E_Ke(j, Sign_j(g^x, g^y), MAC_Km(j))"],
    ("sigma", 3): ["E_Ke(i, Sign_i(g^x, g^y), MAC_Km(i))"],
    ("sigma4", 1): ["g^x"],
    ("sigma4", 2): ["g^y"],
    ("sigma4", 3): ["E_Ke(i, Sign_i(g^x, g^y), MAC_Km(i))"],
    ("sigma4", 4): ["E_Ke(j, Sign_j(g^x, g^y), MAC_Km(j))"],
    ("tls", 1): ["Hello.version", "Hello.cipher_suites", "Hello.random"],
    ("tls", 2): ["Hello.version", "Hello.cipher_suite", "Hello.random", "Cert_S", "Request_Cert_i"],
    ("tls", 3): ["Session key_PK_S (g^k)", "Cert_i", "CertificateVerify"],
    ("tls", 4): ["Finish_i = MAC_Km(H(1..3))"],
    ("tls", 5): ["Finish_S = MAC_Km(H(1..4))"],
    ("distance-bounding", 1): ["i", "c_i"],
    ("distance-bounding", 2): ["i", "f(K, i, c_i)"],
    ("pre", 1): ["level", "c1 = (g^x)^r", "c2 = m * g^r"],
}


def _show(data, small):
    if small and len(data) <= 8:
        return str(int.from_bytes(data, "big"))
    text = data.hex()
    return text if len(text) <= 48 else f"{text[:40]}...({len(data)} bytes)"


def _protocol_name(protocol, record):
    if protocol in ("sigma4",):
        return protocol
    return wire.PROTOCOL_NAMES.get(record.protocol_id, protocol)


def render(protocol, G, transcript, roles):
    """Annotated lines for every transcript record."""
    small = G.name == "toy-23"
    lines = []
    for rec in transcript:
        name = _protocol_name(protocol, rec)
        symbols = SYMBOLS.get((name, rec.msg_type), [])
        fields = wire.split_fields(rec.payload[2:])
        lines.append(f"[{rec.seq}] {roles.get(rec.sender, '?')} -> {roles.get(rec.receiver, '?')}  "
                     f"(protocol {rec.protocol_id:#04x}, message {rec.msg_type})")
        for i, f in enumerate(fields):
            label = symbols[i] if i < len(symbols) else f"field {i}"
            lines.append(f"      {label} = {_show(f, small)}")
    return lines


class _Scripted:
    """Returns the given values from ``randrange`` in order, then falls back to a seeded RNG."""

    def __init__(self, values, seed):
        self._values = list(values)
        self._rng = random.Random(seed)

    def randrange(self, *args):
        if self._values:
            return self._values.pop(0)
        return self._rng.randrange(*args)

    def __getattr__(self, name):
        return getattr(self._rng, name)


def _identification(protocol, G, seed, toy):
    transcript = Transcript()
    roles = {"owner": "prover", "cloud": "verifier"}
    if protocol == "schnorr":
        rng = _Scripted([3, 5, 4] if toy else [], seed)
        keys = ident.SchnorrKeys.generate(G, rng)
        session, X = ident.schnorr_commit(keys, G, rng)
    else:
        rng = _Scripted([2, 5, 1, 3, 7] if toy else [], seed)
        keys = ident.OkamotoKeys.generate(G, rng)
        session, X = ident.okamoto_commit(keys, G, rng)
    verifier = ident.VerifierSession(protocol, G, keys.pk)
    transcript.add(0, "owner", "cloud", ident.encode_commit(protocol, G, X))
    mu = verifier.receive_commitment(X, rng)
    transcript.add(1, "cloud", "owner", ident.encode_challenge(protocol, G, mu))
    respond = ident.schnorr_respond if protocol == "schnorr" else ident.okamoto_respond
    response = respond(session, mu)
    transcript.add(2, "owner", "cloud", ident.encode_response(protocol, G, response))
    ok = verifier.check(response)
    summary = [f"public key A = {_show(G.serialize(keys.pk), toy)}", f"verifier {'accepts' if ok else 'rejects'}"]
    return transcript, roles, ok, summary


def _pedersen(G, seed, toy):
    rng = random.Random(seed)
    transcript = Transcript()
    m = 4 if toy else rng.randrange(G.q)
    c, opening = commitment.commit(m, G, rng, r=6 if toy else None)
    transcript.add(0, "owner", "cloud", commitment.encode_commit(G, c))
    transcript.add(1, "owner", "cloud", commitment.encode_reveal(G, opening))
    ok = commitment.reveal(c, opening, G) == m
    return transcript, {"owner": "committer", "cloud": "receiver"}, ok, [f"opening {'verifies' if ok else 'fails'}"]


def _pre(G, seed, toy):
    rng = random.Random(seed)
    transcript = Transcript()
    if toy:
        x, y, m, r = 3, 4, 5, 2
    else:
        x, y, r = G.random_scalar(rng), G.random_scalar(rng), G.random_scalar(rng)
        m = G.exp(G.g, G.random_scalar(rng))
    c = pre_mod.pre_encrypt(m, G.exp(G.g, x), G, r=r)
    transcript.add(0, "owner", "proxy", pre_mod.encode_ciphertext(c, G))
    rk = pre_mod.pre_rekey(x, y, G)
    c2 = pre_mod.pre_reencrypt(c, rk, G)
    transcript.add(1, "proxy", "delegatee", pre_mod.encode_ciphertext(c2, G))
    out = pre_mod.pre_decrypt_delegatee(c2, y, G)
    ok = out == m
    summary = [f"rk = y/x mod q = {rk.rk if toy else '(hidden)'}",
               f"delegatee recovers {'m' if ok else 'a different value'}" + (f" = {out}" if toy else "")]
    return transcript, {"owner": "delegator", "proxy": "proxy", "delegatee": "delegatee"}, ok, summary


def _simulated(protocol, G, seed, bounding_config):
    devices = [DeviceProfile("phone", "phone", (0, 0)), DeviceProfile("lock", "lock", (5, 0))]
    channel = "D2DWL" if protocol == "distance-bounding" else "D2DW"
    sim = Simulation(devices, protocol, "none", seed, group=G.name, channel=channel,
                     bounding_config=bounding_config, insecure=True)
    outcome = sim.run()
    if protocol == "distance-bounding":
        roles = {"phone": "verifier", "lock": "prover"}
        r = sim.bounding_result
        summary = [f"estimated distance {r.estimated_distance:.3f} m, verdict {r.verdict}"]
    else:
        roles = {"phone": "initiator", "lock": "responder"}
        a = sim.nodes["phone"].sessions[1]
        b = sim.nodes["lock"].sessions[1]
        same = a.keys is not None and a.keys == b.keys
        summary = [f"session keys {'match' if same else 'differ'}"]
    summary.append(f"verdict {outcome.verdict}")
    return outcome.transcript, roles, outcome.verdict.kind == "completed", summary


def run_demo(protocol, group="prime192v1", seed=0, bounding_config=None):
    """Return ``(transcript, printed_lines, ok)`` for one honest run."""
    if protocol not in DEMO_PROTOCOLS:
        raise ConfigurationError(f"unknown demo protocol {protocol!r}; expected one of {', '.join(DEMO_PROTOCOLS)}")
    G = make_group(group)
    toy = G.name == "toy-23"
    if protocol in ("schnorr", "okamoto"):
        transcript, roles, ok, summary = _identification(protocol, G, seed, toy)
    elif protocol == "pedersen":
        transcript, roles, ok, summary = _pedersen(G, seed, toy)
    elif protocol == "pre":
        transcript, roles, ok, summary = _pre(G, seed, toy)
    else:
        transcript, roles, ok, summary = _simulated(protocol, G, seed, bounding_config or BoundingConfig())
    lines = [f"{protocol} over {G.name}, seed {seed}"]
    lines += render(protocol, G, transcript, roles)
    lines += summary
    lines.append(f"{len(transcript)} messages")
    return transcript, lines, ok
