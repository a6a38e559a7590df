import pytest
from hypothesis import given, settings, strategies as st

from hansec import identification as ident
from hansec.errors import MalformedMessage, ProtocolOrderViolation
from hansec.group import count_exponentiations, make_group

from conftest import scripted
from oracle import power

P, Q = 23, 11


def test_naive_oracle_schnorr_vector():
    a, x, mu = 3, 5, 4
    A, X = power(2, a, P), power(2, x, P)
    rho = (x + a * mu) % Q
    assert (A, X, rho) == (8, 9, 6)
    assert power(2, rho, P) == X * power(A, mu, P) % P


def test_naive_oracle_okamoto_vector():
    (a1, a2), (x1, x2), mu = (2, 5), (1, 3), 7
    A = power(2, a1, P) * power(3, a2, P) % P
    X = power(2, x1, P) * power(3, x2, P) % P
    rho = ((x1 + mu * a1) % Q, (x2 + mu * a2) % Q)
    assert (A, X, rho) == (6, 8, (4, 5))
    assert power(2, rho[0], P) * power(3, rho[1], P) % P == X * power(A, mu, P) % P


def test_schnorr_toy_vector(toy):
    rng = scripted(3, 5, 4)
    keys = ident.SchnorrKeys.generate(toy, rng)
    session, X = ident.schnorr_commit(keys, toy, rng)
    mu = ident.schnorr_challenge(toy, rng)
    rho = ident.schnorr_respond(session, mu)
    assert (keys.pk, X, mu, rho) == (8, 9, 4, 6)
    assert ident.schnorr_verify(toy, X, keys.pk, mu, rho)


def test_okamoto_toy_vector(toy):
    rng = scripted(2, 5, 1, 3, 7)
    keys = ident.OkamotoKeys.generate(toy, rng)
    session, X = ident.okamoto_commit(keys, toy, rng)
    mu = ident.okamoto_challenge(toy, rng)
    rho = ident.okamoto_respond(session, mu)
    assert (keys.pk, X, mu, rho) == (6, 8, 7, (4, 5))
    assert ident.okamoto_verify(toy, X, keys.pk, mu, *rho)


def test_prover_exponentiation_counts(real_group, rng):
    G = real_group
    keys = ident.SchnorrKeys.generate(G, rng)
    with count_exponentiations() as c:
        s, X = ident.schnorr_commit(keys, G, rng)
        ident.schnorr_respond(s, 5)
    assert c.count == 1
    keys2 = ident.OkamotoKeys.generate(G, rng)
    with count_exponentiations() as c:
        s, X = ident.okamoto_commit(keys2, G, rng)
        ident.okamoto_respond(s, 5)
    assert c.count == 2


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_honest_runs_accept(seed):
    import random

    rng = random.Random(seed)
    G = make_group("prime192v1")
    keys = ident.SchnorrKeys.generate(G, rng)
    s, X = ident.schnorr_commit(keys, G, rng)
    mu = ident.schnorr_challenge(G, rng)
    assert ident.schnorr_verify(G, X, keys.pk, mu, ident.schnorr_respond(s, mu))


def test_wrong_key_rejected(real_group, rng):
    G = real_group
    keys = ident.SchnorrKeys.generate(G, rng)
    imposter = ident.SchnorrKeys.generate(G, rng)
    s, X = ident.schnorr_commit(imposter, G, rng)
    mu = ident.schnorr_challenge(G, rng)
    assert not ident.schnorr_verify(G, X, keys.pk, mu, ident.schnorr_respond(s, mu))


def test_special_soundness_extractor(real_group, rng):
    G = real_group
    keys = ident.SchnorrKeys.generate(G, rng)
    x = G.random_scalar(rng)
    mu1, mu2 = 17, 99
    rho1, rho2 = (x + keys.sk * mu1) % G.q, (x + keys.sk * mu2) % G.q
    assert ident.extract_schnorr_secret(G, mu1, rho1, mu2, rho2) == keys.sk
    with pytest.raises(ValueError):
        ident.extract_schnorr_secret(G, 3, rho1, 3, rho2)


def test_session_is_single_use(toy):
    rng = scripted(3, 5, 4)
    keys = ident.SchnorrKeys.generate(toy, rng)
    session, X = ident.schnorr_commit(keys, toy, rng)
    ident.schnorr_respond(session, 4)
    assert session.ephemeral is None and session.state is ident.State.RESPONDED
    with pytest.raises(ProtocolOrderViolation):
        ident.schnorr_respond(session, 5)


def test_verifier_rejects_second_response(toy, rng):
    keys = ident.SchnorrKeys.generate(toy, rng)
    session, X = ident.schnorr_commit(keys, toy, rng)
    v = ident.VerifierSession("schnorr", toy, keys.pk)
    mu = v.receive_commitment(X, rng)
    rho = ident.schnorr_respond(session, mu)
    assert v.check(rho)
    assert not v.check(rho)
    with pytest.raises(ProtocolOrderViolation):
        v.receive_commitment(X, rng)


@pytest.mark.parametrize("scheme", ["schnorr", "okamoto"])
def test_wire_roundtrip(real_group, rng, scheme):
    G = real_group
    X = G.exp(G.g, 12345)
    assert ident.decode_commit(scheme, G, ident.encode_commit(scheme, G, X)) == X
    assert ident.decode_challenge(scheme, G, ident.encode_challenge(scheme, G, 77)) == 77
    resp = (5, 6) if scheme == "okamoto" else 5
    assert ident.decode_response(scheme, G, ident.encode_response(scheme, G, resp)) == resp
    with pytest.raises(MalformedMessage):
        ident.decode_commit("okamoto" if scheme == "schnorr" else "schnorr", G, ident.encode_commit(scheme, G, X))
