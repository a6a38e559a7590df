import hashlib
import hmac

import pytest
from hypothesis import given, settings, strategies as st

from hansec import wire
from hansec.errors import DegenerateSecret, KeyMismatch, MalformedMessage, MalformedSignature
from hansec.group import make_group
from hansec.primitives import (
    Signature, fs_sign, fs_verify, hash_parts, kdf, mac, mac_verify, open_sealed, seal,
)


def test_hash_parts_is_length_prefixed():
    assert hash_parts(b"t", b"ab", b"c") != hash_parts(b"t", b"a", b"bc")
    assert hash_parts(b"t", b"x") != hash_parts(b"u", b"x")
    expected = hashlib.sha256(b"hansec/t" + (1).to_bytes(4, "big") + b"x").digest()
    assert hash_parts(b"t", b"x") == expected


def test_mac_is_hmac_sha256():
    assert mac(b"k", b"m") == hmac.new(b"k", b"m", hashlib.sha256).digest()
    assert mac_verify(b"k", b"m", mac(b"k", b"m"))
    assert not mac_verify(b"k", b"n", mac(b"k", b"m"))


def test_kdf_separates_keys(any_group):
    G = any_group
    keys = kdf(G, G.g, b"label")
    assert len({keys.ks, keys.ke, keys.km}) == 3
    assert kdf(G, G.g, b"label") == keys
    assert kdf(G, G.g, b"other") != keys
    with pytest.raises(DegenerateSecret):
        kdf(G, G.identity, b"label")


@settings(max_examples=50, deadline=None)
@given(st.binary(max_size=300), st.binary(min_size=1, max_size=16))
def test_seal_roundtrip(data, nonce):
    ke, km = bytes(32), bytes(range(32))
    sealed = seal(ke, km, nonce, data)
    assert open_sealed(ke, km, nonce, sealed) == data
    if data:
        assert sealed[:len(data)] != data or len(data) < 4


def test_seal_rejects_tampering():
    ke, km = b"e" * 32, b"m" * 32
    sealed = bytearray(seal(ke, km, b"n", b"secret payload"))
    sealed[0] ^= 1
    with pytest.raises(KeyMismatch):
        open_sealed(ke, km, b"n", bytes(sealed))
    with pytest.raises(KeyMismatch):
        open_sealed(ke, b"x" * 32, b"n", seal(ke, km, b"n", b"abc"))
    with pytest.raises(KeyMismatch):
        open_sealed(ke, km, b"other", seal(ke, km, b"n", b"abc"))
    with pytest.raises(KeyMismatch):
        open_sealed(ke, km, b"n", b"short")


def test_signatures(any_group, rng):
    G = any_group
    sk = G.random_scalar(rng)
    pk = G.exp(G.g, sk)
    sig = fs_sign(sk, pk, b"message", G, rng)
    assert fs_verify(pk, b"message", sig, G)
    if not G.insecure:  # with q = 11 a wrong message passes with probability 1/11
        assert not fs_verify(pk, b"messagf", sig, G)
        assert not fs_verify(G.exp(G.g, sk + 1), b"message", sig, G)
    blob = sig.to_bytes(G)
    assert Signature.from_bytes(blob, G) == sig
    assert len(blob) == G.element_bytes + 2 * Signature.scalar_width(G)
    with pytest.raises(MalformedSignature):
        Signature.from_bytes(blob[:-1], G)


def test_signature_scalars_must_be_reduced(toy, rng):
    sk = 3
    pk = toy.exp(toy.g, sk)
    sig = fs_sign(sk, pk, b"m", toy, rng)
    w = Signature.scalar_width(toy)
    blob = toy.serialize(sig.X) + (sig.e + toy.q).to_bytes(w, "big") + sig.rho.to_bytes(w, "big")
    with pytest.raises(MalformedSignature):
        Signature.from_bytes(blob, toy)


def test_wire_framing():
    msg = wire.pack(wire.ISO_KE, 2, b"a", b"", b"xyz")
    assert msg[:2] == bytes((0x04, 2))
    assert wire.unpack(msg, wire.ISO_KE, 2, 3) == [b"a", b"", b"xyz"]
    with pytest.raises(MalformedMessage):
        wire.unpack(msg, wire.SIGMA, 2)
    with pytest.raises(MalformedMessage):
        wire.unpack(msg, wire.ISO_KE, 3)
    with pytest.raises(MalformedMessage):
        wire.unpack(msg, wire.ISO_KE, 2, 2)
    with pytest.raises(MalformedMessage):
        wire.unpack(msg[:-1], wire.ISO_KE, 2)
    with pytest.raises(MalformedMessage):
        wire.header(b"\x04")


@settings(max_examples=100)
@given(st.lists(st.binary(max_size=40), max_size=6))
def test_split_fields_inverts_lp(fields):
    assert wire.split_fields(b"".join(wire.lp(f) for f in fields)) == fields
