import random

import mpmath
import pytest
import sympy
from cryptography.hazmat.primitives.asymmetric import ec
from hypothesis import given, settings, strategies as st

from hansec.errors import InvalidElement, MalformedElement, MessageNotEncodable, UnsupportedGroup
from hansec.group import (
    MODP_1024_P, P192_GX, P192_GY, P192_N, P192_P, count_exponentiations, make_group,
)
from hansec.numtheory import is_probable_prime, jacobi, random_prime, sqrt_mod


def test_toy_group_parameters(toy):
    assert (toy.p, toy.q, toy.g, toy.g2) == (23, 11, 2, 3)
    # g2 = g^8, the known discrete log used for equivocation
    assert pow(2, 8, 23) == 3
    assert toy.insecure
    subgroup = {pow(2, k, 23) for k in range(11)}
    assert subgroup == {1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18}


def test_modp_1024_matches_rfc_formula():
    # 2^1024 - 2^960 - 1 + 2^64 * (floor(2^894 pi) + 129093)
    with mpmath.workdps(400):
        pi_term = int(mpmath.floor(mpmath.mpf(2) ** 894 * mpmath.pi))
    assert MODP_1024_P == 2**1024 - 2**960 - 1 + 2**64 * (pi_term + 129093)
    assert sympy.isprime(MODP_1024_P)
    assert sympy.isprime((MODP_1024_P - 1) // 2)
    G = make_group("modp-1024")
    assert G.q == (MODP_1024_P - 1) // 2 and pow(G.g, G.q, G.p) == 1


def test_p192_constants():
    assert sympy.isprime(P192_P) and sympy.isprime(P192_N)
    G = make_group("prime192v1")
    assert G.on_curve((P192_GX, P192_GY))
    assert G.exp(G.g, P192_N) is None
    assert G.exp(G.g, P192_N - 1) == G.inv(G.g)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=P192_N - 1))
def test_curve_scalar_mult_matches_openssl(k):
    G = make_group("prime192v1")
    nums = ec.derive_private_key(k, ec.SECP192R1()).public_key().public_numbers()
    assert G.exp(G.g, k) == (nums.x, nums.y)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**1100))
def test_modp_exp_matches_pow(k):
    G = make_group("modp-1024")
    assert G.exp(G.g, k) == pow(2, k % G.q, G.p)


@settings(max_examples=50, deadline=None)
@given(a=st.integers(min_value=0, max_value=P192_N), b=st.integers(min_value=0, max_value=P192_N))
def test_curve_exponent_laws(a, b):
    G = make_group("prime192v1")
    assert G.mul(G.exp(G.g, a), G.exp(G.g, b)) == G.exp(G.g, a + b)
    assert G.exp(G.exp(G.g, a), b) == G.exp(G.g, a * b)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_serialize_roundtrip(k):
    for name in ("toy-23", "modp-1024", "prime192v1"):
        G = make_group(name)
        e = G.exp(G.g, k)
        assert G.deserialize(G.serialize(e)) == e
        assert len(G.serialize(e)) == G.element_bytes or e is None


def test_deserialize_rejects_non_members(toy):
    with pytest.raises(InvalidElement):
        toy.deserialize(bytes([5]))  # 5 is a non-residue mod 23
    with pytest.raises(InvalidElement):
        toy.deserialize(bytes([0]))
    with pytest.raises(MalformedElement):
        toy.deserialize(b"\x00\x04")
    G = make_group("prime192v1")
    bad = b"\x04" + (1).to_bytes(24, "big") + (1).to_bytes(24, "big")
    with pytest.raises(InvalidElement):
        G.deserialize(bad)
    with pytest.raises(MalformedElement):
        G.deserialize(b"\x02" + bytes(48))


def test_membership_is_exactly_the_subgroup(toy):
    subgroup = {pow(2, k, 23) for k in range(11)}
    assert {e for e in range(1, 23) if toy.is_member(e)} == subgroup


def test_second_generators_are_independent_of_g(real_group):
    G = real_group
    assert G.g1 == G.g
    assert G.is_member(G.g2) and not G.is_identity(G.g2) and G.g2 != G.g


def test_unknown_group():
    with pytest.raises(UnsupportedGroup):
        make_group("secp256k1")


def test_groups_are_shared():
    assert make_group("modp-1024") is make_group("modp-1024")


def test_exponentiation_counter(toy):
    with count_exponentiations() as c:
        toy.exp(toy.g, 3)
        toy.mul(toy.g, toy.g)
        with count_exponentiations() as inner:
            toy.exp(toy.g, 4)
        toy.exp(toy.g, 5)
    assert c.count == 2 and inner.count == 1


@pytest.mark.parametrize("name", ["modp-1024", "prime192v1"])
def test_encode_bytes_roundtrip(name):
    G = make_group(name)
    for data in (b"", b"x", b"hello home network", bytes(range(20))):
        e = G.encode_bytes(data)
        assert G.is_member(e)
        assert G.decode_bytes(e) == data
    with pytest.raises(MessageNotEncodable):
        G.encode_bytes(bytes(200))


def test_jacobi_matches_sympy():
    rng = random.Random(5)
    for _ in range(300):
        n = rng.randrange(3, 10**6) | 1
        a = rng.randrange(0, 10**6)
        assert jacobi(a, n) == sympy.jacobi_symbol(a, n)


def test_sqrt_mod():
    p = P192_P
    rng = random.Random(6)
    for _ in range(20):
        x = rng.randrange(1, p)
        r = sqrt_mod(x * x % p, p)
        assert r * r % p == x * x % p


def test_primality_matches_sympy():
    rng = random.Random(7)
    for n in range(2, 3000):
        assert is_probable_prime(n, rng) == sympy.isprime(n)
    p = random_prime(256, rng)
    assert p.bit_length() == 256 and sympy.isprime(p)
